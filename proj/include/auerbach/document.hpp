#pragma once

#include "auerbach/core.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace auerbach {

/// The on-disk interchange format: p as a string ("1", "inf" or a decimal),
/// the dimension, the row matrix, and optional provenance metadata.
struct MatrixDocument {
  PExponent p;
  int n = 0;
  Matrix rows;
  std::optional<std::string> label;
  std::optional<double> residual;
  std::optional<std::string> provenance;

  static MatrixDocument from_basis(const BasisMatrix& B) {
    MatrixDocument doc;
    doc.p = B.p;
    doc.n = B.n();
    doc.rows = B.rows;
    return doc;
  }

  BasisMatrix to_basis() const { return BasisMatrix(rows, p); }
};

inline nlohmann::json to_json(const MatrixDocument& doc) {
  nlohmann::json j;
  j["p"] = doc.p.str();
  j["n"] = doc.n;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < doc.rows.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < doc.rows.cols(); ++k) row.push_back(doc.rows(i, k));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  nlohmann::json meta;
  if (doc.label) meta["label"] = *doc.label;
  if (doc.residual) meta["residual"] = *doc.residual;
  if (doc.provenance) meta["provenance"] = *doc.provenance;
  if (!meta.empty()) j["metadata"] = std::move(meta);
  return j;
}

inline MatrixDocument document_from_json(const nlohmann::json& j) {
  MatrixDocument doc;
  const auto& jp = j.at("p");
  doc.p = jp.is_string() ? PExponent::parse(jp.get<std::string>())
                         : PExponent::finite(jp.get<double>());
  doc.n = j.at("n").get<int>();
  if (doc.n < 1) throw std::invalid_argument("MatrixDocument: n >= 1 required");
  const auto& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != doc.n) {
    throw std::invalid_argument("MatrixDocument: rows must be an n x n array");
  }
  doc.rows.resize(doc.n, doc.n);
  for (int i = 0; i < doc.n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != doc.n) {
      throw std::invalid_argument("MatrixDocument: rows must be an n x n array");
    }
    for (int k = 0; k < doc.n; ++k) doc.rows(i, k) = rows[i][k].get<double>();
  }
  if (!doc.rows.allFinite()) throw std::invalid_argument("MatrixDocument: non-finite entry");
  if (j.contains("metadata")) {
    const auto& meta = j["metadata"];
    if (meta.contains("label")) doc.label = meta["label"].get<std::string>();
    if (meta.contains("residual")) doc.residual = meta["residual"].get<double>();
    if (meta.contains("provenance")) doc.provenance = meta["provenance"].get<std::string>();
  }
  return doc;
}

inline MatrixDocument parse_document(std::istream& in) {
  nlohmann::json j;
  in >> j;
  return document_from_json(j);
}

/// Reads a document from a path, or from stdin when the path is "-".
inline MatrixDocument load_document(const std::string& path) {
  if (path == "-") return parse_document(std::cin);
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  return parse_document(f);
}

/// Whitespace matrix dump for quick inspection (--format text).
inline std::string format_text(const MatrixDocument& doc) {
  std::ostringstream os;
  os.precision(17);
  os << "# p=" << doc.p.str() << " n=" << doc.n << "\n";
  for (Eigen::Index i = 0; i < doc.rows.rows(); ++i) {
    for (Eigen::Index k = 0; k < doc.rows.cols(); ++k) {
      os << doc.rows(i, k) << (k + 1 < doc.rows.cols() ? " " : "\n");
    }
  }
  return os.str();
}

}  // namespace auerbach
