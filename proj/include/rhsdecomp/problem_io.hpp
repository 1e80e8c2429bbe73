#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "rhsdecomp/problem.hpp"

namespace rhsd {

struct ProblemFile {
  DecomposableLP problem;
  std::optional<Vec> penalty;  // the optional "t" field
};

namespace detail {

inline Vec read_vec(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field + ": expected an array");
  Vec out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw FormatError(field + ": expected numbers");
    double v = e.get<double>();
    if (!std::isfinite(v)) throw FormatError(field + ": non-finite value");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline ProblemFile problem_from_json(const nlohmann::json& doc) {
  for (const char* key : {"l", "m", "blocks", "b"})
    if (!doc.contains(key)) throw FormatError(std::string("missing field: ") + key);

  const auto l = doc.at("l").get<long long>();
  const auto m = doc.at("m").get<long long>();
  if (l < 1) throw FormatError("l: must be a positive integer");
  if (m < 1) throw FormatError("m: must be a positive integer");

  ProblemFile out;
  out.problem.b = detail::read_vec(doc.at("b"), "b");
  if (out.problem.b.size() != static_cast<std::size_t>(m))
    throw FormatError("b: length " + std::to_string(out.problem.b.size()) +
                      " does not match m=" + std::to_string(m));

  const auto& blocks = doc.at("blocks");
  if (!blocks.is_array() || blocks.size() != static_cast<std::size_t>(l))
    throw FormatError("blocks: expected an array of length l=" + std::to_string(l));

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string where = "blocks[" + std::to_string(i) + "]";
    const auto& jb = blocks[i];
    if (!jb.contains("c") || !jb.contains("A"))
      throw FormatError(where + ": missing c or A");
    Block blk;
    blk.c = detail::read_vec(jb.at("c"), where + ".c");
    const auto& ja = jb.at("A");
    if (!ja.is_array() || ja.size() != static_cast<std::size_t>(m))
      throw FormatError(where + ".A: expected m=" + std::to_string(m) + " rows");
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < ja.size(); ++r) {
      rows.push_back(detail::read_vec(ja[r], where + ".A[" + std::to_string(r) + "]"));
      if (rows.back().size() != blk.c.size())
        throw FormatError(where + ".A[" + std::to_string(r) +
                          "]: row length does not match c length");
    }
    blk.A = Matrix::from_rows(rows);
    out.problem.blocks.push_back(std::move(blk));
  }

  if (doc.contains("t")) {
    Vec t = detail::read_vec(doc.at("t"), "t");
    if (t.size() != static_cast<std::size_t>(m))
      throw FormatError("t: length does not match m");
    for (double v : t)
      if (v < 0.0) throw FormatError("t: entries must be nonnegative");
    out.penalty = std::move(t);
  }

  out.problem.validate();
  return out;
}

inline nlohmann::json problem_to_json(const DecomposableLP& p,
                                      const std::optional<Vec>& penalty = std::nullopt) {
  nlohmann::json doc;
  doc["l"] = p.num_blocks();
  doc["m"] = p.num_resources();
  doc["b"] = p.b;
  doc["blocks"] = nlohmann::json::array();
  for (const auto& blk : p.blocks) {
    nlohmann::json jb;
    jb["c"] = blk.c;
    auto rows = nlohmann::json::array();
    for (std::size_t r = 0; r < blk.A.rows(); ++r) rows.push_back(blk.A.row(r));
    jb["A"] = std::move(rows);
    doc["blocks"].push_back(std::move(jb));
  }
  if (penalty) doc["t"] = *penalty;
  return doc;
}

inline ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open problem file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return problem_from_json(doc);
}

inline void save_problem_file(const std::string& path, const DecomposableLP& p,
                              const std::optional<Vec>& penalty = std::nullopt) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open output file: " + path);
  out << problem_to_json(p, penalty).dump(2) << "\n";
}

}  // namespace rhsd
