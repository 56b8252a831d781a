#pragma once

#include <chrono>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "exact.hpp"

namespace ffmt {

enum class Relation { LessEq, GreaterEq, Equal, Ratio };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::GreaterEq: return ">=";
    case Relation::Equal: return "=";
    case Relation::Ratio: return "ratio";
  }
  return "?";
}

inline Relation relation_from_string(const std::string& s) {
  if (s == "<=") return Relation::LessEq;
  if (s == ">=") return Relation::GreaterEq;
  if (s == "=") return Relation::Equal;
  if (s == "ratio") return Relation::Ratio;
  fail(ErrorCode::InvalidArgument, "unknown relation '" + s + "'");
}

/// One verified identity or inequality with exact sides.
///
/// For ratio reports `pass` is decided by the producer (a regression
/// threshold); for the other relations it always equals the comparison of
/// lhs and rhs.
struct Report {
  std::string name;
  std::map<std::string, std::string> params;
  std::string lhs = "0";
  std::string rhs = "0";
  Relation relation = Relation::Equal;
  bool pass = false;
  std::int64_t wall_time_ms = 0;

  friend bool operator==(const Report&, const Report&) = default;
};

inline bool compare(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::GreaterEq: return lhs >= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::Ratio: return true;
  }
  return false;
}

inline Report make_report(std::string name, std::map<std::string, std::string> params, Rational lhs, Relation rel,
                          Rational rhs) {
  lhs.canonicalize();
  rhs.canonicalize();
  Report r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.lhs = str(lhs);
  r.rhs = str(rhs);
  r.relation = rel;
  r.pass = compare(lhs, rel, rhs);
  return r;
}

/// Consistency of a report: sides re-parse and pass agrees with the relation.
inline bool consistent(const Report& r) {
  const Rational lhs = parse_rational(r.lhs), rhs = parse_rational(r.rhs);
  if (str(lhs) != r.lhs || str(rhs) != r.rhs) return false;
  return r.relation == Relation::Ratio || compare(lhs, r.relation, rhs) == r.pass;
}

inline nlohmann::json to_json(const Report& r, bool with_time = true) {
  nlohmann::json j;
  j["name"] = r.name;
  j["params"] = r.params;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["relation"] = to_string(r.relation);
  j["pass"] = r.pass;
  if (with_time) j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.name = j.at("name").get<std::string>();
  r.params = j.at("params").get<std::map<std::string, std::string>>();
  r.lhs = j.at("lhs").get<std::string>();
  r.rhs = j.at("rhs").get<std::string>();
  r.relation = relation_from_string(j.at("relation").get<std::string>());
  r.pass = j.at("pass").get<bool>();
  r.wall_time_ms = j.value("wall_time_ms", std::int64_t{0});
  return r;
}

inline nlohmann::json to_json(const std::vector<Report>& rs, bool with_time = true) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(to_json(r, with_time));
  return arr;
}

/// Digest-stable text: every report without timing, keys sorted.
inline std::string canonical_text(const std::vector<Report>& rs) { return to_json(rs, false).dump(); }

inline void write_csv(std::ostream& out, const std::vector<Report>& rs) {
  out << "name,params,lhs,relation,rhs,pass,wall_time_ms\n";
  for (const auto& r : rs) {
    std::string p;
    for (const auto& [k, v] : r.params) p += (p.empty() ? "" : ";") + k + "=" + v;
    out << r.name << ",\"" << p << "\"," << r.lhs << "," << to_string(r.relation) << "," << r.rhs << ","
        << (r.pass ? "true" : "false") << "," << r.wall_time_ms << "\n";
  }
}

inline bool all_pass(const std::vector<Report>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

/// Stamps wall_time_ms on reports produced inside its lifetime.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }
  Report stamp(Report r) const {
    r.wall_time_ms = elapsed_ms();
    return r;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ffmt
