#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ffmt/ffmt.hpp>

using namespace ffmt;
namespace fs = std::filesystem;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::uint32_t q = 0;
  std::uint32_t p = 0;
  std::uint32_t e = 1;
  std::size_t n = 0;
  std::size_t b = 0;
  std::string mod = "1";
  std::string res = "0";
  std::size_t b1 = 0, b2 = 0;
  std::string mod1 = "1", res1 = "0", mod2 = "1", res2 = "0";
  std::size_t max_deg = 0;
  std::string json_path;
  std::string csv_path;
  unsigned threads = 1;
  std::uint64_t mem_budget_mb = 1024;

  std::string poly;
  std::string out_path;
  std::size_t j_max = 6;
  std::size_t degree_cap = 160;
  std::size_t bound = 0;
  std::size_t big_n = 1;
  std::size_t k = 1;
  bool force_aggregate = false;
  std::size_t z = 1;
  std::string suite = "all";
  std::size_t max_n = 12;
  std::size_t n_lo = 8;
  std::size_t n_hi = 20;
  std::optional<std::size_t> fixed_b;
};

class Context {
 public:
  explicit Context(const Options& o) : opt_(o) {
    if (o.p != 0)
      field_ = Field::create(o.p, o.e);
    else
      field_ = Field::create_order(o.q == 0 ? 2 : o.q);
  }

  const FieldPtr& field() const { return field_; }

  Poly poly(const std::string& text) const { return poly_parse(text, field_); }

  ProductOptions product_options() const {
    ProductOptions po;
    po.threads = opt_.threads;
    po.max_bits = opt_.mem_budget_mb * (std::uint64_t{1} << 23);
    return po;
  }

  std::uint64_t table_budget() const { return opt_.mem_budget_mb * (std::uint64_t{1} << 20) / 5; }

  /// Sieve covering degree `deg`, from FFMT_SIEVE_DIR when a large enough
  /// file is cached there. Later polynomial literals use the table's field.
  const SPFTable& table(std::size_t deg) {
    deg = std::max<std::size_t>(deg, 1);
    if (table_ && table_->max_deg() >= deg) return *table_;
    const char* dir = std::getenv("FFMT_SIEVE_DIR");
    if (dir && *dir) {
      if (auto cached = load_cached(dir, deg)) {
        table_.emplace(std::move(*cached));
      } else {
        table_.emplace(build_spf(field_, deg, table_budget()));
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (!ec) table_->save((fs::path(dir) / cache_name(deg)).string());
      }
    } else {
      table_.emplace(build_spf(field_, deg, table_budget()));
    }
    field_ = table_->field();
    return *table_;
  }

 private:
  std::string cache_prefix() const {
    std::uint64_t red = 0;
    const auto& r = field_->reduction();
    for (std::size_t i = r.size() > 1 ? r.size() - 1 : 0; i-- > 0;) red = red * field_->p() + r[i];
    return "spf-p" + std::to_string(field_->p()) + "-e" + std::to_string(field_->e()) + "-r" + std::to_string(red) + "-d";
  }
  std::string cache_name(std::size_t deg) const { return cache_prefix() + std::to_string(deg) + ".ffmt"; }

  std::optional<SPFTable> load_cached(const std::string& dir, std::size_t deg) const {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return std::nullopt;
    const std::string prefix = cache_prefix();
    std::optional<std::pair<std::size_t, fs::path>> best;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix, 0) != 0 || name.size() < prefix.size() + 6 || name.substr(name.size() - 5) != ".ffmt") continue;
      std::size_t d = 0;
      try {
        d = std::stoul(name.substr(prefix.size(), name.size() - prefix.size() - 5));
      } catch (const std::exception&) {
        continue;
      }
      if (d >= deg && (!best || d < best->first)) best = std::make_pair(d, entry.path());
    }
    if (!best) return std::nullopt;
    try {
      return SPFTable::load(best->second.string());
    } catch (const Error& err) {
      std::cerr << "ignoring cached sieve: " << err.what() << "\n";
      return std::nullopt;
    }
  }

  const Options& opt_;
  FieldPtr field_;
  std::optional<SPFTable> table_;
};

struct Outcome {
  std::vector<Report> reports;
  std::vector<ScalingRow> scaling;
};

std::map<std::string, std::string> base_params(const Context& c) { return {{"q", std::to_string(c.field()->q())}}; }

Report value_report(std::string name, std::map<std::string, std::string> params, const Rational& v) {
  return make_report(std::move(name), std::move(params), v, Relation::Equal, v);
}

Rational R(std::uint64_t v) { return Rational(BigInt(static_cast<unsigned long>(v))); }

void print_reports(const std::vector<Report>& rs) {
  for (const auto& r : rs) {
    std::printf("%-4s %s: %s %s %s", r.pass ? "ok" : "FAIL", r.name.c_str(), r.lhs.c_str(), to_string(r.relation).c_str(),
                r.rhs.c_str());
    for (const auto& [k, v] : r.params) std::printf(" %s=%s", k.c_str(), v.c_str());
    std::printf("\n");
  }
}

void write_outputs(const Options& o, const Outcome& out) {
  if (!o.json_path.empty()) {
    std::ofstream f(o.json_path);
    if (!f) fail(ErrorCode::BadFile, "cannot write " + o.json_path);
    f << to_json(out.reports).dump(2) << "\n";
  }
  if (!o.csv_path.empty()) {
    std::ofstream f(o.csv_path);
    if (!f) fail(ErrorCode::BadFile, "cannot write " + o.csv_path);
    if (!out.scaling.empty()) {
      f << "q,n,b,count,ratio_natural_log,ratio_log_q\n";
      char buf[64];
      for (const auto& r : out.scaling) {
        f << r.q << "," << r.n << "," << r.b << "," << r.count;
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", r.ratio_natural_log, r.ratio_log_q);
        f << buf;
      }
    } else {
      write_csv(f, out.reports);
    }
  }
}

// --- subcommands -----------------------------------------------------------

Outcome cmd_sieve(const Options& o, Context& c) {
  if (o.max_deg == 0) fail(ErrorCode::InvalidArgument, "--max-deg is required");
  const SPFTable& t = c.table(o.max_deg);
  if (!o.out_path.empty()) t.save(o.out_path);
  Outcome out;
  for (std::size_t d = 1; d <= o.max_deg; ++d) {
    auto p = base_params(c);
    p["n"] = std::to_string(d);
    out.reports.push_back(make_report("pi", p, R(pi(d, t)), Relation::Equal, Rational(pi_formula(c.field()->q(), d))));
    std::printf("%zu %llu\n", d, static_cast<unsigned long long>(pi(d, t)));
  }
  return out;
}

Outcome cmd_pi(const Options& o, Context& c) {
  const SPFTable& t = c.table(o.n);
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  const auto v = pi(o.n, t);
  std::printf("%llu\n", static_cast<unsigned long long>(v));
  return {{make_report("pi", p, R(v), Relation::Equal, Rational(pi_formula(c.field()->q(), o.n)))}, {}};
}

Outcome cmd_pi_ap(const Options& o, Context& c) {
  const SPFTable& t = c.table(o.n);
  const Poly m = c.poly(o.mod), a = c.poly(o.res);
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  p["mod"] = poly_format(m);
  p["res"] = poly_format(a);
  const auto v = pi_ap(o.n, a, m, t);
  std::printf("%llu\n", static_cast<unsigned long long>(v));
  return {{value_report("pi_ap", p, R(v))}, {}};
}

Outcome cmd_psi(const Options& o, Context& c) {
  const SPFTable& t = c.table(o.n);
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  p["b"] = std::to_string(o.b);
  const auto v = psi(o.n, o.b, t);
  std::printf("%llu\n", static_cast<unsigned long long>(v));
  Outcome out{{value_report("psi", p, R(v))}, {}};
  if (o.n >= 1)
    for (auto& r : psi_recursion_report(o.n, o.b, t)) out.reports.push_back(std::move(r));
  return out;
}

Outcome cmd_psi_ap(const Options& o, Context& c) {
  const SPFTable& t = c.table(o.n);
  const Poly m = c.poly(o.mod), a = c.poly(o.res);
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  p["b"] = std::to_string(o.b);
  p["mod"] = poly_format(m);
  p["res"] = poly_format(a);
  const auto v = psi_ap(o.n, o.b, a, m, t);
  std::printf("%llu\n", static_cast<unsigned long long>(v));
  return {{value_report("psi_ap", p, R(v))}, {}};
}

Outcome cmd_h(const Options& o, Context& c, const std::string& which) {
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  p["b"] = std::to_string(o.b);
  std::uint64_t v = 0;
  const auto po = c.product_options();
  if (which == "h") {
    v = h_count(c.field(), o.n, o.b, po);
  } else if (which == "h_two_ap") {
    const Poly m1 = c.poly(o.mod1), a1 = c.poly(o.res1), m2 = c.poly(o.mod2), a2 = c.poly(o.res2);
    p["mod1"] = poly_format(m1);
    p["res1"] = poly_format(a1);
    p["mod2"] = poly_format(m2);
    p["res2"] = poly_format(a2);
    v = h_two_ap_count(o.n, o.b, a1, m1, a2, m2, po);
  } else {
    const Poly m = c.poly(o.mod), a = c.poly(o.res);
    p["mod"] = poly_format(m);
    p["res"] = poly_format(a);
    v = which == "h_ap" ? h_ap_count(c.field(), o.n, o.b, a, m, po) : h_divisor_ap_count(c.field(), o.n, o.b, a, m, po);
  }
  std::printf("%llu\n", static_cast<unsigned long long>(v));
  return {{value_report(which, p, R(v))}, {}};
}

Outcome cmd_mtable(const Options& o, Context& c, bool with_ap, bool with_two) {
  MTableQuery query;
  if (with_ap) query.ap = std::make_pair(c.poly(o.res), c.poly(o.mod));
  if (with_two) query.two_ap = std::array<Poly, 4>{c.poly(o.res1), c.poly(o.res2), c.poly(o.mod1), c.poly(o.mod2)};
  const auto counts = m_table_counts(c.field(), o.n, query, c.product_options());
  auto p = base_params(c);
  p["n"] = std::to_string(o.n);
  Outcome out;
  auto emit = [&](const char* name, std::uint64_t v) {
    std::printf("%s %llu\n", name, static_cast<unsigned long long>(v));
    out.reports.push_back(value_report(name, p, R(v)));
  };
  emit("M", counts.full);
  if (counts.ap) emit("M_ap", *counts.ap);
  if (counts.divisor_ap) emit("M_div_ap", *counts.divisor_ap);
  if (counts.two_ap) emit("M_two_ap", *counts.two_ap);
  return out;
}

Outcome cmd_product_set(const Options& o, Context& c) {
  const Poly m1 = c.poly(o.mod1), m2 = c.poly(o.mod2);
  const auto r = product_set_count(APSpec::of(o.b1, c.poly(o.res1), m1), APSpec::of(o.b2, c.poly(o.res2), m2),
                                   c.product_options());
  auto p = base_params(c);
  p["b1"] = std::to_string(o.b1);
  p["b2"] = std::to_string(o.b2);
  p["mod1"] = poly_format(m1);
  p["mod2"] = poly_format(m2);
  p["res1"] = poly_format(c.poly(o.res1));
  p["res2"] = poly_format(c.poly(o.res2));
  p["pairs"] = std::to_string(r.pairs);
  std::printf("%llu\n", static_cast<unsigned long long>(r.count));
  return {{value_report("product_set", p, R(r.count))}, {}};
}

Outcome cmd_stats(const Options& o, Context& c) {
  if (o.poly.empty()) fail(ErrorCode::InvalidArgument, "--poly is required");
  const std::size_t deg = c.poly(o.poly).deg();
  const SPFTable& t = c.table(deg);
  const Poly h = c.poly(o.poly);
  const auto s = divisor_stats(h, t);
  std::string degs, taus;
  for (auto d : s.degrees) degs += (degs.empty() ? "" : ",") + std::to_string(d);
  for (const auto& x : s.tau_d) taus += (taus.empty() ? "" : ",") + str(x);
  std::printf("tau %s\nW %s\nL %zu\ndegrees %s\ntau_d %s\n", str(s.tau).c_str(), str(s.W).c_str(), s.L(), degs.c_str(), taus.c_str());
  auto p = base_params(c);
  p["poly"] = poly_format(h);
  p["degrees"] = degs;
  p["tau_d"] = taus;
  return {{value_report("tau", p, Rational(s.tau)), value_report("W", p, Rational(s.W)),
           value_report("L", p, R(s.L())),
           make_report("W_ge_tau2_over_L", p, Rational(s.W) * R(s.L()), Relation::GreaterEq, Rational(s.tau * s.tau))},
          {}};
}

Outcome cmd_lambda(const Options& o, Context& c) {
  const Poly m0 = c.poly(o.mod);
  const SPFTable* tp = m0.deg() > 0 ? &c.table(m0.deg()) : nullptr;
  const Poly m = c.poly(o.mod);
  const auto s = lambda_sequence(c.field(), m, o.j_max, o.degree_cap, tp);
  std::string lam;
  for (auto l : s.lambdas) lam += (lam.empty() ? "" : ",") + std::to_string(l);
  std::printf("lambdas %s\nK %u\ntruncated %s\n", lam.c_str(), s.K_empirical(), s.truncated ? "true" : "false");
  auto p = base_params(c);
  p["mod"] = poly_format(m);
  p["lambdas"] = lam;
  p["truncated"] = s.truncated ? "true" : "false";
  Outcome out{{value_report("K_empirical", p, R(s.K_empirical()))}, {}};
  for (std::size_t j = 1; j <= s.J(); ++j) {
    auto pj = p;
    pj["j"] = std::to_string(j);
    out.reports.push_back(make_report("pool_sum_le_ln2", pj, s.pool_sums[j - 1], j == 1 ? Relation::Ratio : Relation::LessEq,
                                      ln2_lower()));
  }
  return out;
}

Outcome cmd_lsum(const Options& o, Context& c) {
  const SPFTable& t = c.table(std::max(o.bound, c.poly(o.mod).deg()));
  const Poly m = c.poly(o.mod);
  const Rational v = lsum(o.bound, m, t);
  std::printf("%s\n", str(v).c_str());
  auto p = base_params(c);
  p["bound"] = std::to_string(o.bound);
  p["mod"] = poly_format(m);
  return {{value_report("lsum", p, v)}, {}};
}

Outcome cmd_ford_sum(const Options& o, Context&) {
  const auto r = ford_sum(o.big_n, o.k);
  std::printf("sum %s\ncomparator %s\nratio %s\nvectors %zu\n", str(r.sum).c_str(), str(r.comparator).c_str(),
              str(r.ratio()).c_str(), r.vectors);
  std::map<std::string, std::string> p{{"N", std::to_string(o.big_n)}, {"k", std::to_string(o.k)}, {"vectors", std::to_string(r.vectors)}};
  return {{make_report("ford_sum", p, r.sum, Relation::Ratio, r.comparator)}, {}};
}

Outcome cmd_cs_pipeline(const Options& o, Context& c) {
  const SPFTable& t = c.table(o.max_deg == 0 ? 12 : o.max_deg);
  const Poly m = c.poly(o.mod);
  const auto s = lambda_sequence(c.field(), m, o.big_n + o.k - 1, o.degree_cap, &t);
  CsPipelineOptions co;
  co.force_aggregate = o.force_aggregate;
  Outcome out{cs_pipeline_report(s, o.big_n, o.k, t, co), {}};
  print_reports(out.reports);
  return out;
}

Outcome cmd_selberg(const Options& o, Context& c) {
  const SPFTable& t = c.table(std::max(o.n, o.z));
  const auto w = selberg_weights(o.z, t);
  std::printf("S %s\nQ %s\ndivisors %zu\n", str(w.S).c_str(), str(w.Q).c_str(), w.divisors.size());
  auto p = base_params(c);
  p["z"] = std::to_string(o.z);
  Outcome out{{make_report("selberg_Q_times_S", p, w.Q * w.S, Relation::Equal, Rational(1))}, {}};
  if (o.n >= 2 * o.z)
    for (auto& r : selberg_upper_bound_report(o.n, o.z, t)) out.reports.push_back(std::move(r));
  print_reports(out.reports);
  return out;
}

Outcome cmd_scaling(const Options& o, Context& c) {
  Outcome out;
  for (std::size_t n = o.n_lo; n <= o.n_hi; ++n) {
    const std::size_t b = o.fixed_b ? *o.fixed_b : n / 2;
    if (b == 0 || b > n) continue;
    const auto row = scaling_row(c.field(), n, b, c.product_options());
    std::printf("%llu %zu %zu %llu %.6f %.6f\n", static_cast<unsigned long long>(row.q), row.n, row.b,
                static_cast<unsigned long long>(row.count), row.ratio_natural_log, row.ratio_log_q);
    char buf[32];
    auto p = base_params(c);
    p["n"] = std::to_string(n);
    p["b"] = std::to_string(b);
    std::snprintf(buf, sizeof buf, "%.17g", row.ratio_natural_log);
    p["ratio_natural_log_approx"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", row.ratio_log_q);
    p["ratio_log_q_approx"] = buf;
    out.reports.push_back(make_report("H_density", p, R(row.count), Relation::Ratio, Rational(ipow(row.q, n))));
    out.scaling.push_back(row);
  }
  return out;
}

Outcome cmd_verify(const Options& o, Context& c) {
  const std::vector<std::string> known{"products", "primes", "selberg", "rough", "equidist", "mtable", "scaling", "disjoint", "ford", "delta"};
  const bool all = o.suite == "all";
  if (!all && std::find(known.begin(), known.end(), o.suite) == known.end())
    fail(ErrorCode::InvalidArgument, "unknown suite '" + o.suite + "'");
  auto want = [&](const char* s) { return all || o.suite == s; };
  const std::size_t max_n = std::max<std::size_t>(o.max_n, 2);
  Outcome out;
  auto add = [&](std::vector<Report> rs) {
    for (auto& r : rs) out.reports.push_back(std::move(r));
  };
  if (want("products")) add(verify::small_product_set());
  const bool need_table = want("primes") || want("selberg") || want("rough") || want("equidist") || want("mtable") || want("ford");
  if (need_table) {
    const SPFTable& t = c.table(max_n);
    if (want("primes")) add(verify::prime_counts(t, max_n));
    if (want("selberg")) add(verify::selberg(t, std::min<std::size_t>(5, max_n / 2), max_n));
    if (want("rough")) add(verify::rough_bounds(t, max_n));
    if (want("equidist") && max_n >= 8) add(verify::equidistribution_ratio(t, 8, max_n, Rational(4)));
    if (want("mtable")) add(verify::h_counts(t, max_n, c.product_options()));
    if (want("ford")) add(verify::ford(t));
  }
  if (want("scaling") && c.field()->q() == 2 && max_n >= 8)
    add(verify::scaling_window(verify::scaling_rows(c.field(), 8, max_n, c.product_options()), {1.5, 3.0}));
  if (want("disjoint")) add(verify::disjoint_union(c.field(), std::min<std::size_t>(max_n, 12), 3));
  if (want("delta")) add(verify::delta());
  print_reports(out.reports);
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::DegreeExceedsTable:
    case ErrorCode::PoolTooSmall:
    case ErrorCode::BadFile: return kExitBudget;
    default: return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting with polynomial multiplication tables over finite fields"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    auto* q = s->add_option("--q", o.q, "field order (prime power)");
    auto* p = s->add_option("--p", o.p, "field characteristic")->excludes(q);
    s->add_option("--e", o.e, "extension degree")->needs(p);
    s->add_option("--json", o.json_path, "write reports as JSON");
    s->add_option("--csv", o.csv_path, "write reports as CSV");
    s->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    s->add_option("--mem-budget", o.mem_budget_mb, "memory budget in MiB")->check(CLI::PositiveNumber);
  };
  auto nb = [&](CLI::App* s, bool with_b) {
    s->add_option("--n", o.n, "degree")->required();
    if (with_b) s->add_option("--b", o.b, "divisor degree or roughness bound")->required();
  };
  auto ap = [&](CLI::App* s) {
    s->add_option("--mod", o.mod, "modulus M");
    s->add_option("--res", o.res, "residue A");
  };
  auto two_ap = [&](CLI::App* s) {
    s->add_option("--mod1", o.mod1, "first modulus");
    s->add_option("--res1", o.res1, "first residue");
    s->add_option("--mod2", o.mod2, "second modulus");
    s->add_option("--res2", o.res2, "second residue");
  };

  std::map<CLI::App*, std::function<Outcome(Context&)>> handlers;
  auto sub = [&](const char* name, const char* help, std::function<Outcome(Context&)> fn) {
    auto* s = app.add_subcommand(name, help);
    common(s);
    handlers[s] = std::move(fn);
    return s;
  };

  auto* sieve = sub("sieve", "build or load a smallest-prime-factor table", [&](Context& c) { return cmd_sieve(o, c); });
  sieve->add_option("--max-deg", o.max_deg, "largest degree")->required();
  sieve->add_option("--out", o.out_path, "save the table to this file");

  nb(sub("pi", "number of monic primes of degree n", [&](Context& c) { return cmd_pi(o, c); }), false);
  auto* piap = sub("pi-ap", "monic primes of degree n congruent to A mod M", [&](Context& c) { return cmd_pi_ap(o, c); });
  nb(piap, false);
  ap(piap);
  nb(sub("psi", "b-rough monics of degree n", [&](Context& c) { return cmd_psi(o, c); }), true);
  auto* psiap = sub("psi-ap", "b-rough monics of degree n in a residue class", [&](Context& c) { return cmd_psi_ap(o, c); });
  nb(psiap, true);
  ap(psiap);
  nb(sub("h", "monics of degree n with a divisor of degree b", [&](Context& c) { return cmd_h(o, c, "h"); }), true);
  auto* hap = sub("h-ap", "H(n,b) restricted to F = A mod M", [&](Context& c) { return cmd_h(o, c, "h_ap"); });
  nb(hap, true);
  ap(hap);
  auto* hdiv = sub("h-div-ap", "monics with a degree-b divisor G = A mod M", [&](Context& c) { return cmd_h(o, c, "h_div_ap"); });
  nb(hdiv, true);
  ap(hdiv);
  auto* htwo = sub("h-two-ap", "products G1 G2 with both factors in residue classes", [&](Context& c) { return cmd_h(o, c, "h_two_ap"); });
  nb(htwo, true);
  two_ap(htwo);

  bool mt_ap = false, mt_two = false;
  auto* mt = sub("mtable", "multiplication-table counts M(2n) and variants", [&](Context& c) { return cmd_mtable(o, c, mt_ap, mt_two); });
  nb(mt, false);
  mt->add_option("--mod", o.mod, "modulus M")->each([&](const std::string&) { mt_ap = true; });
  mt->add_option("--res", o.res, "residue A");
  mt->add_option("--mod1", o.mod1, "first modulus")->each([&](const std::string&) { mt_two = true; });
  mt->add_option("--res1", o.res1, "first residue");
  mt->add_option("--mod2", o.mod2, "second modulus")->each([&](const std::string&) { mt_two = true; });
  mt->add_option("--res2", o.res2, "second residue");

  auto* ps = sub("product-set", "size of the product set of two residue classes", [&](Context& c) { return cmd_product_set(o, c); });
  ps->add_option("--b1", o.b1, "degree of the first factor")->required();
  ps->add_option("--b2", o.b2, "degree of the second factor")->required();
  two_ap(ps);

  auto* st = sub("stats", "divisor-degree statistics of one polynomial", [&](Context& c) { return cmd_stats(o, c); });
  st->add_option("--poly", o.poly, "monic polynomial")->required();

  auto* la = sub("lambda", "greedy degree sequence lambda_j", [&](Context& c) { return cmd_lambda(o, c); });
  la->add_option("--mod", o.mod, "modulus M");
  la->add_option("--j-max", o.j_max, "number of terms");
  la->add_option("--degree-cap", o.degree_cap, "largest prime degree considered");

  auto* ls = sub("lsum", "sum of L(H)/|H| over deg H <= bound, (H,M) = 1", [&](Context& c) { return cmd_lsum(o, c); });
  ls->add_option("--bound", o.bound, "degree bound")->required();
  ls->add_option("--mod", o.mod, "modulus M");

  auto* fsum = sub("ford-sum", "rational vector sum and its comparator", [&](Context& c) { return cmd_ford_sum(o, c); });
  fsum->add_option("--N", o.big_n, "N")->required();
  fsum->add_option("--k", o.k, "k")->required();

  auto* cs = sub("cs-pipeline", "Cauchy-Schwarz chain over the families A(v)", [&](Context& c) { return cmd_cs_pipeline(o, c); });
  cs->add_option("--N", o.big_n, "N")->required();
  cs->add_option("--k", o.k, "k")->required();
  cs->add_option("--mod", o.mod, "modulus M");
  cs->add_option("--max-deg", o.max_deg, "sieve degree");
  cs->add_option("--degree-cap", o.degree_cap, "largest prime degree considered");
  cs->add_flag("--force-aggregate", o.force_aggregate, "skip explicit enumeration");

  auto* se = sub("selberg", "exact Selberg weights and the resulting bound", [&](Context& c) { return cmd_selberg(o, c); });
  se->add_option("--z", o.z, "sieve level")->required();
  se->add_option("--n", o.n, "degree for the upper bound");

  auto* ve = sub("verify", "run verification suites", [&](Context& c) { return cmd_verify(o, c); });
  ve->add_option("--suite", o.suite, "products|primes|selberg|rough|equidist|mtable|scaling|disjoint|ford|delta|all");
  ve->add_option("--max-n", o.max_n, "largest degree");

  auto* sc = sub("scaling", "H(n, b) against the delta normalization", [&](Context& c) { return cmd_scaling(o, c); });
  sc->add_option("--n-lo", o.n_lo, "first degree");
  sc->add_option("--n-hi", o.n_hi, "last degree");
  sc->add_option("--b", o.fixed_b, "fixed b (default n/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    Context ctx(o);
    for (auto& [s, fn] : handlers) {
      if (!s->parsed()) continue;
      Outcome out = fn(ctx);
      write_outputs(o, out);
      bool ok = true;
      for (const auto& r : out.reports)
        if (!r.pass) {
          ok = false;
          std::fprintf(stderr, "check failed: %s %s %s %s\n", r.name.c_str(), r.lhs.c_str(), to_string(r.relation).c_str(),
                       r.rhs.c_str());
        }
      return ok ? 0 : kExitCheckFailed;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
