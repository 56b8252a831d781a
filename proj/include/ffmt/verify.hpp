#pragma once

// Verification suites. Each suite returns Reports; a Tally folds many exact
// checks into one Report whose lhs is the failure count.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fordsum.hpp"
#include "mtable.hpp"
#include "report.hpp"
#include "rough.hpp"
#include "sieve.hpp"

namespace ffmt::verify {

class Tally {
 public:
  Tally(std::string name, std::map<std::string, std::string> params) : name_(std::move(name)), params_(std::move(params)) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      if (failures_ == 0) first_failure_ = what;
      ++failures_;
    }
  }
  void absorb(const std::vector<Report>& rs) {
    for (const auto& r : rs) {
      std::string what = r.name;
      for (const auto& [k, v] : r.params) what += " " + k + "=" + v;
      check(r.pass, what + " : " + r.lhs + " " + to_string(r.relation) + " " + r.rhs);
    }
  }
  std::uint64_t failures() const noexcept { return failures_; }

  Report report(const Stopwatch& sw) const {
    auto p = params_;
    p["checks"] = std::to_string(checks_);
    if (failures_) p["first_failure"] = first_failure_;
    Report r = make_report(name_, p, Rational(BigInt(failures_)), Relation::Equal, Rational(0));
    return sw.stamp(r);
  }

 private:
  std::string name_;
  std::map<std::string, std::string> params_;
  std::uint64_t checks_ = 0, failures_ = 0;
  std::string first_failure_;
};

inline std::string q_str(const FieldPtr& f) { return std::to_string(f->q()); }

/// Largest n with q^n <= 2^bits.
inline std::size_t degree_for_bits(std::uint64_t q, unsigned bits) {
  std::size_t n = 0;
  BigInt v = q;
  while (v <= ipow(2, bits)) {
    ++n;
    v *= q;
  }
  return n;
}

// --- small product set ------------------------------------------------------

inline std::vector<Report> small_product_set() {
  Stopwatch sw;
  const auto f = Field::create(2);
  auto P = [&](const char* s) { return poly_parse(s, f); };
  const APSpec o1 = APSpec::of(3, P("1"), P("T"));
  const APSpec o2 = APSpec::of(3, P("T+1"), P("T^2"));
  const std::map<std::string, std::string> params{{"q", "2"}, {"b1", "3"}, {"b2", "3"}};
  std::vector<Report> out;
  out.push_back(sw.stamp(make_report("small_product_set_count", params, Rational(BigInt(product_set_count(o1, o2).count)),
                                     Relation::Equal, Rational(7))));

  const char* rows[] = {"T^3+1", "T^3+T+1", "T^3+T^2+1", "T^3+T^2+T+1"};
  const char* cols[] = {"T^3+T+1", "T^3+T^2+T+1"};
  const char* table[4][2] = {{"T^6+T^4+T+1", "T^6+T^5+T^4+T^2+T+1"},
                             {"T^6+T^2+1", "T^6+T^5+T^3+1"},
                             {"T^6+T^5+T^4+T^3+T^2+T+1", "T^6+T^3+T+1"},
                             {"T^6+T^5+T^3+1", "T^6+T^4+T^2+1"}};
  std::vector<Poly> m1 = o1.members(), m2 = o2.members();
  Tally entries("small_product_set_entries", params);
  entries.check(m1.size() == 4 && m2.size() == 2, "member counts");
  std::map<std::string, int> multiplicity;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) {
      const Poly g1 = P(rows[i]), g2 = P(cols[j]);
      entries.check(o1.contains(g1) && o2.contains(g2), std::string("membership ") + rows[i] + " " + cols[j]);
      entries.check(g1 * g2 == P(table[i][j]), std::string("product ") + rows[i] + " * " + cols[j]);
      ++multiplicity[poly_format(g1 * g2)];
    }
  out.push_back(entries.report(sw));
  out.push_back(sw.stamp(make_report("small_product_set_repeated_pairs", params, Rational(multiplicity["T^6+T^5+T^3+1"]),
                                     Relation::Equal, Rational(2))));
  return out;
}

// --- prime counts -------------------------------------------------------------

/// pi = pi_formula and q^n/n - 2q^(n/2)/n <= pi <= q^n/n for 1 <= n <= max_n.
/// The lower bound is compared squared: (q^n - n pi)|q^n - n pi| <= 4 q^n.
inline std::vector<Report> prime_counts(const SPFTable& t, std::size_t max_n) {
  Stopwatch sw;
  const std::uint64_t q = t.field()->q();
  std::map<std::string, std::string> params{{"q", std::to_string(q)}, {"max_n", std::to_string(max_n)}};
  Tally formula("pi_equals_formula", params), sandwich("ppt_sandwich", params);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const BigInt scan(static_cast<unsigned long>(pi(n, t)));
    const BigInt exact = pi_formula(q, n);
    formula.check(scan == exact, "n=" + std::to_string(n) + " scan=" + str(scan) + " formula=" + str(exact));
    const BigInt qn = ipow(q, n);
    const BigInt nn(static_cast<unsigned long>(n));
    sandwich.check(nn * scan <= qn, "upper n=" + std::to_string(n));
    sandwich.check(signed_square(qn - nn * scan) <= 4 * qn, "lower n=" + std::to_string(n));
  }
  return {formula.report(sw), sandwich.report(sw)};
}

// --- Selberg ----------------------------------------------------------------

inline std::vector<Report> selberg(const SPFTable& t, std::size_t max_z, std::size_t max_n) {
  Stopwatch sw;
  const std::string q = q_str(t.field());
  std::vector<Report> out;
  for (std::size_t z = 1; z <= max_z; ++z) {
    const auto w = selberg_weights(z, t);
    out.push_back(sw.stamp(make_report("selberg_Q_times_S", {{"q", q}, {"z", std::to_string(z)}}, w.Q * w.S, Relation::Equal, Rational(1))));
    out.push_back(sw.stamp(make_report("selberg_lambda_1", {{"q", q}, {"z", std::to_string(z)}}, w.lambda.at(0), Relation::Equal, Rational(1))));
  }
  Tally bounds("selberg_upper_bounds", {{"q", q}, {"max_n", std::to_string(max_n)}});
  for (std::size_t n = 2; n <= max_n; ++n)
    for (std::size_t z = 1; 2 * z <= n; ++z) bounds.absorb(selberg_upper_bound_report(n, z, t));
  out.push_back(bounds.report(sw));
  return out;
}

// --- rough counts -------------------------------------------------------------

/// max/min over invertible E of the capped count with F = E mod M, for
/// linear M and b in {2, 3}. Reported as a ratio only.
inline std::vector<Report> theta_residue_spread(const SPFTable& t, std::size_t n) {
  std::vector<Report> out;
  if (n < 4) return out;
  const FieldPtr& f = t.field();
  for (std::size_t b = 2; b <= 3 && 2 * b <= n; ++b)
    for (const Poly& m : enumerate_monics(f, 1)) {
      Stopwatch sw;
      std::uint64_t lo = UINT64_MAX, hi = 0;
      for (auto code : invertible_residues(m)) {
        const auto c = capped_rough_count({n, b, 3, std::make_pair(kernel::residue_poly(f, code, 1), m)}, t);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      Report r = make_report("theta_E_spread",
                             {{"q", q_str(f)}, {"n", std::to_string(n)}, {"b", std::to_string(b)}, {"M", poly_format(m)}},
                             Rational(BigInt(static_cast<unsigned long>(hi))), Relation::Ratio,
                             Rational(BigInt(static_cast<unsigned long>(lo))));
      out.push_back(sw.stamp(r));
    }
  return out;
}

inline std::vector<Report> rough_bounds(const SPFTable& t, std::size_t max_n) {
  Stopwatch sw;
  const std::uint64_t q = t.field()->q();
  std::map<std::string, std::string> params{{"q", std::to_string(q)}, {"max_n", std::to_string(max_n)}};
  Tally rec("psi_recursion_and_lower_bound", params), primes("psi_equals_pi_above_half", params),
      mono("psi_nonincreasing_in_b", params);
  for (std::size_t n = 2; n <= max_n; ++n) {
    std::uint64_t prev = psi(n, 0, t);
    for (std::size_t b = 1; b < n; ++b) {
      rec.absorb(psi_recursion_report(n, b, t));
      const std::uint64_t v = psi(n, b, t);
      mono.check(v <= prev, "n=" + std::to_string(n) + " b=" + std::to_string(b));
      prev = v;
      if (2 * b > n) primes.check(BigInt(v) == pi_formula(q, n), "n=" + std::to_string(n) + " b=" + std::to_string(b));
    }
  }
  std::vector<Report> out{rec.report(sw), primes.report(sw), mono.report(sw)};
  if (q == 2 && t.max_deg() >= 4)
    out.push_back(sw.stamp(make_report("psi_4_1", {{"q", "2"}}, Rational(BigInt(psi(4, 1, t))), Relation::Equal, Rational(4))));
  for (auto& r : theta_residue_spread(t, std::min<std::size_t>(max_n, 10))) out.push_back(std::move(r));
  return out;
}

// --- equidistribution ---------------------------------------------------------

/// Squarefree moduli built from distinct primes of degree <= 2, deg <= max_deg.
inline std::vector<Poly> small_squarefree_moduli(const FieldPtr& f, std::size_t max_deg) {
  std::vector<Poly> primes;
  for (std::size_t d = 1; d <= 2; ++d)
    for (const Poly& g : enumerate_monics(f, d)) {
      bool irreducible = true;
      for (const Poly& p : primes)
        if (divides(p, g)) irreducible = false;
      if (irreducible) primes.push_back(g);
    }
  std::vector<Poly> out;
  const std::size_t k = primes.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    Poly m = Poly::one(f);
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) m = m * primes[i];
    if (m.deg() <= max_deg) out.push_back(m);
  }
  return out;
}

inline std::vector<Report> equidistribution_ratio(const SPFTable& t, std::size_t n_lo, std::size_t n_hi, const Rational& threshold) {
  Stopwatch sw;
  const FieldPtr& f = t.field();
  Rational worst = 0;
  std::string where = "none";
  Tally tally("equidistribution_ratio", {{"q", q_str(f)}, {"n_lo", std::to_string(n_lo)}, {"n_hi", std::to_string(n_hi)},
                                         {"threshold", str(threshold)}});
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const auto moduli = small_squarefree_moduli(f, n / 6);
    for (const Poly& m : moduli) {
      const auto h = rough_histogram(n, m, t);
      for (std::size_t b = 3; 2 * b <= n; ++b) {
        if (m.deg() > b / 3) continue;
        const auto e = equidistribution(b, h);
        const Rational r = e.ratio();
        const std::string tag = "n=" + std::to_string(n) + " b=" + std::to_string(b) + " M=" + poly_format(m);
        tally.check(r > 0 && r <= threshold, tag + " ratio=" + str(r));
        if (r > worst) {
          worst = r;
          where = tag;
        }
      }
    }
  }
  Report r = tally.report(sw);
  r.params["max_ratio"] = str(worst);
  r.params["max_ratio_at"] = where;
  return {r};
}

// --- multiplication tables -------------------------------------------------------

inline std::vector<Report> h_counts(const SPFTable& t, std::size_t max_n, const ProductOptions& opt = {}) {
  Stopwatch sw;
  const FieldPtr& f = t.field();
  Tally tally("h_count_marking_equals_scan", {{"q", q_str(f)}, {"max_n", std::to_string(max_n)}});
  for (std::size_t n = 1; n <= max_n; ++n)
    for (std::size_t b = 0; 2 * b <= n; ++b) {
      const auto a = h_count(f, n, b, opt), d = h_count_direct(n, b, t);
      tally.check(a == d, "n=" + std::to_string(n) + " b=" + std::to_string(b) + " marking=" + std::to_string(a) +
                              " scan=" + std::to_string(d));
    }
  std::vector<Report> out{tally.report(sw)};
  if (f->q() == 2 && max_n >= 4) {
    out.push_back(sw.stamp(make_report("h_4_2", {{"q", "2"}}, Rational(BigInt(h_count(f, 4, 2))), Relation::Equal, Rational(9))));
    out.push_back(sw.stamp(make_report("m_4", {{"q", "2"}}, Rational(BigInt(m_table_counts(f, 2).full)), Relation::Equal, Rational(9))));
  }
  return out;
}

struct ScalingWindow {
  double lo = 0;
  double hi = 0;
};

/// |H(n,b)| b^delta (1 + ln b)^(3/2) / q^n with b = floor(n/2) over n_lo..n_hi.
inline std::vector<ScalingRow> scaling_rows(const FieldPtr& f, std::size_t n_lo, std::size_t n_hi, const ProductOptions& opt = {}) {
  std::vector<ScalingRow> rows;
  for (std::size_t n = n_lo; n <= n_hi; ++n) rows.push_back(scaling_row(f, n, n / 2, opt));
  return rows;
}

inline std::vector<Report> scaling_window(const std::vector<ScalingRow>& rows, const ScalingWindow& w) {
  Stopwatch sw;
  double lo = 1e300, hi = 0;
  Tally tally("scaling_ratio_in_window", {{"w_lo", std::to_string(w.lo)}, {"w_hi", std::to_string(w.hi)}});
  for (const auto& r : rows) {
    tally.check(r.ratio_natural_log >= w.lo && r.ratio_natural_log <= w.hi,
                "n=" + std::to_string(r.n) + " ratio=" + std::to_string(r.ratio_natural_log));
    lo = std::min(lo, r.ratio_natural_log);
    hi = std::max(hi, r.ratio_natural_log);
  }
  tally.check(w.hi <= 3 * w.lo, "window width");
  Report r = tally.report(sw);
  r.params["observed_lo_approx"] = std::to_string(lo);
  r.params["observed_hi_approx"] = std::to_string(hi);
  return {r};
}

/// For every monic M with 1 <= deg M <= max_deg_m and invertible A: the sets
/// H(n,b;A,A',M,M) over invertible A' are pairwise disjoint and their sizes
/// sum to at most |H'(n,b;A,M)|.
inline std::vector<Report> disjoint_union(const FieldPtr& f, std::size_t max_n, std::size_t max_deg_m) {
  Stopwatch sw;
  Tally disjoint("h_two_ap_pairwise_disjoint", {{"q", q_str(f)}, {"max_n", std::to_string(max_n)}, {"max_deg_M", std::to_string(max_deg_m)}});
  Tally bound("h_two_ap_sum_le_h_divisor_ap", {{"q", q_str(f)}, {"max_n", std::to_string(max_n)}, {"max_deg_M", std::to_string(max_deg_m)}});
  for (std::size_t dm = 1; dm <= max_deg_m; ++dm)
    for (const Poly& m : enumerate_monics(f, dm)) {
      const auto units = invertible_residues(m);
      for (std::size_t n = 1; n <= max_n; ++n)
        for (std::size_t b = 0; b <= n; ++b)
          for (auto a_code : units) {
            const Poly a = kernel::residue_poly(f, a_code, dm);
            std::vector<HitSet> sets;
            std::uint64_t sum = 0;
            for (auto a2_code : units) {
              sets.push_back(product_hitset(APSpec::of(b, a, m), APSpec::of(n - b, kernel::residue_poly(f, a2_code, dm), m)));
              sum += sets.back().count();
            }
            const std::string tag = "n=" + std::to_string(n) + " b=" + std::to_string(b) + " A=" + poly_format(a) + " M=" + poly_format(m);
            std::uint64_t overlap = 0;
            for (std::size_t i = 0; i < sets.size(); ++i)
              for (std::size_t j = i + 1; j < sets.size(); ++j) overlap += sets[i].intersection_count(sets[j]);
            disjoint.check(overlap == 0, tag);
            bound.check(sum <= h_divisor_ap_count(f, n, b, a, m), tag);
          }
    }
  return {disjoint.report(sw), bound.report(sw)};
}

// --- Ford machinery -----------------------------------------------------------

struct FordConfig {
  std::size_t max_N = 2;
  std::size_t max_k = 4;
  std::size_t degree_cap = 160;
};

inline std::vector<Report> ford(const SPFTable& t, const FordConfig& cfg = {}) {
  Stopwatch sw;
  const FieldPtr& f = t.field();
  const std::string q = q_str(f);
  std::vector<Report> out;
  const std::size_t j_max = cfg.max_N + cfg.max_k;
  const auto seq = lambda_sequence(f, Poly::one(f), j_max, cfg.degree_cap, &t);
  std::string lam;
  for (auto l : seq.lambdas) lam += (lam.empty() ? "" : ",") + std::to_string(l);

  Tally greedy("lambda_greedy_maximal", {{"q", q}, {"lambdas", lam}, {"truncated", seq.truncated ? "true" : "false"}});
  for (std::size_t j = 2; j <= seq.J(); ++j) {
    greedy.check(seq.pool_sums[j - 1] <= ln2_lower(), "sum j=" + std::to_string(j));
    const std::size_t next = seq.lambdas[j - 1] + 1;
    const Rational over = seq.pool_sums[j - 1] + Rational(seq.coprime_primes[next]) / Rational(ipow(f->q(), next));
    greedy.check(over > ln2_lower(), "maximal j=" + std::to_string(j));
    greedy.check(seq.lambdas[j - 1] > seq.lambdas[j - 2], "increasing j=" + std::to_string(j));
  }
  out.push_back(greedy.report(sw));
  if (f->q() == 2) {
    const bool head = seq.J() >= 3 && seq.lambdas[0] == 1 && seq.lambdas[1] == 4 && seq.lambdas[2] == 8;
    out.push_back(sw.stamp(make_report("lambda_prefix_1_4_8", {{"q", q}, {"lambdas", lam}}, Rational(head ? 1 : 0), Relation::Equal, Rational(1))));
  }
  Tally cs("cs_pipeline", {{"q", q}, {"max_N", std::to_string(cfg.max_N)}, {"max_k", std::to_string(cfg.max_k)},
                          {"K_empirical", std::to_string(seq.K_empirical())}});
  for (std::size_t N = 1; N <= cfg.max_N; ++N)
    for (std::size_t k = 1; k <= cfg.max_k; ++k) cs.absorb(cs_pipeline_report(seq, N, k, t));
  out.push_back(cs.report(sw));
  if (f->q() == 2 && t.max_deg() >= 2)
    out.push_back(sw.stamp(make_report("lsum_2_1", {{"q", "2"}, {"bound", "2"}}, lsum(2, Poly::one(f), t), Relation::Equal, Rational(23, 4))));
  const auto fs = ford_sum(1, 1);
  out.push_back(sw.stamp(make_report("ford_sum_1_1", {{"N", "1"}, {"k", "1"}}, fs.sum, Relation::Equal, Rational(1))));
  out.push_back(sw.stamp(make_report("ford_sum_1_1_comparator", {{"N", "1"}, {"k", "1"}}, fs.comparator, Relation::Equal, Rational(1))));
  return out;
}

// --- delta --------------------------------------------------------------------

inline std::string delta_digits() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", erdos_delta());
  return buf;
}

inline std::vector<Report> delta() {
  Stopwatch sw;
  const bool ok = delta_digits() == "0.08607";
  Report r = make_report("delta_five_digits", {{"printed", delta_digits()}}, Rational(ok ? 1 : 0), Relation::Equal, Rational(1));
  return {sw.stamp(r)};
}

}  // namespace ffmt::verify
