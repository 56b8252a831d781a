#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "exact.hpp"
#include "mtable.hpp"
#include "poly.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace ffmt {

/// Fixed rational just below ln 2 = 0.69314718055994530941...
inline Rational ln2_lower() { return Rational(BigInt("6931471805599453"), BigInt("10000000000000000")); }

/// Degree thresholds 1 = lambda_1 < lambda_2 < ... where lambda_j is the
/// largest integer keeping sum_{P not dividing M, deg P in (lambda_{j-1}, lambda_j]} 1/|P|
/// at most ln 2 (tested against ln2_lower()).
struct LambdaSequence {
  FieldPtr field;
  Poly modulus;
  std::vector<std::size_t> lambdas;    // lambdas[j-1] = lambda_j
  std::vector<BigInt> coprime_primes;  // [i] = primes of degree i not dividing M
  std::vector<Rational> pool_sums;     // [j-1] = sum over E_j of 1/|P|
  std::size_t degree_cap = 0;
  bool truncated = false;

  std::size_t J() const noexcept { return lambdas.size(); }
  /// E_j covers degrees (lo, hi].
  std::pair<std::size_t, std::size_t> pool_range(std::size_t j) const {
    if (j == 0 || j > lambdas.size()) fail(ErrorCode::PoolTooSmall, "pool E_" + std::to_string(j) + " not available");
    return {j == 1 ? 0 : lambdas[j - 2], lambdas[j - 1]};
  }
  BigInt pool_size(std::size_t j) const {
    const auto [lo, hi] = pool_range(j);
    BigInt s = 0;
    for (std::size_t i = lo + 1; i <= hi; ++i) s += coprime_primes[i];
    return s;
  }
  /// Smallest integer K with 2^(j-K) <= lambda_j <= 2^(j+K) for all listed j.
  unsigned K_empirical() const {
    for (unsigned K = 0;; ++K) {
      bool ok = true;
      for (std::size_t j = 1; j <= lambdas.size() && ok; ++j) {
        const BigInt lam(static_cast<unsigned long>(lambdas[j - 1]));
        const long lo_exp = static_cast<long>(j) - static_cast<long>(K);
        ok = rpow(2, lo_exp) <= Rational(lam) && Rational(lam) <= rpow(2, static_cast<long>(j + K));
      }
      if (ok) return K;
    }
  }
  /// max_j |log2 lambda_j - j| (report only).
  double K_real() const {
    double k = 0;
    for (std::size_t j = 1; j <= lambdas.size(); ++j)
      k = std::max(k, std::fabs(std::log2(static_cast<double>(lambdas[j - 1])) - static_cast<double>(j)));
    return k;
  }
};

/// Degrees of the distinct primes of M, counted per degree.
inline std::vector<unsigned> prime_divisor_degrees(const Poly& m, const SPFTable* t) {
  std::vector<unsigned> count;
  const Poly mm = m.monic();
  if (mm.deg() == 0) return count;
  if (!t) fail(ErrorCode::DegreeExceedsTable, "a sieve table is needed to factor M");
  for (const auto& pp : factorize(mm, *t)) {
    const std::size_t d = pp.prime.deg();
    if (count.size() <= d) count.resize(d + 1, 0);
    ++count[d];
  }
  return count;
}

/// Greedy construction of lambda_1..lambda_{j_max}. Prime counts come from
/// the exact Mobius formula, so the degree cap may exceed the table; the
/// table is only used to factor M. A lambda_j is accepted only when the
/// degree lambda_j + 1 <= degree_cap certifies maximality; otherwise the
/// sequence stops with truncated = true.
inline LambdaSequence lambda_sequence(const FieldPtr& field, const Poly& m, std::size_t j_max, std::size_t degree_cap,
                                      const SPFTable* t = nullptr) {
  if (j_max == 0) fail(ErrorCode::InvalidArgument, "j_max must be >= 1");
  if (degree_cap < 2) fail(ErrorCode::InvalidArgument, "degree cap must be >= 2");
  LambdaSequence s;
  s.field = field;
  s.modulus = m.monic();
  s.degree_cap = degree_cap;
  const std::uint64_t q = field->q();
  const auto pm = prime_divisor_degrees(m, t);
  s.coprime_primes.assign(degree_cap + 1, 0);
  for (std::size_t i = 1; i <= degree_cap; ++i)
    s.coprime_primes[i] = pi_formula(q, i) - BigInt(i < pm.size() ? pm[i] : 0u);
  auto reciprocal = [&](std::size_t i) -> Rational { return Rational(s.coprime_primes[i]) / Rational(ipow(q, i)); };
  const Rational bound = ln2_lower();

  s.lambdas.push_back(1);
  s.pool_sums.push_back(reciprocal(1));
  for (std::size_t j = 2; j <= j_max; ++j) {
    std::size_t d = s.lambdas.back();
    Rational sum = 0;
    bool cut = false;
    while (true) {
      if (d + 1 > degree_cap) {
        cut = true;
        break;
      }
      const Rational next = sum + reciprocal(d + 1);
      if (next > bound) break;
      sum = next;
      ++d;
    }
    if (cut) {
      s.truncated = true;
      break;
    }
    if (d == s.lambdas.back()) fail(ErrorCode::InvalidArgument, "pool E_" + std::to_string(j) + " would be empty");
    sum.canonicalize();
    s.lambdas.push_back(d);
    s.pool_sums.push_back(sum);
  }
  return s;
}

/// Primes P not dividing M with degree in (lambda_{j-1}, lambda_j], index order.
inline std::vector<Poly> pool_primes(const LambdaSequence& s, std::size_t j, const SPFTable& t) {
  const auto [lo, hi] = s.pool_range(j);
  t.require(hi);
  std::vector<Poly> out;
  for (std::size_t d = lo + 1; d <= hi; ++d)
    for (std::uint64_t i = 0; i < t.count(d); ++i) {
      if (!t.is_prime(d, i)) continue;
      Poly p = monic_decode(t.field(), {d, i});
      if (s.modulus.deg() > 0 && divides(p, s.modulus)) continue;
      out.push_back(std::move(p));
    }
  return out;
}

/// v = (b_1, ..., b_J).
struct VectorV {
  std::vector<unsigned> b;

  std::size_t J() const noexcept { return b.size(); }
  unsigned B() const noexcept {
    unsigned s = 0;
    for (auto x : b) s += x;
    return s;
  }
  unsigned operator[](std::size_t j) const { return b.at(j - 1); }  // 1-based
  friend bool operator==(const VectorV&, const VectorV&) = default;
  friend auto operator<=>(const VectorV&, const VectorV&) = default;
};

inline std::string to_string(const VectorV& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.b.size(); ++i) s += (i ? "," : "") + std::to_string(v.b[i]);
  return s + ")";
}

namespace detail {
inline void check_pools(const VectorV& v, const LambdaSequence& s) {
  for (std::size_t j = 1; j <= v.J(); ++j) {
    if (v[j] == 0) continue;
    if (j > s.J())
      fail(ErrorCode::PoolTooSmall, "E_" + std::to_string(j) + " is beyond the lambda sequence" + (s.truncated ? " (truncated)" : ""));
    if (s.pool_size(j) < v[j]) fail(ErrorCode::PoolTooSmall, "E_" + std::to_string(j) + " has fewer than b_j primes");
  }
}
}  // namespace detail

/// Every H in A(v): squarefree, exactly b_j prime factors from E_j and no
/// others. emit(H, prime degrees of H).
inline void enumerate_Av(const VectorV& v, const LambdaSequence& s, const SPFTable& t,
                         const std::function<void(const Poly&, const std::vector<unsigned>&)>& emit) {
  detail::check_pools(v, s);
  std::vector<std::vector<Poly>> pools(v.J());
  for (std::size_t j = 1; j <= v.J(); ++j)
    if (v[j] > 0) pools[j - 1] = pool_primes(s, j, t);
  std::vector<unsigned> degs;
  std::function<void(std::size_t, std::size_t, unsigned, const Poly&)> rec = [&](std::size_t j, std::size_t start,
                                                                                 unsigned left, const Poly& acc) {
    if (j > v.J()) {
      emit(acc, degs);
      return;
    }
    if (left == 0) {
      const unsigned nb = j < v.J() ? v[j + 1] : 0;
      rec(j + 1, 0, nb, acc);
      return;
    }
    const auto& pool = pools[j - 1];
    for (std::size_t i = start; i + left <= pool.size(); ++i) {
      degs.push_back(static_cast<unsigned>(pool[i].deg()));
      rec(j, i + 1, left - 1, acc * pool[i]);
      degs.pop_back();
    }
  };
  if (v.J() == 0) {
    emit(Poly::one(t.field()), degs);
    return;
  }
  rec(1, 0, v[1], Poly::one(t.field()));
}

struct AvSums {
  Rational sum_W = 0;
  Rational sum_tau = 0;
  Rational sum_L = 0;
  BigInt members = 0;
  std::size_t max_degree = 0;
  bool tau_is_power = true;           // tau(H) = 2^B for every member
  bool single_profile = true;         // every member shares (tau, W, L)
  std::string route;
};

namespace detail {
struct SumAccumulator {
  std::uint64_t q = 0;
  unsigned B = 0;
  std::map<std::size_t, BigInt> W, tau, L;  // by deg H, weighted counts
  BigInt members = 0;
  std::size_t max_degree = 0;
  bool tau_ok = true;
  std::optional<std::tuple<BigInt, BigInt, std::size_t>> profile;
  bool single_profile = true;

  void add(const std::vector<unsigned>& prime_degrees, const BigInt& weight) {
    std::vector<std::pair<unsigned, unsigned>> fac;
    std::size_t deg = 0;
    for (auto d : prime_degrees) {
      fac.emplace_back(d, 1u);
      deg += d;
    }
    const auto st = divisor_stats_from_degrees(fac);
    if (st.tau != ipow(2, B)) tau_ok = false;
    const auto prof = std::make_tuple(st.tau, st.W, st.L());
    if (!profile)
      profile = prof;
    else if (*profile != prof)
      single_profile = false;
    W[deg] += weight * st.W;
    tau[deg] += weight * st.tau;
    L[deg] += weight * BigInt(static_cast<unsigned long>(st.L()));
    members += weight;
    max_degree = std::max(max_degree, deg);
  }

  AvSums finish(std::string route) const {
    AvSums s;
    for (const auto& [d, v] : W) s.sum_W += Rational(v) / Rational(ipow(q, d));
    for (const auto& [d, v] : tau) s.sum_tau += Rational(v) / Rational(ipow(q, d));
    for (const auto& [d, v] : L) s.sum_L += Rational(v) / Rational(ipow(q, d));
    s.sum_W.canonicalize();
    s.sum_tau.canonicalize();
    s.sum_L.canonicalize();
    s.members = members;
    s.max_degree = max_degree;
    s.tau_is_power = tau_ok;
    s.single_profile = single_profile;
    s.route = std::move(route);
    return s;
  }
};
}  // namespace detail

/// Exact sums of W/|H|, tau/|H|, L/|H| over A(v) by explicit enumeration.
/// When deg H is within the table, tau(H) is re-derived from the table's own
/// factorization as an independent check.
inline AvSums sum_stats_over_Av(const VectorV& v, const LambdaSequence& s, const SPFTable& t,
                                std::uint64_t budget = 20'000'000,
                                std::unordered_set<Poly, PolyHash>* seen = nullptr, bool* duplicate = nullptr) {
  detail::check_pools(v, s);
  BigInt expected = 1;
  for (std::size_t j = 1; j <= v.J(); ++j)
    if (v[j] > 0) expected *= binomial(s.pool_size(j), v[j]);
  if (expected > BigInt(static_cast<unsigned long>(budget)))
    fail(ErrorCode::BudgetExceeded, "A(v) has " + str(expected) + " members");
  detail::SumAccumulator acc;
  acc.q = t.field()->q();
  acc.B = v.B();
  const BigInt one = 1;
  enumerate_Av(v, s, t, [&](const Poly& h, const std::vector<unsigned>& degs) {
    acc.add(degs, one);
    if (h.deg() <= t.max_deg() && divisor_stats(h, t).tau != ipow(2, v.B())) acc.tau_ok = false;
    if (seen && !seen->insert(h).second && duplicate) *duplicate = true;
  });
  if (acc.members != expected) fail(ErrorCode::InvalidArgument, "A(v) enumeration count mismatch");
  return acc.finish("explicit");
}

/// Same sums aggregated over degree patterns: choosing m_i primes of degree
/// i from a pool contributes C(pi'(i), m_i) members sharing one statistic.
inline AvSums sum_stats_over_Av_aggregate(const VectorV& v, const LambdaSequence& s) {
  detail::check_pools(v, s);
  detail::SumAccumulator acc;
  acc.q = s.field->q();
  acc.B = v.B();
  std::vector<unsigned> degs;
  std::function<void(std::size_t, std::size_t, unsigned, BigInt)> rec = [&](std::size_t j, std::size_t deg,
                                                                            unsigned left, BigInt weight) {
    if (weight == 0) return;
    if (j > v.J()) {
      acc.add(degs, weight);
      return;
    }
    const auto [lo, hi] = v[j] > 0 ? s.pool_range(j) : std::pair<std::size_t, std::size_t>{0, 0};
    if (left == 0 || deg > hi) {
      if (left != 0) return;
      const unsigned nb = j < v.J() ? v[j + 1] : 0;
      const std::size_t start = j < v.J() && v[j + 1] > 0 ? s.pool_range(j + 1).first + 1 : 0;
      rec(j + 1, start, nb, weight);
      return;
    }
    // Take m primes of degree `deg` (0 <= m <= left), then move to deg + 1.
    for (unsigned m = 0; m <= left; ++m) {
      for (unsigned r = 0; r < m; ++r) degs.push_back(static_cast<unsigned>(deg));
      rec(j, deg + 1, left - m, weight * binomial(s.coprime_primes[deg], m));
      for (unsigned r = 0; r < m; ++r) degs.pop_back();
    }
  };
  if (v.J() == 0) {
    acc.add(degs, 1);
  } else {
    const std::size_t start = v[1] > 0 ? s.pool_range(1).first + 1 : 0;
    rec(1, start, v[1], 1);
  }
  return acc.finish("aggregate");
}

/// f(v) = sum_{h=N}^{J} 2^(N-1-h+b_N+...+b_h).
inline Rational f_of_v(const VectorV& v, std::size_t N) {
  if (N == 0 || N > v.J()) fail(ErrorCode::InvalidArgument, "need 1 <= N <= J");
  for (std::size_t j = 1; j < N; ++j)
    if (v[j] != 0) fail(ErrorCode::InvalidArgument, "b_1..b_{N-1} must vanish");
  Rational f = 0;
  long partial = 0;
  for (std::size_t h = N; h <= v.J(); ++h) {
    partial += v[h];
    f += rpow(2, static_cast<long>(N) - 1 - static_cast<long>(h) + partial);
  }
  f.canonicalize();
  return f;
}

/// The vector family: J = N+k-1, b_1..b_{N-1} = 0, b_N+...+b_J = k,
/// b_j <= N min(j, J-j+1). Lexicographic order.
inline std::vector<VectorV> b_set(std::size_t N, std::size_t k) {
  if (N == 0 || k == 0) fail(ErrorCode::InvalidArgument, "need N, k >= 1");
  const std::size_t J = N + k - 1;
  std::vector<VectorV> out;
  VectorV v{std::vector<unsigned>(J, 0)};
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t j, unsigned left) {
    if (j > J) {
      if (left == 0) out.push_back(v);
      return;
    }
    const unsigned cap = static_cast<unsigned>(N * std::min(j, J - j + 1));
    for (unsigned x = 0; x <= std::min(cap, left); ++x) {
      v.b[j - 1] = x;
      rec(j + 1, left - x);
    }
    v.b[j - 1] = 0;
  };
  rec(N, static_cast<unsigned>(k));
  return out;
}

struct FordSum {
  Rational sum;
  Rational comparator;  // k^(k-1)/k!
  std::size_t vectors = 0;
  Rational ratio() const { return sum / comparator; }
};

/// sum over v in the family of 1/(b_N! ... b_J! f(v)).
inline FordSum ford_sum(std::size_t N, std::size_t k, std::size_t budget = 5'000'000) {
  const auto family = b_set(N, k);
  if (family.size() > budget) fail(ErrorCode::BudgetExceeded, "vector family too large");
  FordSum r;
  r.sum = 0;
  for (const auto& v : family) {
    BigInt fact = 1;
    for (std::size_t j = N; j <= v.J(); ++j) fact *= factorial(v[j]);
    r.sum += Rational(1) / (Rational(fact) * f_of_v(v, N));
  }
  r.sum.canonicalize();
  r.comparator = ratio(ipow(k, k - 1), factorial(static_cast<unsigned>(k)));
  r.vectors = family.size();
  return r;
}

/// Parameters from (eta, b, K): least N >= 1 with N 2^(K+1-N) <= eta,
/// k = floor(log2 b - 2N), J = N + k - 1.
struct FordParameters {
  std::size_t N = 0;
  long k = 0;
  long J = 0;
};

inline FordParameters ford_parameters(const Rational& eta, std::uint64_t b, unsigned K) {
  if (eta <= 0 || b == 0) fail(ErrorCode::InvalidArgument, "need eta > 0 and b >= 1");
  FordParameters p;
  for (std::size_t N = 1;; ++N) {
    if (Rational(static_cast<unsigned long>(N)) * rpow(2, static_cast<long>(K) + 1 - static_cast<long>(N)) <= eta) {
      p.N = N;
      break;
    }
  }
  long floor_log2 = 0;
  while ((std::uint64_t{2} << floor_log2) <= b) ++floor_log2;
  // floor(log2 b - 2N) = floor(log2 b) - 2N for integer 2N
  p.k = floor_log2 - 2 * static_cast<long>(p.N);
  p.J = static_cast<long>(p.N) + p.k - 1;
  return p;
}

/// sum over monic H with deg H <= bound and (H,M) = 1 of L(H)/|H|.
inline Rational lsum(std::size_t bound, const Poly& m, const SPFTable& t, std::uint64_t budget = std::uint64_t{1} << 26) {
  t.require(bound);
  const std::uint64_t q = t.field()->q();
  std::uint64_t total = 0;
  for (std::size_t d = 0; d <= bound; ++d) total += checked_pow(q, d);
  if (total > budget) fail(ErrorCode::BudgetExceeded, "lsum window too large");
  const Poly mm = m.monic();
  std::set<MonicIndex> bad;
  if (mm.deg() > 0)
    for (const auto& pp : factorize(mm, t)) bad.insert(monic_encode(pp.prime));
  Rational s = 1;  // H = 1
  std::vector<std::pair<unsigned, unsigned>> degs;
  for (std::size_t d = 1; d <= bound; ++d) {
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < t.count(d); ++i) {
      const auto fac = t.factor_indices(d, i);
      bool coprime = true;
      degs.clear();
      for (const auto& [p, e] : fac) {
        if (bad.count(p)) coprime = false;
        degs.emplace_back(static_cast<unsigned>(p.degree), e);
      }
      if (coprime) acc += static_cast<std::uint64_t>(std::popcount(divisor_degree_mask(degs)));
    }
    s += Rational(BigInt(acc)) / Rational(ipow(q, d));
  }
  s.canonicalize();
  return s;
}

struct CsPipelineOptions {
  std::uint64_t explicit_budget = 2'000'000;  // members per A(v) for the explicit route
  bool force_aggregate = false;
};

/// Cauchy-Schwarz chain over the families A(v), v in the vector family:
///  - per v: sum_L >= sum_tau^2 / sum_W, tau(H) = 2^B, deg H <= sum b_j lambda_j <= N 2^(K+J+2);
///  - disjointness of the A(v) (hash-set intersection, explicit route only);
///  - sum_v sum_tau^2/sum_W <= lsum(window, M) when the window is inside the table.
inline std::vector<Report> cs_pipeline_report(const LambdaSequence& s, std::size_t N, std::size_t k, const SPFTable& t,
                                              const CsPipelineOptions& opt = {}) {
  Stopwatch sw;
  std::vector<Report> out;
  const auto family = b_set(N, k);
  const unsigned K = s.K_empirical();
  const std::size_t J = N + k - 1;
  Rational aggregate = 0;
  std::size_t window = 0;
  bool all_explicit = true;
  bool duplicate = false;
  std::unordered_set<Poly, PolyHash> seen;
  BigInt members = 0;
  for (const auto& v : family) {
    bool can_explicit = !opt.force_aggregate;
    BigInt expected = 1;
    for (std::size_t j = 1; j <= v.J() && can_explicit; ++j) {
      if (v[j] == 0) continue;
      if (j > s.J() || s.pool_range(j).second > t.max_deg()) can_explicit = false;
      else expected *= binomial(s.pool_size(j), v[j]);
    }
    if (can_explicit && expected > BigInt(static_cast<unsigned long>(opt.explicit_budget))) can_explicit = false;
    all_explicit = all_explicit && can_explicit;
    const AvSums sums = can_explicit ? sum_stats_over_Av(v, s, t, opt.explicit_budget, &seen, &duplicate)
                                     : sum_stats_over_Av_aggregate(v, s);
    members += sums.members;
    std::map<std::string, std::string> params{{"q", std::to_string(s.field->q())},
                                              {"M", poly_format(s.modulus)},
                                              {"N", std::to_string(N)},
                                              {"k", std::to_string(k)},
                                              {"v", to_string(v)},
                                              {"route", sums.route},
                                              {"members", str(sums.members)}};
    const Rational lhs = sums.sum_L * sums.sum_W;
    const Rational rhs = sums.sum_tau * sums.sum_tau;
    auto p_cs = params;
    p_cs["equality"] = lhs == rhs ? "true" : "false";
    p_cs["single_profile"] = sums.single_profile ? "true" : "false";
    out.push_back(sw.stamp(make_report("cs_per_v", p_cs, lhs, Relation::GreaterEq, rhs)));
    out.push_back(sw.stamp(make_report("tau_is_2^B", params, Rational(sums.tau_is_power ? 1 : 0), Relation::Equal, Rational(1))));
    std::size_t budget_deg = 0;
    for (std::size_t j = 1; j <= v.J(); ++j)
      if (v[j] > 0) budget_deg += v[j] * s.lambdas.at(j - 1);
    out.push_back(sw.stamp(make_report("degree_le_sum_b_lambda", params, Rational(static_cast<unsigned long>(sums.max_degree)),
                                       Relation::LessEq, Rational(static_cast<unsigned long>(budget_deg)))));
    auto p_k = params;
    p_k["K"] = std::to_string(K);
    out.push_back(sw.stamp(make_report("sum_b_lambda_le_N2^(K+J+2)", p_k, Rational(static_cast<unsigned long>(budget_deg)),
                                       Relation::LessEq, Rational(BigInt(static_cast<unsigned long>(N)) * ipow(2, K + J + 2)))));
    if (sums.sum_W > 0) aggregate += rhs / sums.sum_W;
    window = std::max(window, sums.max_degree);
  }
  aggregate.canonicalize();
  std::map<std::string, std::string> params{{"q", std::to_string(s.field->q())},
                                            {"M", poly_format(s.modulus)},
                                            {"N", std::to_string(N)},
                                            {"k", std::to_string(k)},
                                            {"window", std::to_string(window)},
                                            {"families", std::to_string(family.size())}};
  if (all_explicit) {
    auto p = params;
    p["members"] = str(members);
    out.push_back(sw.stamp(make_report("Av_disjoint", p, Rational(duplicate ? 1 : 0), Relation::Equal, Rational(0))));
  }
  if (window <= t.max_deg()) {
    out.push_back(sw.stamp(make_report("cs_aggregate_le_lsum", params, aggregate, Relation::LessEq, lsum(window, s.modulus, t))));
  } else {
    auto p = params;
    p["note"] = "lsum window beyond table; aggregate reported only";
    Report r = make_report("cs_aggregate", p, aggregate, Relation::Ratio, Rational(1));
    r.pass = true;
    out.push_back(sw.stamp(r));
  }
  return out;
}

/// Ratio of sum W/|H| over A(v) to (2 ln 2)^B/(b_1!...b_J!) sum_j 2^(-j+b_1+...+b_j),
/// with ln 2 replaced by ln2_lower(). Reported, never asserted.
inline Rational w_shape_ratio(const VectorV& v, const AvSums& sums) {
  BigInt fact = 1;
  Rational tail = 0;
  long partial = 0;
  for (std::size_t j = 1; j <= v.J(); ++j) {
    fact *= factorial(v[j]);
    partial += v[j];
    tail += rpow(2, -static_cast<long>(j) + partial);
  }
  Rational two_ln2 = 2 * ln2_lower();
  Rational pow = 1;
  for (unsigned i = 0; i < v.B(); ++i) pow *= two_ln2;
  const Rational shape = pow / Rational(fact) * (v.J() == 0 ? Rational(1) : tail);
  Rational r = sums.sum_W / shape;
  r.canonicalize();
  return r;
}

}  // namespace ffmt
