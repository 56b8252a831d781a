#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "exact.hpp"
#include "kernel.hpp"
#include "poly.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace ffmt {

/// Number of b-rough monics of degree n (every prime factor has degree > b).
inline std::uint64_t psi(std::size_t n, std::size_t b, const SPFTable& t) {
  if (n == 0) return 1;
  t.require(n);
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(n); ++i) c += t.spf_degree(n, i) > b;
  return c;
}

/// counts[d][r]: monics of degree n whose least prime degree is d and whose
/// residue code modulo M is r. d = 0 is used only for F = 1 (n = 0).
struct RoughHistogram {
  std::size_t n = 0;
  Poly modulus;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t rough(std::size_t b, std::uint64_t residue) const {
    if (n == 0) return counts[0][residue];
    std::uint64_t c = 0;
    for (std::size_t d = b + 1; d < counts.size(); ++d) c += counts[d][residue];
    return c;
  }
};

inline RoughHistogram rough_histogram(std::size_t n, const Poly& m, const SPFTable& t) {
  const Poly mm = monic_modulus(m);
  t.require(n);
  const auto& ar = t.arith();
  const std::uint64_t residues = checked_pow(t.field()->q(), mm.deg());
  RoughHistogram h{n, mm, std::vector<std::vector<std::uint64_t>>(n + 1, std::vector<std::uint64_t>(residues, 0))};
  const kernel::Digits md(mm.coeffs().begin(), mm.coeffs().end());
  if (n == 0) {
    ++h.counts[0][kernel::residue_code(Poly::one(t.field()), mm)];
    return h;
  }
  kernel::Digits fd;
  for (std::uint64_t i = 0; i < t.count(n); ++i) {
    ar.decode(n, i, fd);
    ++h.counts[t.spf_degree(n, i)][ar.residue(fd, md)];
  }
  return h;
}

/// b-rough monics of degree n with F = A mod M.
inline std::uint64_t psi_ap(std::size_t n, std::size_t b, const Poly& a, const Poly& m, const SPFTable& t) {
  const auto h = rough_histogram(n, m, t);
  return h.rough(b, kernel::residue_code(a, h.modulus));
}

/// Invertible residue codes modulo a monic modulus.
inline std::vector<std::uint64_t> invertible_residues(const Poly& mm) {
  const auto& f = mm.field();
  std::vector<std::uint64_t> out;
  const std::uint64_t total = checked_pow(f->q(), mm.deg());
  for (std::uint64_t r = 0; r < total; ++r) {
    const Poly a = kernel::residue_poly(f, r, mm.deg());
    if (!a.is_zero() && gcd(a, mm).deg() == 0) out.push_back(r);
  }
  return out;
}

inline std::map<std::string, std::string> field_params(const SPFTable& t) {
  return {{"q", std::to_string(t.field()->q())}};
}

/// Recursion inequality n*Psi(n,b) >= q^n - 2q^(n/2) + sum_{b<i<=n-b-1} i*pi(i)*Psi(n-i,b)
/// and the uniform lower bound Psi(n,b) >= q^n/(10b+5).
///
/// With X = q^n + sum - n*Psi the first inequality reads X <= 2q^(n/2); it is
/// reported squared (X|X| <= 4q^n) so both sides stay rational.
inline std::vector<Report> psi_recursion_report(std::size_t n, std::size_t b, const SPFTable& t) {
  Stopwatch sw;
  const std::uint64_t q = t.field()->q();
  auto params = field_params(t);
  params["n"] = std::to_string(n);
  params["b"] = std::to_string(b);
  std::vector<Report> out;
  if (b >= n || b == 0) {
    params["degenerate"] = "true";
    const BigInt v = psi(n, b, t);
    Report r = make_report("psi_recursion", params, Rational(v), Relation::Equal, Rational(v));
    out.push_back(sw.stamp(r));
    return out;
  }
  const BigInt psi_n = psi(n, b, t);
  BigInt sum = 0;
  for (std::size_t i = b + 1; i + b + 1 <= n; ++i) sum += BigInt(static_cast<unsigned long>(i)) * pi_formula(q, i) * psi(n - i, b, t);
  const BigInt qn = ipow(q, n);
  const BigInt x = qn + sum - BigInt(static_cast<unsigned long>(n)) * psi_n;
  params["form"] = "(q^n+S-n*Psi)*|q^n+S-n*Psi| <= 4q^n";
  params["S"] = str(sum);
  params["Psi"] = str(psi_n);
  out.push_back(sw.stamp(make_report("psi_recursion", params, Rational(signed_square(x)), Relation::LessEq, Rational(4 * qn))));

  auto p2 = field_params(t);
  p2["n"] = std::to_string(n);
  p2["b"] = std::to_string(b);
  out.push_back(sw.stamp(make_report("psi_lower_10b_plus_5", p2, Rational(psi_n), Relation::GreaterEq,
                                     ratio(qn, BigInt(static_cast<unsigned long>(10 * b + 5))))));
  return out;
}

// ---------------------------------------------------------------------------
// Selberg sieve.

/// A squarefree monic D with deg D <= z, stored as its sorted prime ids.
struct SquarefreeDivisor {
  Poly poly;
  std::vector<std::uint32_t> primes;
  std::size_t degree = 0;
  int mu = 1;
  BigInt phi;
};

/// All squarefree monics of degree <= z with their prime supports.
inline std::vector<SquarefreeDivisor> squarefree_up_to(std::size_t z, const SPFTable& t) {
  t.require(z);
  const std::uint64_t q = t.field()->q();
  std::map<MonicIndex, std::uint32_t> prime_id;
  std::vector<SquarefreeDivisor> out;
  out.push_back({Poly::one(t.field()), {}, 0, 1, BigInt(1)});
  for (std::size_t d = 1; d <= z; ++d)
    for (std::uint64_t i = 0; i < t.count(d); ++i) {
      const auto fac = t.factor_indices(d, i);
      bool sf = true;
      for (const auto& [p, e] : fac) sf = sf && e == 1;
      if (!sf) continue;
      SquarefreeDivisor s{monic_decode(t.field(), {d, i}), {}, d, 1, BigInt(1)};
      for (const auto& [p, e] : fac) {
        auto [it, fresh] = prime_id.emplace(p, static_cast<std::uint32_t>(prime_id.size()));
        s.primes.push_back(it->second);
        s.mu = -s.mu;
        s.phi *= ipow(q, p.degree) - 1;
      }
      std::sort(s.primes.begin(), s.primes.end());
      out.push_back(std::move(s));
    }
  return out;
}

/// S(z) = sum over squarefree D, deg D <= z, of 1/Phi(D).
inline Rational selberg_S(std::size_t z, const SPFTable& t) {
  Rational s = 0;
  for (const auto& d : squarefree_up_to(z, t)) s += Rational(1) / Rational(d.phi);
  s.canonicalize();
  return s;
}

/// Optimal Selberg weights for sifting by primes of degree <= z.
struct SelbergWeights {
  std::size_t z = 0;
  Rational S;
  std::vector<SquarefreeDivisor> divisors;
  std::vector<Rational> theta;
  std::vector<Rational> lambda;
  Rational Q;  // quadratic form at lambda
};

namespace detail {
inline std::size_t common_degree(const SquarefreeDivisor& a, const SquarefreeDivisor& b,
                                 const std::vector<std::size_t>& prime_degree) {
  std::size_t d = 0;
  auto i = a.primes.begin();
  auto j = b.primes.begin();
  while (i != a.primes.end() && j != b.primes.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else {
      d += prime_degree[*i];
      ++i;
      ++j;
    }
  }
  return d;
}

inline std::vector<std::size_t> prime_degrees(const std::vector<SquarefreeDivisor>& ds) {
  std::vector<std::size_t> deg;
  for (const auto& d : ds)
    if (d.primes.size() == 1) {
      if (deg.size() <= d.primes[0]) deg.resize(d.primes[0] + 1, 0);
      deg[d.primes[0]] = d.degree;
    }
  return deg;
}
}  // namespace detail

/// Q(Lambda) = sum_{D1,D2} lambda_D1 lambda_D2 / |[D1,D2]|.
inline Rational selberg_Q(const std::vector<SquarefreeDivisor>& ds, const std::vector<Rational>& lambda, std::uint64_t q) {
  const auto pdeg = detail::prime_degrees(ds);
  std::size_t max_deg = 0;
  for (const auto& d : ds) max_deg = std::max(max_deg, d.degree);
  // Group by lcm degree; one exact division per degree.
  std::vector<Rational> by_deg(2 * max_deg + 1, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (lambda[i] == 0) continue;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (lambda[j] == 0) continue;
      const std::size_t l = ds[i].degree + ds[j].degree - detail::common_degree(ds[i], ds[j], pdeg);
      by_deg[l] += lambda[i] * lambda[j];
    }
  }
  Rational Q = 0;
  for (std::size_t l = 0; l < by_deg.size(); ++l) Q += by_deg[l] / Rational(ipow(q, l));
  Q.canonicalize();
  return Q;
}

/// theta_E = mu(E)/(Phi(E) S(z)); lambda_E = |E| sum_{E|D} mu(D/E) theta_D.
inline SelbergWeights selberg_weights(std::size_t z, const SPFTable& t, std::uint64_t budget = 1u << 14) {
  SelbergWeights w;
  w.z = z;
  w.divisors = squarefree_up_to(z, t);
  if (w.divisors.size() > budget) fail(ErrorCode::BudgetExceeded, "too many squarefree divisors for exact weights");
  const auto& ds = w.divisors;
  const std::uint64_t q = t.field()->q();
  w.S = 0;
  for (const auto& d : ds) w.S += Rational(1) / Rational(d.phi);
  w.S.canonicalize();
  w.theta.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    w.theta[i] = Rational(ds[i].mu) / (Rational(ds[i].phi) * w.S);
    w.theta[i].canonicalize();
  }
  w.lambda.assign(ds.size(), 0);
  for (std::size_t e = 0; e < ds.size(); ++e) {
    Rational acc = 0;
    for (std::size_t d = 0; d < ds.size(); ++d) {
      if (!std::includes(ds[d].primes.begin(), ds[d].primes.end(), ds[e].primes.begin(), ds[e].primes.end())) continue;
      // D, E squarefree with E | D: mu(D/E) = mu(D) mu(E).
      acc += Rational(ds[d].mu * ds[e].mu) * w.theta[d];
    }
    w.lambda[e] = acc * Rational(ipow(q, ds[e].degree));
    w.lambda[e].canonicalize();
  }
  w.Q = selberg_Q(ds, w.lambda, q);
  return w;
}

/// Psi(n,z) <= q^n/S(z) and q^n/S(z) <= q^n/(z(1-1/q)); also the lower
/// estimate S(z) >= sum_{i<=z} sf(i)/q^i >= z(1-1/q).
inline std::vector<Report> selberg_upper_bound_report(std::size_t n, std::size_t z, const SPFTable& t) {
  Stopwatch sw;
  if (z == 0 || 2 * z > n) fail(ErrorCode::InvalidArgument, "need 1 <= z <= n/2");
  const std::uint64_t q = t.field()->q();
  const Rational S = selberg_S(z, t);
  const Rational qn(ipow(q, n));
  const Rational weak = qn / (Rational(static_cast<unsigned long>(z)) * (Rational(1) - Rational(1, q)));
  Rational sf_sum = 0;
  for (std::size_t i = 0; i <= z; ++i) sf_sum += Rational(BigInt(squarefree_count(i, t))) / Rational(ipow(q, i));
  sf_sum.canonicalize();
  auto params = field_params(t);
  params["n"] = std::to_string(n);
  params["z"] = std::to_string(z);
  params["S"] = str(S);
  std::vector<Report> out;
  out.push_back(sw.stamp(make_report("selberg_psi_le_qn_over_S", params, Rational(BigInt(psi(n, z, t))), Relation::LessEq, qn / S)));
  out.push_back(sw.stamp(make_report("selberg_qn_over_S_le_weak", params, qn / S, Relation::LessEq, weak)));
  auto p2 = field_params(t);
  p2["z"] = std::to_string(z);
  out.push_back(sw.stamp(make_report("selberg_S_ge_squarefree_sum", p2, S, Relation::GreaterEq, sf_sum)));
  out.push_back(sw.stamp(make_report("selberg_squarefree_sum_ge_z(1-1/q)", p2, sf_sum, Relation::GreaterEq,
                                     Rational(static_cast<unsigned long>(z)) * (Rational(1) - Rational(1, q)))));
  return out;
}

// ---------------------------------------------------------------------------
// Factorization-type counts.

struct CappedTypeQuery {
  std::size_t n = 0;
  std::size_t b = 0;
  unsigned cap = 3;
  std::optional<std::pair<Poly, Poly>> residue;  // (E, M)
};

namespace detail {
template <class Visit>
void for_each_type(std::size_t n, const SPFTable& t, const std::optional<std::pair<Poly, Poly>>& residue, Visit&& visit) {
  t.require(n);
  std::optional<Poly> mm;
  std::uint64_t target = 0;
  kernel::Digits md, fd;
  if (residue) {
    mm = monic_modulus(residue->second);
    target = kernel::residue_code(residue->first, *mm);
    md.assign(mm->coeffs().begin(), mm->coeffs().end());
  }
  std::vector<unsigned> m;
  const std::uint64_t count = n == 0 ? 1 : t.count(n);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (mm) {
      t.arith().decode(n, i, fd);
      if (t.arith().residue(fd, md) != target) continue;
    }
    m.assign(n + 1, 0);
    if (n > 0)
      for (const auto& [p, e] : t.factor_indices(n, i)) ++m[p.degree];
    visit(m);
  }
}
}  // namespace detail

/// b-rough F in M_n whose factorization type has every m_j <= cap.
inline std::uint64_t capped_rough_count(const CappedTypeQuery& query, const SPFTable& t) {
  if (query.cap == 0) fail(ErrorCode::InvalidArgument, "cap must be >= 1");
  std::uint64_t c = 0;
  detail::for_each_type(query.n, t, query.residue, [&](const std::vector<unsigned>& m) {
    for (std::size_t j = 1; j < m.size(); ++j) {
      if (j <= query.b && m[j] != 0) return;
      if (m[j] > query.cap) return;
    }
    ++c;
  });
  return c;
}

/// #{F in M_n : type(F) = m (and F = E mod M)} times [m_1 = ... = m_b = 0].
inline std::uint64_t xi(std::size_t n, const FactorizationType& m, std::size_t b, const SPFTable& t,
                        const std::optional<std::pair<Poly, Poly>>& residue = std::nullopt) {
  for (std::size_t j = 1; j <= b; ++j)
    if (m[j] != 0) return 0;
  std::uint64_t c = 0;
  detail::for_each_type(n, t, residue, [&](const std::vector<unsigned>& got) { c += FactorizationType{got} == m; });
  return c;
}

/// max_A / min_A of Psi(n,b;A,M) over invertible A, exact.
struct EquidistributionResult {
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  std::size_t residues = 0;
  Rational ratio() const { return min_count == 0 ? Rational(-1) : Rational(BigInt(max_count), BigInt(min_count)); }
};

inline EquidistributionResult equidistribution(std::size_t b, const RoughHistogram& h) {
  EquidistributionResult r;
  r.min_count = UINT64_MAX;
  for (auto res : invertible_residues(h.modulus)) {
    const auto c = h.rough(b, res);
    r.min_count = std::min(r.min_count, c);
    r.max_count = std::max(r.max_count, c);
    ++r.residues;
  }
  if (r.residues == 0) r.min_count = 0;
  return r;
}

}  // namespace ffmt
