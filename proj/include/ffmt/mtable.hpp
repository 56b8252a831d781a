#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"
#include "exact.hpp"
#include "kernel.hpp"
#include "poly.hpp"
#include "sieve.hpp"

namespace ffmt {

/// Omega = { G in M_degree : G = A mod M }. A modulus of degree 0 selects all
/// of M_degree.
struct APSpec {
  std::size_t degree = 0;
  Poly residue;
  Poly modulus;

  static APSpec all(const FieldPtr& f, std::size_t degree) { return {degree, Poly::zero(f), Poly::one(f)}; }
  static APSpec of(std::size_t degree, const Poly& a, const Poly& m) {
    if (m.is_zero()) fail(ErrorCode::DivisionByZero, "zero modulus");
    const Poly mm = m.monic();
    return {degree, mm.deg() == 0 ? Poly::zero(m.field()) : a % mm, mm};
  }

  const FieldPtr& field() const { return modulus.field(); }
  bool unrestricted() const { return modulus.deg() == 0; }

  bool contains(const Poly& g) const {
    if (!g.is_monic() || g.deg() != degree) return false;
    return unrestricted() || (g % modulus) == residue;
  }

  /// Number of members (q^(degree - deg M) when deg M <= degree).
  std::uint64_t size() const {
    const std::size_t dm = modulus.deg();
    if (dm <= degree) return checked_pow(field()->q(), degree - dm);
    return (residue.is_monic() && residue.deg() == degree) ? 1 : 0;
  }

  /// Members in increasing monic-index order.
  std::vector<Poly> members() const {
    std::vector<Poly> out;
    const std::size_t dm = modulus.deg();
    if (dm > degree) {
      if (residue.is_monic() && residue.deg() == degree) out.push_back(residue);
      return out;
    }
    for (const Poly& g : enumerate_monics(field(), degree))
      if (unrestricted() || (g % modulus) == residue) out.push_back(g);
    return out;
  }
};

/// Bit array over monic indices [lo, hi) of degree n.
class HitSet {
 public:
  HitSet(std::uint64_t q, std::size_t n, std::uint64_t lo, std::uint64_t hi)
      : q_(q), n_(n), lo_(lo), hi_(hi), words_((hi - lo + 63) / 64, 0) {}

  static HitSet full(std::uint64_t q, std::size_t n) { return HitSet(q, n, 0, checked_pow(q, n)); }

  std::uint64_t q() const noexcept { return q_; }
  std::size_t degree() const noexcept { return n_; }
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

  void mark(std::uint64_t idx) noexcept {
    if (idx < lo_ || idx >= hi_) return;
    const std::uint64_t o = idx - lo_;
    words_[o >> 6] |= std::uint64_t{1} << (o & 63);
  }
  bool test(std::uint64_t idx) const noexcept {
    if (idx < lo_ || idx >= hi_) return false;
    const std::uint64_t o = idx - lo_;
    return (words_[o >> 6] >> (o & 63)) & 1;
  }
  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }
  void merge(const HitSet& o) {
    if (o.lo_ != lo_ || o.hi_ != hi_) fail(ErrorCode::InvalidArgument, "merging hit sets over different ranges");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  std::uint64_t intersection_count(const HitSet& o) const {
    if (o.lo_ != lo_ || o.hi_ != hi_) fail(ErrorCode::InvalidArgument, "intersecting hit sets over different ranges");
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::uint64_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1)
        fn(lo_ + 64 * w + static_cast<std::uint64_t>(std::countr_zero(bits)));
  }

  /// "FFHS", q and n as u64, then the bit array as little-endian u64 words.
  void save(const std::string& path) const {
    if (lo_ != 0 || hi_ != checked_pow(q_, n_)) fail(ErrorCode::InvalidArgument, "only full hit sets are exported");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::BadFile, "cannot write " + path);
    out.write("FFHS", 4);
    auto put = [&](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(q_);
    put(n_);
    for (auto w : words_) put(w);
  }

  static HitSet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "FFHS") fail(ErrorCode::BadFile, "bad hit set file " + path);
    auto get = [&]() {
      std::uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in.get())) << (8 * i);
      return v;
    };
    const std::uint64_t q = get(), n = get();
    if (!in || q < 2 || n > 40) fail(ErrorCode::BadFile, "bad hit set header");
    HitSet h = full(q, n);
    for (auto& w : h.words_) w = get();
    if (!in) fail(ErrorCode::BadFile, "truncated hit set file");
    return h;
  }

  friend bool operator==(const HitSet&, const HitSet&) = default;

 private:
  std::uint64_t q_;
  std::size_t n_;
  std::uint64_t lo_, hi_;
  std::vector<std::uint64_t> words_;
};

struct ProductOptions {
  /// Largest bit array held at once; larger targets are processed in shards.
  std::uint64_t max_bits = std::uint64_t{1} << 32;
  /// Cap on the number of (G1, G2) pairs visited, summed over shards.
  std::uint64_t max_pairs = std::uint64_t{1} << 36;
  unsigned threads = 1;
  bool keep_hitset = false;
};

struct ProductSetResult {
  std::uint64_t count = 0;
  std::uint64_t pairs = 0;
  std::size_t shards = 1;
  std::optional<HitSet> hits;
};

namespace detail {

// Marks every product G1*G2 with G1 in `left` and G2 in `right` into `hits`.
inline void mark_products(const kernel::MonicArith& ar, const std::vector<kernel::Digits>& left, const APSpec& right,
                          std::size_t begin, std::size_t end, HitSet& hits) {
  const std::size_t dm = right.modulus.deg();
  kernel::Digits base, step;
  const kernel::Digits a(right.residue.coeffs().begin(), right.residue.coeffs().end());
  const kernel::Digits m(right.modulus.coeffs().begin(), right.modulus.coeffs().end());
  if (dm > right.degree) {
    const auto members = right.members();
    kernel::Digits prod;
    for (const auto& g2 : members) {
      const kernel::Digits d(g2.coeffs().begin(), g2.coeffs().end());
      for (std::size_t i = begin; i < end; ++i) {
        ar.mul(left[i], d, prod);
        hits.mark(ar.encode(prod));
      }
    }
    return;
  }
  const std::size_t k = right.degree - dm;
  for (std::size_t i = begin; i < end; ++i) {
    // G1*(M*Q + A) = G1*A + (G1*M)*Q with Q over M_k.
    if (a.empty())
      base.clear();
    else
      ar.mul(left[i], a, base);
    ar.mul(left[i], m, step);
    kernel::for_each_product(ar, base, step, k, [&](std::uint64_t idx) { hits.mark(idx); });
  }
}

}  // namespace detail

/// |Omega1 * Omega2| by marking every pairwise product in a bit array.
inline ProductSetResult product_set_count(const APSpec& omega1, const APSpec& omega2, const ProductOptions& opt = {}) {
  Poly::check_same(omega1.modulus, omega2.modulus);
  const FieldPtr& f = omega1.field();
  const std::uint64_t q = f->q();
  const std::size_t n = omega1.degree + omega2.degree;
  const std::uint64_t total = checked_pow(q, n);
  const std::uint64_t pairs = omega1.size() * omega2.size();
  ProductSetResult res;
  res.pairs = pairs;
  const std::uint64_t shard_bits = std::min<std::uint64_t>(total, std::max<std::uint64_t>(64, opt.max_bits));
  res.shards = static_cast<std::size_t>((total + shard_bits - 1) / shard_bits);
  if (pairs > 0 && res.shards > opt.max_pairs / pairs)
    fail(ErrorCode::BudgetExceeded, std::to_string(pairs) + " pairs x " + std::to_string(res.shards) + " shards over budget");
  if (opt.keep_hitset && res.shards > 1) fail(ErrorCode::BudgetExceeded, "hit set does not fit in memory budget");

  kernel::MonicArith ar(f, n);
  std::vector<kernel::Digits> left;
  for (const Poly& g : omega1.members()) left.emplace_back(g.coeffs().begin(), g.coeffs().end());

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(1, left.size()))));
  for (std::size_t s = 0; s < res.shards; ++s) {
    const std::uint64_t lo = s * shard_bits, hi = std::min(total, lo + shard_bits);
    HitSet hits(q, n, lo, hi);
    if (threads == 1) {
      detail::mark_products(ar, left, omega2, 0, left.size(), hits);
    } else {
      std::vector<HitSet> partial(threads, HitSet(q, n, lo, hi));
      std::vector<std::thread> pool;
      const std::size_t chunk = (left.size() + threads - 1) / threads;
      for (unsigned w = 0; w < threads; ++w) {
        const std::size_t b = std::min(left.size(), w * chunk), e = std::min(left.size(), b + chunk);
        pool.emplace_back([&, b, e, w] { detail::mark_products(ar, left, omega2, b, e, partial[w]); });
      }
      for (auto& th : pool) th.join();
      for (const auto& p : partial) hits.merge(p);
    }
    res.count += hits.count();
    if (opt.keep_hitset) res.hits = std::move(hits);
  }
  return res;
}

inline HitSet product_hitset(const APSpec& omega1, const APSpec& omega2, ProductOptions opt = {}) {
  opt.keep_hitset = true;
  return std::move(*product_set_count(omega1, omega2, opt).hits);
}

/// |H(n,b)|: monics of degree n with a monic divisor of degree b.
inline std::uint64_t h_count(const FieldPtr& f, std::size_t n, std::size_t b, const ProductOptions& opt = {}) {
  if (b > n) fail(ErrorCode::InvalidArgument, "need b <= n");
  const std::size_t lo = std::min(b, n - b);
  return product_set_count(APSpec::all(f, lo), APSpec::all(f, n - lo), opt).count;
}

/// |H(n,b;A,M)|: F in H(n,b) with F = A mod M.
inline std::uint64_t h_ap_count(const FieldPtr& f, std::size_t n, std::size_t b, const Poly& a, const Poly& m,
                                const ProductOptions& opt = {}) {
  if (b > n) fail(ErrorCode::InvalidArgument, "need b <= n");
  const Poly mm = m.monic();
  const std::size_t lo = std::min(b, n - b);
  const HitSet hits = product_hitset(APSpec::all(f, lo), APSpec::all(f, n - lo), opt);
  if (mm.deg() == 0) return hits.count();
  kernel::MonicArith ar(f, n);
  const kernel::Digits md(mm.coeffs().begin(), mm.coeffs().end());
  const std::uint64_t target = kernel::residue_code(a, mm);
  kernel::Digits fd;
  std::uint64_t c = 0;
  hits.for_each([&](std::uint64_t idx) {
    ar.decode(n, idx, fd);
    c += ar.residue(fd, md) == target;
  });
  return c;
}

/// |H'(n,b;A,M)|: F in M_n with a divisor G in M_b, G = A mod M.
inline std::uint64_t h_divisor_ap_count(const FieldPtr& f, std::size_t n, std::size_t b, const Poly& a, const Poly& m,
                                        const ProductOptions& opt = {}) {
  if (b > n) fail(ErrorCode::InvalidArgument, "need b <= n");
  return product_set_count(APSpec::of(b, a, m), APSpec::all(f, n - b), opt).count;
}

/// |H(n,b;A1,A2,M1,M2)| = |{G1 G2 : G1 in M_b, G1 = A1 mod M1, G2 in M_(n-b), G2 = A2 mod M2}|.
inline std::uint64_t h_two_ap_count(std::size_t n, std::size_t b, const Poly& a1, const Poly& m1, const Poly& a2,
                                    const Poly& m2, const ProductOptions& opt = {}) {
  if (b > n) fail(ErrorCode::InvalidArgument, "need b <= n");
  return product_set_count(APSpec::of(b, a1, m1), APSpec::of(n - b, a2, m2), opt).count;
}

/// Multiplication-table variants M(2n; ...) = H(2n, n; ...).
struct MTableCounts {
  std::uint64_t full = 0;                     // |M(2n)|
  std::optional<std::uint64_t> ap;            // |M(2n;A,M)|
  std::optional<std::uint64_t> divisor_ap;    // |M'(2n;A,M)|
  std::optional<std::uint64_t> two_ap;        // |M(2n;A1,A2,M1,M2)|
};

struct MTableQuery {
  std::optional<std::pair<Poly, Poly>> ap;                       // (A, M)
  std::optional<std::array<Poly, 4>> two_ap;                     // (A1, A2, M1, M2)
};

inline MTableCounts m_table_counts(const FieldPtr& f, std::size_t n, const MTableQuery& query = {},
                                   const ProductOptions& opt = {}) {
  MTableCounts c;
  c.full = h_count(f, 2 * n, n, opt);
  if (query.ap) {
    c.ap = h_ap_count(f, 2 * n, n, query.ap->first, query.ap->second, opt);
    c.divisor_ap = h_divisor_ap_count(f, 2 * n, n, query.ap->first, query.ap->second, opt);
  }
  if (query.two_ap) {
    const auto& v = *query.two_ap;
    c.two_ap = h_two_ap_count(2 * n, n, v[0], v[2], v[1], v[3], opt);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Divisor-degree statistics.

struct DivisorStats {
  std::vector<std::size_t> degrees;    // L(H) as a sorted set
  std::vector<BigInt> tau_d;           // tau_d for d = 0..deg H
  BigInt tau;
  BigInt W;
  std::size_t L() const noexcept { return degrees.size(); }
};

/// Statistics from (prime degree, exponent) pairs: the divisor degree
/// distribution is the coefficient list of prod (1 + x^d + ... + x^(k d)).
inline DivisorStats divisor_stats_from_degrees(const std::vector<std::pair<unsigned, unsigned>>& factors) {
  std::size_t total = 0;
  for (const auto& [d, k] : factors) total += static_cast<std::size_t>(d) * k;
  std::vector<BigInt> dist(total + 1, 0);
  dist[0] = 1;
  std::size_t reach = 0;
  std::vector<BigInt> next;
  for (const auto& [d, k] : factors) {
    next.assign(total + 1, 0);
    for (std::size_t i = 0; i <= reach; ++i) {
      if (dist[i] == 0) continue;
      for (unsigned j = 0; j <= k; ++j) next[i + static_cast<std::size_t>(j) * d] += dist[i];
    }
    reach += static_cast<std::size_t>(d) * k;
    dist.swap(next);
  }
  DivisorStats s;
  s.tau_d = std::move(dist);
  s.tau = 0;
  s.W = 0;
  for (std::size_t i = 0; i < s.tau_d.size(); ++i) {
    if (s.tau_d[i] == 0) continue;
    s.degrees.push_back(i);
    s.tau += s.tau_d[i];
    s.W += s.tau_d[i] * s.tau_d[i];
  }
  return s;
}

inline DivisorStats divisor_stats(const Poly& h, const SPFTable& t) {
  detail::require_monic_in_table(h, t);
  std::vector<std::pair<unsigned, unsigned>> fac;
  if (h.deg() > 0) {
    const auto mi = monic_encode(h);
    t.factor_degrees(mi.degree, mi.index, fac);
  }
  return divisor_stats_from_degrees(fac);
}

/// All monic divisors, products over exponent choices.
inline std::vector<Poly> divisors(const Poly& h, const SPFTable& t) {
  std::vector<Poly> out{Poly::one(h.field())};
  for (const auto& pp : factorize(h, t)) {
    const std::size_t base = out.size();
    Poly power = Poly::one(h.field());
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      power = power * pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  return out;
}

/// Bit mask of degrees reachable as degrees of monic divisors (n < 64).
inline std::uint64_t divisor_degree_mask(const std::vector<std::pair<unsigned, unsigned>>& factors) {
  std::uint64_t reach = 1;
  for (const auto& [d, k] : factors) {
    std::uint64_t next = reach;
    for (unsigned j = 1; j <= k; ++j) next |= reach << (static_cast<std::uint64_t>(j) * d);
    reach = next;
  }
  return reach;
}

/// |H(n,b)| by scanning M_n and testing for a degree-b divisor through the
/// factorization (independent of product marking).
inline std::uint64_t h_count_direct(std::size_t n, std::size_t b, const SPFTable& t) {
  if (b > n) fail(ErrorCode::InvalidArgument, "need b <= n");
  if (n == 0) return 1;
  t.require(n);
  if (n >= 63) fail(ErrorCode::InvalidArgument, "degree too large for the divisor-degree mask");
  std::vector<std::pair<unsigned, unsigned>> fac;
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(n); ++i) {
    t.factor_degrees(n, i, fac);
    c += (divisor_degree_mask(fac) >> b) & 1;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Scaling study for |H(n,b)| against q^n / (b^delta (1 + log b)^(3/2)).

/// 1 - (1 + ln ln 2)/ln 2.
inline double erdos_delta() { return 1.0 - (1.0 + std::log(std::log(2.0))) / std::log(2.0); }

struct ScalingRow {
  std::uint64_t q = 0;
  std::size_t n = 0;
  std::size_t b = 0;
  std::uint64_t count = 0;
  double ratio_natural_log = 0;  // count * b^delta * (1 + ln b)^(3/2) / q^n
  double ratio_log_q = 0;        // same with log_q b
};

inline ScalingRow scaling_row(const FieldPtr& f, std::size_t n, std::size_t b, const ProductOptions& opt = {}) {
  ScalingRow r{f->q(), n, b, h_count(f, n, b, opt), 0, 0};
  const double density = static_cast<double>(r.count) / std::pow(static_cast<double>(r.q), static_cast<double>(n));
  const double bd = std::pow(static_cast<double>(b), erdos_delta());
  const double lb = std::log(static_cast<double>(b));
  r.ratio_natural_log = density * bd * std::pow(1.0 + lb, 1.5);
  r.ratio_log_q = density * bd * std::pow(1.0 + lb / std::log(static_cast<double>(r.q)), 1.5);
  return r;
}

}  // namespace ffmt
