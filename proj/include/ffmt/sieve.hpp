#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "exact.hpp"
#include "field.hpp"
#include "kernel.hpp"
#include "poly.hpp"

namespace ffmt {

struct PrimePower {
  Poly prime;
  unsigned exponent = 0;
};

/// Distinct prime divisors counted by degree: m[i] primes of degree i
/// (m[0] is always 0, the vector has length deg F + 1).
struct FactorizationType {
  std::vector<unsigned> m;

  unsigned operator[](std::size_t i) const noexcept { return i < m.size() ? m[i] : 0; }
  /// Sum of i*m_i; equals deg F exactly when F is squarefree.
  std::size_t weight() const noexcept {
    std::size_t w = 0;
    for (std::size_t i = 0; i < m.size(); ++i) w += i * m[i];
    return w;
  }
  /// Equality up to trailing zeros.
  friend bool operator==(const FactorizationType& a, const FactorizationType& b) {
    const std::size_t len = std::max(a.m.size(), b.m.size());
    for (std::size_t i = 0; i < len; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }
};

/// Least-degree prime factor of every monic F with 1 <= deg F <= max_deg,
/// ties broken by least monic index.
class SPFTable {
 public:
  static constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 28;

  static SPFTable build(FieldPtr field, std::size_t max_deg, std::uint64_t budget_entries = kDefaultBudget) {
    std::uint64_t total = 0;
    for (std::size_t d = 1; d <= max_deg; ++d) {
      total += checked_pow(field->q(), d);
      if (total > budget_entries)
        fail(ErrorCode::BudgetExceeded, "sieve needs " + std::to_string(total) + "+ entries, budget " + std::to_string(budget_entries));
    }
    SPFTable t(std::move(field), max_deg);
    t.sieve();
    return t;
  }

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t max_deg() const noexcept { return max_deg_; }
  const kernel::MonicArith& arith() const noexcept { return ar_; }
  std::uint64_t count(std::size_t d) const noexcept { return ar_.qpow(d); }

  void require(std::size_t n) const {
    if (n > max_deg_)
      fail(ErrorCode::DegreeExceedsTable, "degree " + std::to_string(n) + " > table max " + std::to_string(max_deg_));
  }

  /// Smallest prime factor of the monic with the given address.
  MonicIndex spf(MonicIndex f) const {
    require(f.degree);
    if (f.degree == 0) fail(ErrorCode::InvalidArgument, "1 has no prime factor");
    return {spf_deg_[f.degree][f.index], spf_idx_[f.degree][f.index]};
  }
  std::uint8_t spf_degree(std::size_t n, std::uint64_t idx) const noexcept { return spf_deg_[n][idx]; }
  std::uint32_t spf_index(std::size_t n, std::uint64_t idx) const noexcept { return spf_idx_[n][idx]; }
  bool is_prime(std::size_t n, std::uint64_t idx) const noexcept {
    return n >= 1 && spf_deg_[n][idx] == n;
  }

  /// Degrees and exponents of the prime factorization, smallest first.
  /// Each entry is (prime address, exponent).
  std::vector<std::pair<MonicIndex, unsigned>> factor_indices(std::size_t n, std::uint64_t idx) const {
    require(n);
    std::vector<std::pair<MonicIndex, unsigned>> out;
    kernel::Digits cur, pd, quo;
    ar_.decode(n, idx, cur);
    std::size_t deg = n;
    std::uint64_t id = idx;
    while (deg > 0) {
      const MonicIndex p{spf_deg_[deg][id], spf_idx_[deg][id]};
      if (p.degree == deg) {
        push(out, p);
        break;
      }
      ar_.decode(p.degree, p.index, pd);
      ar_.divide_exact(cur, pd, quo);
      push(out, p);
      cur.swap(quo);
      deg = cur.size() - 1;
      id = ar_.encode(cur);
    }
    return out;
  }

  /// (degree, exponent) pairs of the factorization.
  void factor_degrees(std::size_t n, std::uint64_t idx, std::vector<std::pair<unsigned, unsigned>>& out) const {
    out.clear();
    for (const auto& [p, e] : factor_indices(n, idx)) out.emplace_back(static_cast<unsigned>(p.degree), e);
  }

  // Persistence: magic "FFMT", u32 version, u64 p, e, reduction index,
  // max_deg, then for d = 1..max_deg q^d u64 entries (deg << 48 | index).
  static constexpr std::uint32_t kFileVersion = 1;

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::BadFile, "cannot write " + path);
    out.write("FFMT", 4);
    put_u32(out, kFileVersion);
    put_u64(out, field_->p());
    put_u64(out, field_->e());
    put_u64(out, field_->reduction_index());
    put_u64(out, max_deg_);
    std::vector<std::uint64_t> buf;
    for (std::size_t d = 1; d <= max_deg_; ++d) {
      const std::uint64_t cnt = count(d);
      buf.resize(cnt);
      for (std::uint64_t i = 0; i < cnt; ++i)
        buf[i] = (static_cast<std::uint64_t>(spf_deg_[d][i]) << 48) | spf_idx_[d][i];
      write_le(out, buf);
    }
    if (!out) fail(ErrorCode::BadFile, "short write to " + path);
  }

  /// Loads a table and re-derives three random entries by trial division.
  static SPFTable load(const std::string& path, std::uint64_t seed = 0x5eed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::BadFile, "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FFMT", 4) != 0) fail(ErrorCode::BadFile, "bad magic in " + path);
    if (get_u32(in) != kFileVersion) fail(ErrorCode::BadFile, "unsupported sieve file version");
    const std::uint64_t p = get_u64(in), e = get_u64(in), red_idx = get_u64(in), max_deg = get_u64(in);
    if (!in || p > Field::kMaxOrder || e == 0 || e > 16 || max_deg == 0 || max_deg > 64)
      fail(ErrorCode::BadFile, "bad sieve header");
    std::optional<std::vector<std::uint32_t>> red;
    if (e > 1) {
      std::vector<std::uint32_t> r(e + 1);
      std::uint64_t idx = red_idx;
      for (std::size_t i = 0; i < e; ++i) {
        r[i] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
      }
      r[e] = 1;
      red = std::move(r);
    }
    auto field = Field::create(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(e), red);
    SPFTable t(field, max_deg);
    std::vector<std::uint64_t> buf;
    for (std::size_t d = 1; d <= max_deg; ++d) {
      const std::uint64_t cnt = t.count(d);
      buf.resize(cnt);
      read_le(in, buf);
      if (!in) fail(ErrorCode::BadFile, "truncated sieve file");
      for (std::uint64_t i = 0; i < cnt; ++i) {
        const std::uint64_t sd = buf[i] >> 48, si = buf[i] & ((std::uint64_t{1} << 48) - 1);
        if (sd == 0 || sd > d || si >= t.count(sd)) fail(ErrorCode::BadFile, "corrupt sieve entry");
        t.spf_deg_[d][i] = static_cast<std::uint8_t>(sd);
        t.spf_idx_[d][i] = static_cast<std::uint32_t>(si);
      }
    }
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 3; ++k) {
      const std::size_t d = 1 + rng() % max_deg;
      const std::uint64_t i = rng() % t.count(d);
      const Poly f = monic_decode(field, {d, i});
      if (trial_division_spf(f) != t.spf({d, i})) fail(ErrorCode::BadFile, "sieve entry failed trial-division check");
    }
    return t;
  }

  /// Smallest prime factor by trial division over monics in (degree, index) order.
  static MonicIndex trial_division_spf(const Poly& f) {
    const std::size_t n = f.deg();
    for (std::size_t d = 1; 2 * d <= n; ++d)
      for (const Poly& g : enumerate_monics(f.field(), d))
        if (divides(g, f)) return monic_encode(g);
    return monic_encode(f);
  }

 private:
  SPFTable(FieldPtr field, std::size_t max_deg)
      : field_(std::move(field)), max_deg_(max_deg), ar_(field_, max_deg), spf_deg_(max_deg + 1), spf_idx_(max_deg + 1) {
    if (max_deg > 255) fail(ErrorCode::InvalidArgument, "max_deg too large");
    for (std::size_t d = 1; d <= max_deg_; ++d) {
      spf_deg_[d].assign(count(d), 0);
      spf_idx_[d].assign(count(d), 0);
    }
  }

  // Primes are visited in increasing (degree, index) order; each marks its
  // unmarked multiples, so every entry receives its least prime factor.
  void sieve() {
    kernel::Digits pd;
    const kernel::Digits no_base;
    for (std::size_t d = 1; d <= max_deg_; ++d) {
      auto& deg_row = spf_deg_[d];
      for (std::uint64_t i = 0; i < count(d); ++i) {
        if (deg_row[i] != 0) continue;
        deg_row[i] = static_cast<std::uint8_t>(d);
        spf_idx_[d][i] = static_cast<std::uint32_t>(i);
        ar_.decode(d, i, pd);
        for (std::size_t k = 1; d + k <= max_deg_; ++k) {
          auto& row_d = spf_deg_[d + k];
          auto& row_i = spf_idx_[d + k];
          kernel::for_each_product(ar_, no_base, pd, k, [&](std::uint64_t prod) {
            if (row_d[prod] == 0) {
              row_d[prod] = static_cast<std::uint8_t>(d);
              row_i[prod] = static_cast<std::uint32_t>(i);
            }
          });
        }
      }
    }
  }

  static void push(std::vector<std::pair<MonicIndex, unsigned>>& out, MonicIndex p) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }

  static void put_u32(std::ostream& o, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static void put_u64(std::ostream& o, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in.get())) << (8 * i);
    return v;
  }
  static std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in.get())) << (8 * i);
    return v;
  }
  static void write_le(std::ostream& o, const std::vector<std::uint64_t>& buf) {
    std::vector<unsigned char> bytes(buf.size() * 8);
    for (std::size_t i = 0; i < buf.size(); ++i)
      for (int b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<unsigned char>((buf[i] >> (8 * b)) & 0xff);
    o.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  static void read_le(std::istream& in, std::vector<std::uint64_t>& buf) {
    std::vector<unsigned char> bytes(buf.size() * 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    for (std::size_t i = 0; i < buf.size(); ++i) {
      std::uint64_t v = 0;
      for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
      buf[i] = v;
    }
  }

  FieldPtr field_;
  std::size_t max_deg_;
  kernel::MonicArith ar_;
  std::vector<std::vector<std::uint8_t>> spf_deg_;
  std::vector<std::vector<std::uint32_t>> spf_idx_;
};

inline SPFTable build_spf(FieldPtr field, std::size_t max_deg, std::uint64_t budget = SPFTable::kDefaultBudget) {
  return SPFTable::build(std::move(field), max_deg, budget);
}

namespace detail {
inline void require_monic_in_table(const Poly& f, const SPFTable& t) {
  if (!f.is_monic()) fail(ErrorCode::NotMonic, "expected a monic polynomial");
  t.require(f.deg());
}
}  // namespace detail

inline std::vector<PrimePower> factorize(const Poly& f, const SPFTable& t) {
  detail::require_monic_in_table(f, t);
  std::vector<PrimePower> out;
  if (f.deg() == 0) return out;
  const auto mi = monic_encode(f);
  for (const auto& [p, e] : t.factor_indices(mi.degree, mi.index)) out.push_back({monic_decode(t.field(), p), e});
  return out;
}

inline FactorizationType factorization_type(const Poly& f, const SPFTable& t) {
  detail::require_monic_in_table(f, t);
  FactorizationType ft{std::vector<unsigned>(f.deg() + 1, 0)};
  if (f.deg() == 0) return ft;
  const auto mi = monic_encode(f);
  for (const auto& [p, e] : t.factor_indices(mi.degree, mi.index)) ++ft.m[p.degree];
  return ft;
}

// ---------------------------------------------------------------------------
// Multiplicative functions and prime counts.

/// Mobius function of a monic polynomial.
inline int mobius(const Poly& f, const SPFTable& t) {
  int mu = 1;
  for (const auto& pp : factorize(f, t)) {
    if (pp.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

/// Polynomial Euler function: prod over P^k || M of q^((k-1)deg P)(q^deg P - 1).
inline BigInt phi(const Poly& m, const SPFTable& t) {
  const std::uint64_t q = t.field()->q();
  BigInt r = 1;
  for (const auto& pp : factorize(m, t)) {
    const std::size_t d = pp.prime.deg();
    r *= ipow(q, (pp.exponent - 1) * d) * (ipow(q, d) - 1);
  }
  return r;
}

/// Smallest degree of a prime divisor; nullopt stands for +infinity (F = 1).
inline std::optional<std::size_t> smallest_prime_degree(const Poly& f, const SPFTable& t) {
  detail::require_monic_in_table(f, t);
  if (f.deg() == 0) return std::nullopt;
  const auto mi = monic_encode(f);
  return t.spf(mi).degree;
}

/// Number of distinct prime divisors of M of degree j.
inline unsigned prime_divisors_of_degree(const Poly& m, std::size_t j, const SPFTable& t) {
  unsigned c = 0;
  for (const auto& pp : factorize(m, t))
    if (pp.prime.deg() == j) ++c;
  return c;
}

/// Number of primes in M_n by table scan.
inline std::uint64_t pi(std::size_t n, const SPFTable& t) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "pi needs n >= 1");
  t.require(n);
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(n); ++i) c += t.is_prime(n, i);
  return c;
}

inline int mobius_int(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

/// (1/n) sum_{d|n} mu(n/d) q^d in exact integers.
inline BigInt pi_formula(std::uint64_t q, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "pi needs n >= 1");
  BigInt s = 0;
  for (std::size_t d = 1; d <= n; ++d)
    if (n % d == 0) s += mobius_int(n / d) * ipow(q, d);
  return s / static_cast<unsigned long>(n);
}

inline Poly monic_modulus(const Poly& m) {
  if (m.is_zero() || m.deg() == 0) fail(ErrorCode::InvalidArgument, "modulus must have degree >= 1");
  return m.monic();
}

/// Primes P in M_n with P = A mod M.
inline std::uint64_t pi_ap(std::size_t n, const Poly& a, const Poly& m, const SPFTable& t) {
  const Poly mm = monic_modulus(m);
  if (gcd(a, mm).deg() != 0) fail(ErrorCode::NotCoprime, "(A, M) != 1");
  t.require(n);
  const auto& ar = t.arith();
  const kernel::Digits md(mm.coeffs().begin(), mm.coeffs().end());
  const std::uint64_t target = kernel::residue_code(a, mm);
  kernel::Digits fd;
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(n); ++i) {
    if (!t.is_prime(n, i)) continue;
    ar.decode(n, i, fd);
    c += ar.residue(fd, md) == target;
  }
  return c;
}

/// Squarefree monics of degree i by table scan.
inline std::uint64_t squarefree_count(std::size_t i, const SPFTable& t) {
  if (i == 0) return 1;
  t.require(i);
  std::uint64_t c = 0;
  for (std::uint64_t idx = 0; idx < t.count(i); ++idx) {
    bool sf = true;
    for (const auto& [p, e] : t.factor_indices(i, idx))
      if (e > 1) sf = false;
    c += sf;
  }
  return c;
}

/// Primes P in M_n with P^l = E mod M.
inline std::uint64_t gamma_roots(std::size_t n, std::uint64_t l, const Poly& e, const Poly& m, const SPFTable& t) {
  if (l == 0) fail(ErrorCode::InvalidArgument, "l must be >= 1");
  const Poly mm = monic_modulus(m);
  t.require(n);
  const Poly target = e % mm;
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < t.count(n); ++i) {
    if (!t.is_prime(n, i)) continue;
    c += powmod(monic_decode(t.field(), {n, i}), l, mm) == target;
  }
  return c;
}

}  // namespace ffmt
