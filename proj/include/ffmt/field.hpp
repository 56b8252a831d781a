#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace ffmt {

/// Element of F_q, encoded as the integer whose base-p digits are the
/// coefficients of the residue modulo the reduction polynomial.
using Elem = std::uint32_t;

namespace detail {

inline bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomials over F_p (little-endian, trailing zeros trimmed). Only
// used while bootstrapping an extension field.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p prime: a^(p-2)
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

inline PrimePoly rem_mod_p(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

inline PrimePoly digits_of(std::uint64_t code, std::uint32_t p, std::size_t len) {
  PrimePoly d(len);
  for (std::size_t i = 0; i < len; ++i) {
    d[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return d;
}

inline bool irreducible_by_trial_division(const PrimePoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PrimePoly g = digits_of(idx, p, d);
      g.push_back(1);
      if (rem_mod_p(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// The finite field F_q, q = p^e <= 2^16.
///
/// Prime fields use modular arithmetic. Extension fields are realized as
/// F_p[X]/(R) for a monic irreducible R of degree e; with no R supplied the
/// least monic irreducible in monic-index order is chosen. Multiplication,
/// addition and inversion are table driven up to q = 2^12 and computed on
/// the fly above that.
class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;
  static constexpr std::uint32_t kMaxTableOrder = 1u << 12;

  static std::shared_ptr<const Field> create(std::uint32_t p, std::uint32_t e = 1,
                                             std::optional<std::vector<std::uint32_t>> reduction = {}) {
    if (!detail::is_prime_u32(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (e == 0) fail(ErrorCode::InvalidArgument, "extension degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxOrder) fail(ErrorCode::FieldTooLarge, "q exceeds 2^16");
    }
    detail::PrimePoly red;
    if (e > 1) {
      if (reduction) {
        red = *reduction;
        detail::trim(red);
        if (red.size() != e + 1 || red.back() != 1)
          fail(ErrorCode::InvalidArgument, "reduction must be monic of degree e");
        for (auto c : red)
          if (c >= p) fail(ErrorCode::CoefficientOutOfRange, "reduction coefficient out of range");
        if (!detail::irreducible_by_trial_division(red, p))
          fail(ErrorCode::NotIrreducible, "reduction polynomial is reducible");
      } else {
        red = least_irreducible(p, e);
      }
    }
    return std::shared_ptr<const Field>(new Field(p, e, static_cast<std::uint32_t>(q), std::move(red)));
  }

  /// Builds F_q from the order alone (q must be a prime power).
  static std::shared_ptr<const Field> create_order(std::uint32_t q) {
    if (q < 2) fail(ErrorCode::NotPrime, "q must be a prime power");
    std::uint32_t p = 2;
    while (q % p != 0) ++p;
    std::uint32_t e = 0;
    std::uint32_t r = q;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) fail(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
    return create(p, e);
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return e_ == 1; }
  bool is_binary() const noexcept { return q_ == 2; }
  /// Coefficients over F_p, little-endian; empty for prime fields.
  const std::vector<std::uint32_t>& reduction() const noexcept { return reduction_; }

  /// Monic index of the reduction polynomial over F_p (0 for prime fields).
  std::uint64_t reduction_index() const noexcept {
    std::uint64_t idx = 0;
    for (std::size_t i = e_; i-- > 0;) idx = idx * p_ + (reduction_.empty() ? 0 : reduction_[i]);
    return reduction_.empty() ? 0 : idx;
  }

  Elem add(Elem a, Elem b) const noexcept {
    if (e_ == 1) {
      const Elem s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    return add_digits(a, b, false);
  }

  Elem neg(Elem a) const noexcept {
    if (e_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_table_[a];
  }

  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const noexcept {
    if (e_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * q_ + b];
    return mul_slow(a, b);
  }

  Elem inv(Elem a) const {
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
    return inv_table_[a];
  }

  bool operator==(const Field& o) const noexcept {
    return p_ == o.p_ && e_ == o.e_ && reduction_ == o.reduction_;
  }

  std::string describe() const {
    std::string s = "F_" + std::to_string(q_);
    if (e_ > 1) {
      s += " = F_" + std::to_string(p_) + "[X]/([";
      for (std::size_t i = 0; i < reduction_.size(); ++i) s += (i ? "," : "") + std::to_string(reduction_[i]);
      s += "])";
    }
    return s;
  }

 private:
  Field(std::uint32_t p, std::uint32_t e, std::uint32_t q, detail::PrimePoly red)
      : p_(p), e_(e), q_(q), reduction_(std::move(red)) {
    if (e_ == 1) {
      inv_table_.assign(q_, 0);
      for (std::uint32_t a = 1; a < q_; ++a) inv_table_[a] = detail::inv_mod(a, p_);
      return;
    }
    neg_table_.resize(q_);
    for (Elem a = 0; a < q_; ++a) neg_table_[a] = add_digits(a, 0, true);
    // Powers of a generator of the cyclic group F_q^* give log/antilog tables.
    std::vector<Elem> antilog(q_ - 1), log(q_, 0);
    for (Elem g = 2;; ++g) {
      Elem x = 1;
      std::uint32_t k = 0;
      do {
        antilog[k] = x;
        log[x] = k;
        x = mul_slow(x, g);
        ++k;
      } while (x != 1 && k < q_ - 1);
      if (x == 1 && k == q_ - 1) break;
    }
    if (q_ <= kMaxTableOrder) {
      const std::size_t qq = static_cast<std::size_t>(q_) * q_;
      add_table_.resize(qq);
      mul_table_.assign(qq, 0);
      for (Elem a = 0; a < q_; ++a)
        for (Elem b = 0; b < q_; ++b) {
          add_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(add_digits(a, b, false));
          if (a != 0 && b != 0)
            mul_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(antilog[(log[a] + log[b]) % (q_ - 1)]);
        }
    }
    inv_table_.assign(q_, 0);
    for (Elem a = 1; a < q_; ++a) inv_table_[a] = antilog[(q_ - 1 - log[a]) % (q_ - 1)];
  }

  static detail::PrimePoly least_irreducible(std::uint32_t p, std::uint32_t e) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < e; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      auto f = detail::digits_of(idx, p, e);
      f.push_back(1);
      if (detail::irreducible_by_trial_division(f, p)) return f;
    }
    fail(ErrorCode::NotIrreducible, "no irreducible polynomial found");
  }

  Elem add_digits(Elem a, Elem b, bool negate_a) const noexcept {
    Elem out = 0, scale = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      std::uint32_t da = a % p_, db = b % p_;
      a /= p_;
      b /= p_;
      if (negate_a) da = da == 0 ? 0 : p_ - da;
      out += ((da + db) % p_) * scale;
      scale *= p_;
    }
    return out;
  }

  Elem mul_slow(Elem a, Elem b) const {
    std::array<std::uint64_t, 32> da{}, db{}, prod{};
    for (std::uint32_t i = 0; i < e_; ++i) {
      da[i] = a % p_;
      db[i] = b % p_;
      a /= p_;
      b /= p_;
    }
    for (std::uint32_t i = 0; i < e_; ++i)
      for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    for (std::uint32_t k = 2 * e_ - 1; k-- > e_;) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      for (std::uint32_t i = 0; i <= e_; ++i) prod[k - e_ + i] = (prod[k - e_ + i] + (p_ - c) * reduction_[i]) % p_;
    }
    Elem out = 0;
    for (std::uint32_t i = e_; i-- > 0;) out = out * p_ + static_cast<Elem>(prod[i]);
    return out;
  }

  std::uint32_t p_, e_, q_;
  std::vector<std::uint32_t> reduction_;
  std::vector<std::uint16_t> add_table_, mul_table_;
  std::vector<Elem> neg_table_, inv_table_;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace ffmt
