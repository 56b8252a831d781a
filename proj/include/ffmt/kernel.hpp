#pragma once

// Index-level arithmetic on monic polynomials, used by the enumeration
// engines. A monic F of degree n is addressed by its monic index; here it is
// also handled as a digit vector of length n+1 (digits[n] == 1).

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "field.hpp"
#include "poly.hpp"

namespace ffmt::kernel {

using Digits = std::vector<Elem>;

class MonicArith {
 public:
  MonicArith(FieldPtr field, std::size_t max_degree) : field_(std::move(field)), q_(field_->q()) {
    qpow_.push_back(1);
    for (std::size_t i = 0; i < max_degree + 1; ++i) qpow_.push_back(qpow_.back() * q_);
  }

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  std::uint64_t q() const noexcept { return q_; }
  std::uint64_t qpow(std::size_t k) const noexcept { return qpow_[k]; }
  std::size_t max_degree() const noexcept { return qpow_.size() - 2; }

  void decode(std::size_t n, std::uint64_t idx, Digits& out) const {
    out.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<Elem>(idx % q_);
      idx /= q_;
    }
    out[n] = 1;
  }

  Digits decode(std::size_t n, std::uint64_t idx) const {
    Digits d;
    decode(n, idx, d);
    return d;
  }

  /// Index of a monic digit vector (the leading 1 is implied).
  std::uint64_t encode(std::span<const Elem> d) const {
    std::uint64_t idx = 0;
    for (std::size_t i = d.size() - 1; i-- > 0;) idx = idx * q_ + d[i];
    return idx;
  }

  void mul(std::span<const Elem> a, std::span<const Elem> b, Digits& out) const {
    const Field& F = *field_;
    out.assign(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
  }

  /// Quotient of monic a by monic d; returns false if d does not divide a.
  bool divide_exact(std::span<const Elem> a, std::span<const Elem> d, Digits& quo) const {
    const Field& F = *field_;
    thread_local Digits scratch;
    scratch.assign(a.begin(), a.end());
    const std::size_t dd = d.size() - 1;
    if (a.size() < d.size()) return false;
    quo.assign(a.size() - dd, 0);
    for (std::size_t k = scratch.size(); k-- > dd;) {
      const Elem c = scratch[k];
      if (c == 0) continue;
      const std::size_t shift = k - dd;
      quo[shift] = c;
      for (std::size_t i = 0; i <= dd; ++i) scratch[shift + i] = F.sub(scratch[shift + i], F.mul(c, d[i]));
    }
    for (std::size_t i = 0; i < dd; ++i)
      if (scratch[i] != 0) return false;
    return true;
  }

  /// Remainder code sum r_i q^i of a modulo the monic m (deg m >= 1).
  std::uint64_t residue(std::span<const Elem> a, std::span<const Elem> m) const {
    const Field& F = *field_;
    const std::size_t dm = m.size() - 1;
    thread_local Digits scratch;
    scratch.assign(a.begin(), a.end());
    for (std::size_t k = scratch.size(); k-- > dm;) {
      const Elem c = scratch[k];
      if (c == 0) continue;
      const std::size_t shift = k - dm;
      for (std::size_t i = 0; i <= dm; ++i) scratch[shift + i] = F.sub(scratch[shift + i], F.mul(c, m[i]));
    }
    std::uint64_t code = 0;
    for (std::size_t i = std::min(dm, scratch.size()); i-- > 0;) code = code * q_ + scratch[i];
    return code;
  }

 private:
  FieldPtr field_;
  std::uint64_t q_;
  std::vector<std::uint64_t> qpow_;
};

/// Residue code of an arbitrary polynomial modulo a monic modulus.
inline std::uint64_t residue_code(const Poly& a, const Poly& monic_modulus) {
  const auto r = a % monic_modulus;
  std::uint64_t code = 0;
  const std::uint64_t q = a.field()->q();
  for (std::size_t i = r.coeffs().size(); i-- > 0;) code = code * q + r.coeffs()[i];
  return code;
}

inline Poly residue_poly(const FieldPtr& f, std::uint64_t code, std::size_t len) {
  std::vector<Elem> c(len);
  for (std::size_t i = 0; i < len; ++i) {
    c[i] = static_cast<Elem>(code % f->q());
    code /= f->q();
  }
  return Poly(f, std::move(c));
}

/// Calls emit(index) for every product base + step*Q with Q running over the
/// monic polynomials of degree k. base has degree < deg(step)+k, step is
/// monic, so every product is monic of degree n = deg(step)+k.
///
/// Consecutive Q differ in few low digits; the product is updated in place
/// by adding delta*T^i*step instead of being recomputed.
template <class Emit>
void for_each_product(const MonicArith& ar, std::span<const Elem> base, std::span<const Elem> step, std::size_t k,
                      Emit&& emit) {
  const Field& F = ar.field();
  const std::size_t ds = step.size() - 1;
  const std::size_t n = ds + k;
  if (F.is_binary() && n < 63) {
    std::uint64_t s = 0, prod = 0;
    for (std::size_t i = 0; i < step.size(); ++i) s |= static_cast<std::uint64_t>(step[i]) << i;
    for (std::size_t i = 0; i < base.size(); ++i) prod ^= static_cast<std::uint64_t>(base[i]) << i;
    prod ^= s << k;
    const std::uint64_t mask = (n == 0) ? 0 : ((std::uint64_t{1} << n) - 1);
    emit(prod & mask);
    // Gray-code walk over the k free digits.
    const std::uint64_t count = std::uint64_t{1} << k;
    for (std::uint64_t g = 1; g < count; ++g) {
      prod ^= s << std::countr_zero(g);
      emit(prod & mask);
    }
    return;
  }

  const std::uint64_t q = ar.q();
  Digits prod(n + 1, 0);
  for (std::size_t i = 0; i < base.size(); ++i) prod[i] = F.add(prod[i], base[i]);
  for (std::size_t i = 0; i <= ds; ++i) prod[i + k] = F.add(prod[i + k], step[i]);
  std::uint64_t idx = ar.encode(prod);
  emit(idx);

  Digits digit(k, 0);
  // delta*T^j*step added to prod, keeping idx in sync.
  auto add_shifted = [&](Elem delta, std::size_t j) {
    for (std::size_t t = 0; t <= ds; ++t) {
      const std::size_t pos = j + t;
      if (pos >= n) break;
      const Elem old = prod[pos];
      const Elem nw = F.add(old, F.mul(delta, step[t]));
      prod[pos] = nw;
      idx = idx + static_cast<std::uint64_t>(nw) * ar.qpow(pos) - static_cast<std::uint64_t>(old) * ar.qpow(pos);
    }
  };
  const Elem top = static_cast<Elem>(q - 1);
  const Elem wrap_delta = F.neg(top);  // element q-1 back to element 0
  while (true) {
    std::size_t i = 0;
    while (i < k && digit[i] == top) {
      digit[i] = 0;
      add_shifted(wrap_delta, i);
      ++i;
    }
    if (i == k) break;
    const Elem nw = digit[i] + 1;
    add_shifted(F.sub(nw, digit[i]), i);
    digit[i] = nw;
    emit(idx);
  }
}

}  // namespace ffmt::kernel
