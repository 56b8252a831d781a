#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"

namespace ffmt {

/// Polynomial over F_q in canonical form: little-endian coefficients with no
/// trailing zeros. The zero polynomial has no degree (std::nullopt).
class Poly {
 public:
  Poly() = default;

  Poly(FieldPtr field, std::vector<Elem> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    for (auto c : c_)
      if (c >= field_->q()) fail(ErrorCode::CoefficientOutOfRange, "coefficient " + std::to_string(c) + " >= q");
    trim();
  }

  static Poly zero(FieldPtr f) { return Poly(std::move(f), {}); }
  static Poly one(FieldPtr f) { return Poly(std::move(f), {1}); }
  static Poly constant(FieldPtr f, Elem c) { return Poly(std::move(f), {c}); }
  static Poly monomial(FieldPtr f, Elem c, std::size_t k) {
    std::vector<Elem> v(k + 1, 0);
    v[k] = c;
    return Poly(std::move(f), std::move(v));
  }
  static Poly T(FieldPtr f) { return monomial(std::move(f), 1, 1); }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<Elem>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  std::optional<std::size_t> degree() const noexcept {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
  }
  /// Degree of a polynomial known to be nonzero.
  std::size_t deg() const {
    if (c_.empty()) fail(ErrorCode::InvalidArgument, "degree of the zero polynomial");
    return c_.size() - 1;
  }
  Elem leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
  Elem coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.c_ == b.c_ && (a.field_ == b.field_ || (a.field_ && b.field_ && *a.field_ == *b.field_));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check_same(a, b);
    const Field& F = *a.field_;
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(r), Trusted{});
  }

  friend Poly operator-(const Poly& a) {
    std::vector<Elem> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.field_->neg(a.c_[i]);
    return Poly(a.field_, std::move(r), Trusted{});
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return zero(a.field_);
    const Field& F = *a.field_;
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return Poly(a.field_, std::move(r), Trusted{});
  }

  Poly scaled(Elem s) const {
    std::vector<Elem> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->mul(c_[i], s);
    return Poly(field_, std::move(r), Trusted{});
  }

  /// Divides by the leading coefficient (zero stays zero).
  Poly monic() const { return is_zero() ? *this : scaled(field_->inv(leading())); }

  Poly shifted(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<Elem> r(k, 0);
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(field_, std::move(r), Trusted{});
  }

  static void check_same(const Poly& a, const Poly& b) {
    if (!a.field_ || !b.field_) fail(ErrorCode::FieldMismatch, "polynomial without a field");
    if (a.field_ != b.field_ && !(*a.field_ == *b.field_)) fail(ErrorCode::FieldMismatch, "polynomials over different fields");
  }

 private:
  struct Trusted {};
  Poly(FieldPtr field, std::vector<Elem> coeffs, Trusted) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  FieldPtr field_;
  std::vector<Elem> c_;
};

/// Quotient and remainder with deg(remainder) < deg(divisor).
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
  Poly::check_same(a, b);
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "division by the zero polynomial");
  const Field& F = *a.field();
  std::vector<Elem> r = a.coeffs();
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  if (r.size() <= db) return {Poly::zero(a.field()), a};
  std::vector<Elem> quo(r.size() - db, 0);
  const Elem lead_inv = F.inv(d.back());
  for (std::size_t k = r.size(); k-- > db;) {
    const Elem c = F.mul(r[k], lead_inv);
    if (c == 0) continue;
    const std::size_t shift = k - db;
    quo[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) r[shift + i] = F.sub(r[shift + i], F.mul(c, d[i]));
  }
  r.resize(db);
  return {Poly(a.field(), std::move(quo)), Poly(a.field(), std::move(r))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }
inline Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }

inline bool divides(const Poly& d, const Poly& f) { return (f % d).is_zero(); }

/// Monic greatest common divisor; gcd(0,0) = 0.
inline Poly gcd(Poly a, Poly b) {
  Poly::check_same(a, b);
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Monic least common multiple.
inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) fail(ErrorCode::DivisionByZero, "lcm with the zero polynomial");
  return ((a * b) / gcd(a, b)).monic();
}

/// Inverse of a modulo m, for gcd(a, m) = 1.
inline Poly invmod(const Poly& a, const Poly& m) {
  Poly::check_same(a, m);
  if (m.is_zero()) fail(ErrorCode::DivisionByZero, "zero modulus");
  // Extended Euclid tracking the coefficient of a.
  Poly r0 = m, r1 = a % m;
  Poly s0 = Poly::zero(a.field()), s1 = Poly::one(a.field());
  while (!r1.is_zero()) {
    auto [quo, rem] = divrem(r0, r1);
    Poly s2 = s0 - quo * s1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.degree() != std::optional<std::size_t>(0)) fail(ErrorCode::NotCoprime, "not invertible modulo m");
  return (s0.scaled(a.field()->inv(r0.leading()))) % m;
}

/// base^exp mod m by square and multiply.
inline Poly powmod(const Poly& base, std::uint64_t exp, const Poly& m) {
  Poly::check_same(base, m);
  if (m.is_zero()) fail(ErrorCode::DivisionByZero, "zero modulus");
  Poly result = Poly::one(base.field()) % m;
  Poly b = base % m;
  while (exp) {
    if (exp & 1) result = (result * b) % m;
    b = (b * b) % m;
    exp >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Dense addressing of monic polynomials.

struct MonicIndex {
  std::size_t degree = 0;
  std::uint64_t index = 0;
  friend bool operator==(const MonicIndex&, const MonicIndex&) = default;
  friend auto operator<=>(const MonicIndex& a, const MonicIndex& b) {
    if (a.degree != b.degree) return a.degree <=> b.degree;
    return a.index <=> b.index;
  }
};

/// q^n as a 64-bit integer; throws BudgetExceeded when it does not fit.
inline std::uint64_t checked_pow(std::uint64_t q, std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (r > UINT64_MAX / q) fail(ErrorCode::BudgetExceeded, "q^n overflows 64 bits");
    r *= q;
  }
  return r;
}

inline MonicIndex monic_encode(const Poly& f) {
  if (!f.is_monic()) fail(ErrorCode::NotMonic, "monic_encode needs a monic polynomial");
  const std::uint64_t q = f.field()->q();
  const std::size_t n = f.deg();
  checked_pow(q, n);
  std::uint64_t idx = 0;
  for (std::size_t i = n; i-- > 0;) idx = idx * q + f.coeffs()[i];
  return {n, idx};
}

inline Poly monic_decode(const FieldPtr& field, MonicIndex m) {
  const std::uint64_t q = field->q();
  if (m.index >= checked_pow(q, m.degree)) fail(ErrorCode::InvalidArgument, "monic index out of range");
  std::vector<Elem> c(m.degree + 1);
  std::uint64_t idx = m.index;
  for (std::size_t i = 0; i < m.degree; ++i) {
    c[i] = static_cast<Elem>(idx % q);
    idx /= q;
  }
  c[m.degree] = 1;
  return Poly(field, std::move(c));
}

/// The q^degree monic polynomials of a given degree in monic-index order.
class MonicRange {
 public:
  MonicRange(FieldPtr field, std::size_t degree)
      : field_(std::move(field)), degree_(degree), count_(checked_pow(field_->q(), degree)) {}

  class iterator {
   public:
    using value_type = Poly;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(const MonicRange* r, std::uint64_t i) : range_(r), i_(i) {}
    Poly operator*() const { return monic_decode(range_->field_, {range_->degree_, i_}); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++i_;
      return t;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    const MonicRange* range_ = nullptr;
    std::uint64_t i_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }
  std::uint64_t size() const noexcept { return count_; }

 private:
  FieldPtr field_;
  std::size_t degree_;
  std::uint64_t count_;
};

inline MonicRange enumerate_monics(const FieldPtr& field, std::size_t degree) { return {field, degree}; }

// ---------------------------------------------------------------------------
// Text form. Prime fields: "c*T^k + T^k + c + T"; any field: "[c0,c1,...]".

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view s, const FieldPtr& f) : s_(s), f_(f) {}

  Poly parse() {
    skip_ws();
    if (peek() == '[') return parse_list();
    if (!f_->is_prime_field()) fail(ErrorCode::SyntaxError, "extension-field polynomials use the list form [c0,c1,...]");
    std::vector<Elem> acc;
    bool first = true;
    while (true) {
      skip_ws();
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip_ws();
      } else if (!first) {
        break;
      }
      auto [c, k] = parse_term();
      if (negative) c = f_->neg(c);
      if (acc.size() <= k) acc.resize(k + 1, 0);
      acc[k] = f_->add(acc[k], c);
      first = false;
      skip_ws();
      if (pos_ >= s_.size()) break;
    }
    skip_ws();
    if (pos_ != s_.size()) fail(ErrorCode::SyntaxError, "unexpected '" + std::string(1, s_[pos_]) + "' in '" + std::string(s_) + "'");
    return Poly(f_, std::move(acc));
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::uint64_t parse_uint() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(ErrorCode::SyntaxError, "expected a number in '" + std::string(s_) + "'");
    std::uint64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
      if (v > (1ull << 40)) fail(ErrorCode::SyntaxError, "number too large");
    }
    return v;
  }

  Elem checked_coeff(std::uint64_t v) const {
    if (v >= f_->q()) fail(ErrorCode::CoefficientOutOfRange, std::to_string(v) + " >= q = " + std::to_string(f_->q()));
    return static_cast<Elem>(v);
  }

  std::pair<Elem, std::size_t> parse_term() {
    skip_ws();
    Elem c = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = checked_coeff(parse_uint());
      skip_ws();
      if (peek() != '*') return {c, 0};
      ++pos_;
      skip_ws();
    }
    if (peek() != 'T') fail(ErrorCode::SyntaxError, "expected 'T' in '" + std::string(s_) + "'");
    ++pos_;
    skip_ws();
    std::size_t k = 1;
    if (peek() == '^') {
      ++pos_;
      k = static_cast<std::size_t>(parse_uint());
      if (k > 4096) fail(ErrorCode::SyntaxError, "exponent too large");
    }
    return {c, k};
  }

  Poly parse_list() {
    ++pos_;
    std::vector<Elem> c;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        c.push_back(checked_coeff(parse_uint()));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        fail(ErrorCode::SyntaxError, "malformed list form '" + std::string(s_) + "'");
      }
    }
    skip_ws();
    if (pos_ != s_.size()) fail(ErrorCode::SyntaxError, "trailing characters after list form");
    return Poly(f_, std::move(c));
  }

  std::string_view s_;
  const FieldPtr& f_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly poly_parse(std::string_view text, const FieldPtr& field) { return detail::PolyParser(text, field).parse(); }

/// Canonical text: descending powers for prime fields, list form otherwise.
inline std::string poly_format(const Poly& f) {
  if (!f.field()->is_prime_field()) {
    if (f.is_zero()) return "[0]";
    std::string s = "[";
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) s += (i ? "," : "") + std::to_string(f.coeffs()[i]);
    return s + "]";
  }
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t k = f.coeffs().size(); k-- > 0;) {
    const Elem c = f.coeffs()[k];
    if (c == 0) continue;
    if (!s.empty()) s += "+";
    if (k == 0) {
      s += std::to_string(c);
      continue;
    }
    if (c != 1) s += std::to_string(c) + "*";
    s += "T";
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}

struct PolyHash {
  std::size_t operator()(const Poly& f) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto c : f.coeffs()) h = (h ^ c) * 1099511628211ull;
    return h;
  }
};

}  // namespace ffmt
