#pragma once

// Exact integer and rational arithmetic (GMP).

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ffmt {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt ipow(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// q^e as a rational; negative exponents give 1/q^|e|.
inline Rational rpow(std::uint64_t base, long exp) {
  if (exp >= 0) return Rational(ipow(base, static_cast<std::uint64_t>(exp)));
  return ratio(BigInt(1), ipow(base, static_cast<std::uint64_t>(-exp)));
}

inline BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt binomial(const BigInt& n, unsigned k) {
  if (n < 0) return 0;
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

inline std::string str(const BigInt& v) { return v.get_str(); }
inline std::string str(Rational v) {
  v.canonicalize();
  return v.get_str();
}

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) fail(ErrorCode::SyntaxError, "not a rational: '" + s + "'");
  if (r.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::uint64_t to_u64(const BigInt& v) {
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

/// Integer sign-preserving square x·|x|, used to compare against square roots exactly.
inline BigInt signed_square(const BigInt& x) { return x * abs(x); }

}  // namespace ffmt
