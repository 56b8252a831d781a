#include <gtest/gtest.h>

#include <random>
#include <set>

#include <ffmt/field.hpp>
#include <ffmt/poly.hpp>

#include "oracle.hpp"

using namespace ffmt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

Poly P(const char* s, const FieldPtr& f) { return poly_parse(s, f); }

}  // namespace

TEST(Field, PrimeFieldCreation) {
  const auto f = Field::create(2);
  EXPECT_EQ(f->q(), 2u);
  EXPECT_TRUE(f->is_prime_field());
  EXPECT_EQ(f->add(1, 1), 0u);
}

TEST(Field, DefaultReductionIsLeastIrreducible) {
  const auto f4 = Field::create(2, 2);
  EXPECT_EQ(f4->reduction(), (std::vector<std::uint32_t>{1, 1, 1}));
  // The least monic irreducible cubic over F_2 by index is T^3+T+1.
  const auto f8 = Field::create(2, 3);
  EXPECT_EQ(f8->reduction(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
  // Over F_3 the least irreducible quadratic is T^2+1.
  const auto f9 = Field::create(3, 2);
  EXPECT_EQ(f9->reduction(), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(Field, Errors) {
  EXPECT_EQ(code_of([] { Field::create(4); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { Field::create(2, 17); }), ErrorCode::FieldTooLarge);
  EXPECT_EQ(code_of([] { Field::create(2, 2, std::vector<std::uint32_t>{1, 0, 1}); }), ErrorCode::NotIrreducible);
  EXPECT_EQ(code_of([] { Field::create_order(6); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { Field::create(2)->inv(0); }), ErrorCode::DivisionByZero);
}

TEST(Field, ExtensionMatchesPolynomialArithmetic) {
  for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {5, 2}}) {
    const auto f = Field::create(p, e);
    oracle::P red(f->reduction().begin(), f->reduction().end());
    auto as_poly = [&](Elem a) {
      oracle::P v(e, 0);
      for (std::uint32_t i = 0; i < e; ++i) {
        v[i] = static_cast<int>(a % p);
        a /= p;
      }
      oracle::trim(v);
      return v;
    };
    for (Elem a = 0; a < f->q(); ++a)
      for (Elem b = 0; b < f->q(); ++b) {
        EXPECT_EQ(as_poly(f->mul(a, b)), oracle::rem(oracle::mul(as_poly(a), as_poly(b), p), red, p));
        EXPECT_EQ(as_poly(f->add(a, b)), oracle::add(as_poly(a), as_poly(b), p));
      }
  }
}

TEST(Field, AxiomsSpotCheck) {
  std::mt19937 rng(7);
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u, 16u, 25u, 27u, 4096u, 8192u, 65536u}) {
    const auto f = Field::create_order(q);
    std::uniform_int_distribution<Elem> d(0, q - 1);
    for (int k = 0; k < 2000; ++k) {
      const Elem a = d(rng), b = d(rng), c = d(rng);
      EXPECT_EQ(f->mul(a, f->mul(b, c)), f->mul(f->mul(a, b), c));
      EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
      EXPECT_EQ(f->add(a, f->neg(a)), 0u);
      if (a != 0) {
        EXPECT_EQ(f->mul(a, f->inv(a)), 1u);
      }
    }
  }
}

TEST(Poly, ResidueClassProducts) {
  const auto f = Field::create(2);
  EXPECT_EQ(P("T^3+T+1", f) * P("T^3+T^2+T+1", f), P("T^6+T^5+T^3+1", f));
  EXPECT_EQ(P("T^3+1", f) * P("T^3+T+1", f), P("T^6+T^4+T+1", f));
  const Poly a = P("T^5+T^2+1", f);
  EXPECT_EQ(a * Poly::one(f), a);
}

TEST(Poly, ZeroHasNoDegree) {
  const auto f = Field::create(3);
  EXPECT_FALSE(Poly::zero(f).degree().has_value());
  EXPECT_EQ(code_of([&] { (void)Poly::zero(f).deg(); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(*P("2*T^2+1", f).degree(), 2u);
}

TEST(Poly, DivremGcdLcm) {
  const auto f = Field::create(3);
  const Poly a = P("T^4+2*T^3+T+1", f), b = P("2*T^2+T+2", f);
  const auto [quo, r] = divrem(a, b);
  EXPECT_EQ(quo * b + r, a);
  EXPECT_LT(r.degree().value_or(0), 2u);
  const Poly g = gcd(a * b, b * P("T+1", f));
  EXPECT_TRUE(g.is_monic());
  EXPECT_TRUE(divides(g, a * b));
  EXPECT_TRUE(divides(g, b * P("T+1", f)));
  const Poly x = P("T^3+T+2", f), y = P("T^2+2", f);
  EXPECT_EQ(lcm(x, y) * gcd(x, y), (x * y).monic());
  EXPECT_EQ(code_of([&] { divrem(a, Poly::zero(f)); }), ErrorCode::DivisionByZero);
  EXPECT_EQ(code_of([&] { (void)(a + P("T", Field::create(2))); }), ErrorCode::FieldMismatch);
}

TEST(Poly, InvmodAndPowmod) {
  const auto f = Field::create(2);
  const Poly m = P("T^2+T+1", f);
  EXPECT_EQ(powmod(P("T", f), 2, m), P("T+1", f));
  EXPECT_EQ(powmod(P("T+1", f), 2, m), P("T", f));
  EXPECT_EQ((invmod(P("T", f), m) * P("T", f)) % m, Poly::one(f));
  EXPECT_EQ(code_of([&] { invmod(P("T", f), P("T^2", f)); }), ErrorCode::NotCoprime);
}

TEST(Poly, RandomMultiplicationProperties) {
  std::mt19937 rng(11);
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const auto f = Field::create_order(q);
    std::uniform_int_distribution<Elem> d(0, q - 1);
    std::uniform_int_distribution<int> len(0, 7);
    auto rnd = [&] {
      std::vector<Elem> c(len(rng));
      for (auto& x : c) x = d(rng);
      return Poly(f, c);
    };
    for (int k = 0; k < 10000; ++k) {
      const Poly a = rnd(), b = rnd(), c = rnd();
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ((a * b) * c, a * (b * c));
    }
  }
}

TEST(Poly, MonicDegreeAdditivity) {
  const auto f = Field::create(3);
  for (std::size_t d1 = 0; d1 <= 3; ++d1)
    for (const Poly& a : enumerate_monics(f, d1))
      for (const Poly& b : enumerate_monics(f, 2)) {
        const Poly c = a * b;
        EXPECT_TRUE(c.is_monic());
        EXPECT_EQ(c.deg(), d1 + 2);
      }
}

TEST(Parse, Examples) {
  const auto f2 = Field::create(2);
  EXPECT_EQ(P("T^3+T+1", f2).coeffs(), (std::vector<Elem>{1, 1, 0, 1}));
  EXPECT_EQ(P("[1,1,0,1]", f2), P("T^3+T+1", f2));
  EXPECT_EQ(code_of([] { poly_parse("T^2+5", Field::create(3)); }), ErrorCode::CoefficientOutOfRange);
  EXPECT_EQ(code_of([&] { poly_parse("T^^2", f2); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([&] { poly_parse("", f2); }), ErrorCode::SyntaxError);
  const auto f3 = Field::create(3);
  EXPECT_EQ(P("2*T^2 + 1*T^1 + 2", f3), P("[2,1,2]", f3));
  EXPECT_EQ(P("T - 1", f3), P("T+2", f3));
}

TEST(Parse, FormatRoundTrip) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 9u}) {
    const auto f = Field::create_order(q);
    for (std::size_t d = 0; d <= 3; ++d)
      for (const Poly& g : enumerate_monics(f, d)) {
        EXPECT_EQ(poly_parse(poly_format(g), f), g);
        const Poly h = g.scaled(q - 1);
        EXPECT_EQ(poly_parse(poly_format(h), f), h);
      }
    EXPECT_EQ(poly_format(Poly::zero(f)), f->is_prime_field() ? "0" : "[0]");
    EXPECT_EQ(poly_parse(poly_format(Poly::zero(f)), f), Poly::zero(f));
  }
  const auto f2 = Field::create(2);
  EXPECT_EQ(poly_format(P("1+T+T^3", f2)), "T^3+T+1");
  const auto f4 = Field::create(2, 2);
  EXPECT_EQ(poly_format(P("[1,2,0,3]", f4)), "[1,2,0,3]");
}

TEST(MonicIndex, Examples) {
  const auto f2 = Field::create(2), f3 = Field::create(3);
  EXPECT_EQ(monic_encode(P("T^2", f2)), (MonicIndex{2, 0}));
  EXPECT_EQ(monic_encode(P("T^2+T+1", f2)), (MonicIndex{2, 3}));
  EXPECT_EQ(monic_encode(P("T+2", f3)), (MonicIndex{1, 2}));
  EXPECT_EQ(code_of([&] { monic_encode(P("2*T+1", f3)); }), ErrorCode::NotMonic);
}

TEST(MonicIndex, ExhaustiveBijection) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const auto f = Field::create_order(q);
    for (std::size_t n = 0; n <= 6; ++n) {
      std::set<std::vector<Elem>> seen;
      std::uint64_t expect = 0;
      for (const Poly& g : enumerate_monics(f, n)) {
        const auto mi = monic_encode(g);
        ASSERT_EQ(mi.degree, n);
        ASSERT_EQ(mi.index, expect++);
        ASSERT_EQ(monic_decode(f, mi), g);
        seen.insert(g.coeffs());
      }
      EXPECT_EQ(seen.size(), oracle::power(q, n));
    }
  }
}

TEST(Enumerate, Examples) {
  const auto f2 = Field::create(2);
  std::vector<Poly> d0(enumerate_monics(f2, 0).begin(), enumerate_monics(f2, 0).end());
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0[0], Poly::one(f2));
  std::vector<Poly> d1;
  for (const Poly& g : enumerate_monics(f2, 1)) d1.push_back(g);
  EXPECT_EQ(d1, (std::vector<Poly>{P("T", f2), P("T+1", f2)}));
  EXPECT_EQ(enumerate_monics(Field::create(3), 2).size(), 9u);
}
