#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <ffmt/sieve.hpp>

#include "oracle.hpp"

using namespace ffmt;

namespace {

Poly P(const char* s, const FieldPtr& f) { return poly_parse(s, f); }

oracle::P to_oracle(const Poly& f) { return oracle::P(f.coeffs().begin(), f.coeffs().end()); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Spf, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 2);
  EXPECT_EQ(t.spf(monic_encode(P("T^2+T", f))), monic_encode(P("T", f)));
  EXPECT_EQ(t.spf(monic_encode(P("T^2+T+1", f))), monic_encode(P("T^2+T+1", f)));
  EXPECT_EQ(t.spf(monic_encode(P("T^2+1", f))), monic_encode(P("T+1", f)));
  const auto f3 = Field::create(3);
  const auto t3 = build_spf(f3, 1);
  for (std::uint64_t i = 0; i < 3; ++i) EXPECT_TRUE(t3.is_prime(1, i));
}

TEST(Spf, MatchesTrialDivisionExhaustively) {
  for (auto [p, n] : std::vector<std::pair<int, std::size_t>>{{2, 10}, {3, 6}, {5, 4}}) {
    const auto f = Field::create(p);
    const auto t = build_spf(f, n);
    for (std::size_t d = 1; d <= n; ++d)
      for (std::uint64_t i = 0; i < t.count(d); ++i) {
        const auto s = oracle::smallest_prime_factor(oracle::monic(d, i, p), p);
        ASSERT_EQ(t.spf({d, i}), (MonicIndex{s.first, s.second})) << "p=" << p << " d=" << d << " i=" << i;
      }
  }
}

TEST(Spf, ExtensionFieldAgainstLibraryTrialDivision) {
  const auto f = Field::create(2, 2);
  const auto t = build_spf(f, 4);
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::uint64_t i = 0; i < t.count(d); ++i) ASSERT_EQ(t.spf({d, i}), SPFTable::trial_division_spf(monic_decode(f, {d, i})));
}

TEST(Spf, BudgetAndRange) {
  const auto f = Field::create(2);
  EXPECT_EQ(code_of([&] { build_spf(f, 12, 1000); }), ErrorCode::BudgetExceeded);
  const auto t = build_spf(f, 4);
  EXPECT_EQ(code_of([&] { factorize(P("T^5+1", f), t); }), ErrorCode::DegreeExceedsTable);
}

TEST(Spf, SaveLoadRoundTrip) {
  const auto f = Field::create(3, 2);
  const auto t = build_spf(f, 3);
  const auto path = (std::filesystem::temp_directory_path() / "ffmt_test_sieve.bin").string();
  t.save(path);
  const auto u = SPFTable::load(path);
  EXPECT_EQ(u.field()->q(), 9u);
  EXPECT_EQ(u.field()->reduction(), f->reduction());
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::uint64_t i = 0; i < t.count(d); ++i) ASSERT_EQ(t.spf({d, i}), u.spf({d, i}));

  // Header layout: magic, version, p, e, reduction index, max_deg, then entries.
  std::ifstream in(path, std::ios::binary);
  char head[4 + 4 + 32 + 8];
  in.read(head, sizeof head);
  EXPECT_EQ(std::string(head, 4), "FFMT");
  std::uint64_t first;
  std::memcpy(&first, head + 40, 8);
  EXPECT_EQ(first >> 48, 1u);  // spf of T is T
  in.close();

  {
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.write("XXXX", 4);
  }
  EXPECT_EQ(code_of([&] { SPFTable::load(path); }), ErrorCode::BadFile);
  std::filesystem::remove(path);
}

TEST(Spf, CorruptEntryDetected) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 6);
  const auto path = (std::filesystem::temp_directory_path() / "ffmt_test_sieve_corrupt.bin").string();
  t.save(path);
  // Swap every entry between the two linear primes: structurally valid, always wrong.
  {
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(4 + 4 + 32);
    for (std::size_t d = 1; d <= 6; ++d)
      for (std::uint64_t i = 0; i < t.count(d); ++i) {
        const std::uint64_t wrong = (std::uint64_t{1} << 48) | (t.spf({d, i}) == MonicIndex{1, 0} ? 1u : 0u);
        io.write(reinterpret_cast<const char*>(&wrong), 8);
      }
  }
  EXPECT_EQ(code_of([&] { SPFTable::load(path); }), ErrorCode::BadFile);
  std::filesystem::remove(path);
}

TEST(Factorize, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 8);
  const auto fac = factorize(P("T^6+T^5+T^3+1", f), t);
  ASSERT_EQ(fac.size(), 2u);
  EXPECT_EQ(fac[0].prime, P("T+1", f));
  EXPECT_EQ(fac[0].exponent, 3u);
  EXPECT_EQ(fac[1].prime, P("T^3+T+1", f));
  EXPECT_EQ(fac[1].exponent, 1u);
  const auto prime = factorize(P("T^3+T^2+1", f), t);
  ASSERT_EQ(prime.size(), 1u);
  EXPECT_EQ(prime[0].exponent, 1u);
  EXPECT_TRUE(factorize(Poly::one(f), t).empty());
}

TEST(Factorize, RecomposesExhaustively) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 12);
  for (std::size_t d = 0; d <= 12; ++d)
    for (std::uint64_t i = 0; i < t.count(d); ++i) {
      const Poly g = monic_decode(f, {d, i});
      Poly acc = Poly::one(f);
      std::set<MonicIndex> primes;
      for (const auto& pp : factorize(g, t)) {
        primes.insert(monic_encode(pp.prime));
        for (unsigned e = 0; e < pp.exponent; ++e) acc = acc * pp.prime;
      }
      ASSERT_EQ(acc, g);
      ASSERT_EQ(primes.size(), factorize(g, t).size());
    }
}

TEST(Factorize, AgainstOracle) {
  const auto f = Field::create(3);
  const auto t = build_spf(f, 6);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    const std::size_t d = 1 + rng() % 6;
    const Poly g = monic_decode(f, {d, rng() % t.count(d)});
    std::map<std::pair<std::size_t, std::uint64_t>, unsigned> got;
    for (const auto& pp : factorize(g, t)) {
      const auto mi = monic_encode(pp.prime);
      got[{mi.degree, mi.index}] = pp.exponent;
    }
    EXPECT_EQ(got, oracle::factor(to_oracle(g), 3));
  }
}

TEST(FactorizationType, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 8);
  const auto m = factorization_type(P("T^6+T^5+T^3+1", f), t);
  EXPECT_EQ(m, (FactorizationType{{0, 1, 0, 1}}));
  EXPECT_EQ(factorization_type(P("T^2+T", f), t)[1], 2u);
  EXPECT_EQ(factorization_type(P("T^5+T^2+1", f), t)[5], 1u);
  // sum i*m_i <= deg F with equality iff squarefree
  for (std::size_t d = 1; d <= 8; ++d)
    for (const Poly& g : enumerate_monics(f, d)) {
      const auto ty = factorization_type(g, t);
      EXPECT_LE(ty.weight(), d);
      EXPECT_EQ(ty.weight() == d, mobius(g, t) != 0);
    }
}

TEST(Pi, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 6);
  EXPECT_EQ(pi(2, t), 1u);
  EXPECT_EQ(pi(6, t), 9u);
  EXPECT_EQ(pi(1, t), 2u);
  EXPECT_EQ(pi_formula(2, 6), 9);
  EXPECT_EQ(pi_formula(2, 2), 1);
  EXPECT_EQ(code_of([&] { pi(7, t); }), ErrorCode::DegreeExceedsTable);
}

TEST(Pi, FormulaAgreesWithScanAndOracle) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto f = Field::create_order(q);
    const std::size_t n = q <= 3 ? 8 : 4;
    const auto t = build_spf(f, n);
    for (std::size_t d = 1; d <= n; ++d) EXPECT_EQ(BigInt(static_cast<unsigned long>(pi(d, t))), pi_formula(q, d)) << q << " " << d;
  }
  for (std::size_t d = 1; d <= 5; ++d) EXPECT_EQ(BigInt(static_cast<unsigned long>(oracle::prime_count(d, 3))), pi_formula(3, d));
}

TEST(Pi, SandwichBySquaring) {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
    for (std::size_t n = 1; n <= 40; ++n) {
      const BigInt pn = pi_formula(q, n), qn = ipow(q, n), nn(static_cast<unsigned long>(n));
      EXPECT_LE(nn * pn, qn);
      EXPECT_LE(signed_square(qn - nn * pn), 4 * qn);
    }
}

TEST(PiAp, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 8);
  EXPECT_EQ(pi_ap(3, P("1", f), P("T", f), t), 2u);
  EXPECT_EQ(pi_ap(1, P("1", f), P("T", f), t), 1u);
  EXPECT_EQ(code_of([&] { pi_ap(3, P("T", f), P("T^2", f), t); }), ErrorCode::NotCoprime);
}

TEST(PiAp, PartitionOverInvertibleResidues) {
  const auto f = Field::create(3);
  const auto t = build_spf(f, 5);
  for (const char* ms : {"T", "T^2+1", "T^2+T", "T^3+2*T+1"}) {
    const Poly m = P(ms, f);
    for (std::size_t n = 1; n <= 5; ++n) {
      std::uint64_t total = 0;
      const std::size_t dm = m.deg();
      for (std::uint64_t code = 0; code < t.count(dm); ++code) {
        std::vector<Elem> c(dm);
        std::uint64_t x = code;
        for (auto& e : c) {
          e = static_cast<Elem>(x % 3);
          x /= 3;
        }
        const Poly a(f, c);
        if (a.is_zero() || gcd(a, m) != Poly::one(f)) continue;
        total += pi_ap(n, a, m, t);
      }
      unsigned dividing = 0;
      for (const auto& pp : factorize(m, t)) dividing += pp.prime.deg() == n;
      EXPECT_EQ(total + dividing, pi(n, t)) << ms << " n=" << n;
    }
  }
}

TEST(Multiplicative, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 8);
  EXPECT_EQ(phi(P("T^2", f), t), 2);
  EXPECT_EQ(mobius(P("T^2+1", f), t), 0);
  EXPECT_EQ(prime_divisors_of_degree(P("T^2+T", f), 1, t), 2u);
  EXPECT_EQ(smallest_prime_degree(P("T^4+T^3+T^2+T+1", f), t), 4u);
  EXPECT_FALSE(smallest_prime_degree(Poly::one(f), t).has_value());
  EXPECT_EQ(mobius(Poly::one(f), t), 1);
  EXPECT_EQ(phi(Poly::one(f), t), 1);
}

TEST(Multiplicative, PhiAgainstDirectEnumeration) {
  for (int p : {2, 3}) {
    const auto f = Field::create(p);
    const std::size_t n = p == 2 ? 8 : 5;
    const auto t = build_spf(f, n);
    for (std::size_t d = 0; d <= n; ++d)
      for (const Poly& g : enumerate_monics(f, d))
        ASSERT_EQ(phi(g, t), BigInt(static_cast<unsigned long>(oracle::phi(to_oracle(g), p)))) << poly_format(g);
  }
}

TEST(Multiplicative, PhiDivisorSumIsNorm) {
  std::mt19937_64 rng(5);
  for (std::uint32_t q : {2u, 3u, 4u}) {
    const auto f = Field::create_order(q);
    const std::size_t n = q == 2 ? 12 : 6;
    const auto t = build_spf(f, n);
    for (int k = 0; k < 1000; ++k) {
      const std::size_t d = rng() % (n + 1);
      const Poly g = monic_decode(f, {d, rng() % t.count(d)});
      // all divisors from the factorization
      std::vector<Poly> divs{Poly::one(f)};
      for (const auto& pp : factorize(g, t)) {
        const std::size_t base = divs.size();
        Poly pw = Poly::one(f);
        for (unsigned e = 1; e <= pp.exponent; ++e) {
          pw = pw * pp.prime;
          for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pw);
        }
      }
      BigInt s = 0;
      for (const auto& dv : divs) s += phi(dv, t);
      ASSERT_EQ(s, ipow(q, d)) << poly_format(g);
    }
  }
}

TEST(Multiplicative, MobiusAndPhiMultiplicative) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 10);
  for (std::size_t d1 = 1; d1 <= 4; ++d1)
    for (const Poly& a : enumerate_monics(f, d1))
      for (const Poly& b : enumerate_monics(f, 5)) {
        if (gcd(a, b) != Poly::one(f)) continue;
        ASSERT_EQ(mobius(a * b, t), mobius(a, t) * mobius(b, t));
        ASSERT_EQ(phi(a * b, t), phi(a, t) * phi(b, t));
      }
}

TEST(Squarefree, Counts) {
  const auto f2 = Field::create(2), f3 = Field::create(3);
  const auto t2 = build_spf(f2, 10), t3 = build_spf(f3, 5);
  EXPECT_EQ(squarefree_count(2, t2), 2u);
  EXPECT_EQ(squarefree_count(2, t3), 6u);
  EXPECT_EQ(squarefree_count(0, t2), 1u);
  for (std::size_t i = 2; i <= 10; ++i) EXPECT_EQ(squarefree_count(i, t2), (1u << i) - (1u << (i - 1)));
  EXPECT_EQ(squarefree_count(1, t3), 3u);
}

TEST(GammaRoots, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 6);
  const Poly m = P("T^2+T+1", f);
  EXPECT_EQ(gamma_roots(1, 2, P("T+1", f), m, t), 1u);
  EXPECT_EQ(gamma_roots(1, 2, P("T", f), m, t), 1u);
  for (std::size_t n = 1; n <= 6; ++n)
    for (const char* e : {"1", "T", "T+1"}) EXPECT_EQ(gamma_roots(n, 1, P(e, f), m, t), pi_ap(n, P(e, f), m, t));
}
