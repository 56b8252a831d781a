#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <set>

#include <ffmt/mtable.hpp>

#include "oracle.hpp"

using namespace ffmt;

namespace {

Poly P(const char* s, const FieldPtr& f) { return poly_parse(s, f); }

oracle::P to_oracle(const Poly& g) {
  oracle::P v;
  for (auto c : g.coeffs()) v.push_back(static_cast<int>(c));
  oracle::trim(v);
  return v;
}

// Products collected into a set of coefficient vectors.
std::uint64_t product_oracle(const std::vector<Poly>& a, const std::vector<Poly>& b, int p) {
  std::set<oracle::P> seen;
  for (const Poly& x : a)
    for (const Poly& y : b) seen.insert(oracle::mul(to_oracle(x), to_oracle(y), p));
  return seen.size();
}

std::uint64_t h_oracle(std::size_t n, std::size_t b, int p) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < oracle::power(p, n); ++i) {
    const auto f = oracle::monic(n, i, p);
    bool hit = false;
    for (const auto& d : oracle::divisors(f, p)) hit = hit || d.size() == b + 1;
    c += hit;
  }
  return c;
}

}  // namespace

TEST(DivisorStats, Examples) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 6);
  const auto s = divisor_stats(P("T^3+T", f), t);
  EXPECT_EQ(s.tau, 6);
  EXPECT_EQ(s.degrees, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(s.tau_d, (std::vector<BigInt>{1, 2, 2, 1}));
  EXPECT_EQ(s.W, 10);
  const auto pr = divisor_stats(P("T^3+T+1", f), t);
  EXPECT_EQ(pr.tau, 2);
  EXPECT_EQ(pr.degrees, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(pr.W, 2);
  const auto one = divisor_stats(Poly::one(f), t);
  EXPECT_EQ(one.tau, 1);
  EXPECT_EQ(one.L(), 1u);
  EXPECT_EQ(one.W, 1);
}

TEST(DivisorStats, AgainstDivisorListsAndCauchySchwarz) {
  for (int p : {2, 3}) {
    const auto f = Field::create(p);
    const std::size_t nmax = p == 2 ? 7 : 4;
    const auto t = build_spf(f, nmax);
    for (std::size_t n = 0; n <= nmax; ++n)
      for (const Poly& h : enumerate_monics(f, n)) {
        const auto s = divisor_stats(h, t);
        const auto ds = oracle::divisors(to_oracle(h), p);
        std::vector<BigInt> tau_d(n + 1, 0);
        for (const auto& d : ds) tau_d[d.size() - 1] += 1;
        ASSERT_EQ(s.tau_d, tau_d);
        ASSERT_EQ(s.tau, BigInt(static_cast<unsigned long>(ds.size())));
        ASSERT_EQ(divisors(h, t).size(), ds.size());
        // tau^2 <= L * W
        ASSERT_LE(s.tau * s.tau, BigInt(static_cast<unsigned long>(s.L())) * s.W);
      }
  }
}

TEST(ProductSet, ResidueClassExample) {
  const auto f = Field::create(2);
  const auto r = product_set_count(APSpec::of(3, P("1", f), P("T", f)), APSpec::of(3, P("T+1", f), P("T^2", f)));
  EXPECT_EQ(r.count, 7u);
  EXPECT_EQ(r.pairs, 8u);
  EXPECT_EQ(h_two_ap_count(6, 3, P("1", f), P("T", f), P("T+1", f), P("T^2", f)), 7u);
}

TEST(ProductSet, SmallTableValues) {
  const auto f = Field::create(2);
  EXPECT_EQ(m_table_counts(f, 2).full, 9u);
  EXPECT_EQ(h_count(f, 4, 2), 9u);
  for (std::size_t n = 0; n <= 10; ++n) {
    EXPECT_EQ(h_count(f, n, 0), oracle::power(2, n));
    EXPECT_EQ(h_count(f, n, n), oracle::power(2, n));
  }
}

TEST(ProductSet, AgainstSetOracle) {
  for (int p : {2, 3}) {
    const auto f = Field::create(p);
    const std::size_t nmax = p == 2 ? 8 : 5;
    for (std::size_t n = 1; n <= nmax; ++n)
      for (std::size_t b = 0; b <= n; ++b) {
        const auto a = enumerate_monics(f, b), c = enumerate_monics(f, n - b);
        const std::vector<Poly> av(a.begin(), a.end()), cv(c.begin(), c.end());
        EXPECT_EQ(h_count(f, n, b), product_oracle(av, cv, p)) << p << " " << n << " " << b;
      }
  }
}

TEST(ProductSet, MarkingMatchesDivisorScan) {
  for (int p : {2, 3}) {
    const auto f = Field::create(p);
    const std::size_t nmax = p == 2 ? 12 : 7;
    const auto t = build_spf(f, nmax);
    for (std::size_t n = 1; n <= nmax; ++n)
      for (std::size_t b = 0; b <= n; ++b) ASSERT_EQ(h_count(f, n, b), h_count_direct(n, b, t)) << p << " " << n << " " << b;
  }
  EXPECT_EQ(h_oracle(6, 3, 2), h_count(Field::create(2), 6, 3));
}

TEST(ProductSet, DivisorApAgainstOracle) {
  const auto f = Field::create(2);
  EXPECT_EQ(h_divisor_ap_count(f, 4, 2, P("1", f), P("T", f)), 7u);
  for (const char* ms : {"T", "T+1", "T^2+T+1", "T^2"})
    for (std::size_t n = 2; n <= 7; ++n)
      for (std::size_t b = 1; b < n; ++b) {
        const Poly m = P(ms, f);
        for (std::uint64_t code = 0; code < oracle::power(2, m.deg()); ++code) {
          const Poly a = kernel::residue_poly(f, code, m.deg());
          const auto left = APSpec::of(b, a, m).members();
          const auto right = enumerate_monics(f, n - b);
          const std::vector<Poly> rv(right.begin(), right.end());
          EXPECT_EQ(h_divisor_ap_count(f, n, b, a, m), product_oracle(left, rv, 2));
        }
      }
}

TEST(ProductSet, TwoApSwapSymmetry) {
  const auto f = Field::create(3);
  const Poly a1 = P("T+2", f), m1 = P("T^2+1", f), a2 = P("2", f), m2 = P("T+1", f);
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t b = 0; b <= n; ++b)
      EXPECT_EQ(h_two_ap_count(n, b, a1, m1, a2, m2), h_two_ap_count(n, n - b, a2, m2, a1, m1));
}

TEST(ProductSet, ResidueClassesPartitionH) {
  for (int p : {2, 3}) {
    const auto f = Field::create(p);
    const std::size_t n = p == 2 ? 9 : 6;
    for (std::size_t dm = 1; dm <= 2; ++dm)
      for (const Poly& m : enumerate_monics(f, dm))
        for (std::size_t b = 0; b <= n; ++b) {
          std::uint64_t sum = 0;
          for (std::uint64_t code = 0; code < oracle::power(p, dm); ++code)
            sum += h_ap_count(f, n, b, kernel::residue_poly(f, code, dm), m);
          ASSERT_EQ(sum, h_count(f, n, b));
        }
  }
}

TEST(ProductSet, ApSubsetOfDivisorAp) {
  const auto f = Field::create(2);
  const Poly m = P("T^2+T+1", f);
  for (std::size_t n = 4; n <= 10; n += 2)
    for (const char* a : {"1", "T", "T+1"}) {
      const auto c = m_table_counts(f, n / 2, {std::make_pair(P(a, f), m), std::nullopt});
      EXPECT_LE(*c.ap, c.full);
      EXPECT_LE(*c.divisor_ap, c.full);
    }
}

TEST(ProductSet, ShardingAndThreadsAgree) {
  const auto f = Field::create(2);
  for (std::size_t n = 6; n <= 14; n += 4)
    for (std::size_t b : {std::size_t{1}, n / 2}) {
      const auto base = h_count(f, n, b);
      ProductOptions sharded;
      sharded.max_bits = 64;
      EXPECT_EQ(product_set_count(APSpec::all(f, b), APSpec::all(f, n - b), sharded).count, base);
      ProductOptions threaded;
      threaded.threads = 3;
      EXPECT_EQ(h_count(f, n, b, threaded), base);
    }
}

TEST(ProductSet, BudgetErrors) {
  const auto f = Field::create(2);
  ProductOptions tight;
  tight.max_pairs = 10;
  try {
    h_count(f, 8, 4, tight);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  ProductOptions small;
  small.max_bits = 64;
  try {
    product_hitset(APSpec::all(f, 4), APSpec::all(f, 4), small);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
}

TEST(HitSet, SaveLoadRoundTrip) {
  const auto f = Field::create(3);
  const HitSet h = product_hitset(APSpec::all(f, 2), APSpec::all(f, 3));
  const std::string path = ::testing::TempDir() + "ffmt_hits.bin";
  h.save(path);
  const HitSet back = HitSet::load(path);
  EXPECT_EQ(back, h);
  EXPECT_EQ(back.count(), h_count(f, 5, 2));
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  std::fputs("XXXX", fp);
  std::fclose(fp);
  EXPECT_THROW(HitSet::load(path), Error);
  std::remove(path.c_str());
}

TEST(Scaling, DeltaAndRows) {
  EXPECT_NEAR(erdos_delta(), 0.0860713320559342, 1e-13);
  const auto r = scaling_row(Field::create(2), 8, 4);
  EXPECT_EQ(r.count, h_count(Field::create(2), 8, 4));
  const double dens = static_cast<double>(r.count) / 256.0;
  EXPECT_NEAR(r.ratio_natural_log, dens * std::pow(4.0, erdos_delta()) * std::pow(1 + std::log(4.0), 1.5), 1e-12);
  EXPECT_NEAR(r.ratio_log_q, dens * std::pow(4.0, erdos_delta()) * std::pow(3.0, 1.5), 1e-12);
}
