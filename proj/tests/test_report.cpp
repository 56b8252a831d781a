#include <gtest/gtest.h>

#include <sstream>

#include <ffmt/ffmt.hpp>

using namespace ffmt;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(str(parse_rational("6/4")), "3/2");
  EXPECT_EQ(str(parse_rational("-10/5")), "-2");
  EXPECT_EQ(str(Rational(0)), "0");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Report, MakeAndCompare) {
  const auto r = make_report("x", {{"n", "4"}}, Rational(3), Relation::LessEq, Rational(16, 3));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.rhs, "16/3");
  EXPECT_TRUE(consistent(r));
  EXPECT_FALSE(make_report("y", {}, Rational(2), Relation::GreaterEq, Rational(3)).pass);
  EXPECT_TRUE(make_report("z", {}, Rational(1, 2), Relation::Equal, Rational(2, 4)).pass);
  auto bad = r;
  bad.pass = false;
  EXPECT_FALSE(consistent(bad));
  bad = r;
  bad.lhs = "6/2";
  EXPECT_FALSE(consistent(bad));
}

TEST(Report, JsonRoundTrip) {
  const auto f = Field::create(2);
  const auto t = build_spf(f, 8);
  auto rs = selberg_upper_bound_report(6, 2, t);
  for (const auto& r : psi_recursion_report(6, 2, t)) rs.push_back(r);
  const auto j = to_json(rs);
  ASSERT_EQ(j.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(report_from_json(j[i]), rs[i]);
    EXPECT_TRUE(consistent(rs[i]));
  }
  const auto text = nlohmann::json::parse(j.dump());
  EXPECT_EQ(report_from_json(text[0]), rs[0]);
  EXPECT_THROW(relation_from_string("<"), Error);
}

TEST(Report, CanonicalTextIsDeterministic) {
  const auto f = Field::create(3);
  const auto t = build_spf(f, 6);
  const auto a = canonical_text(selberg_upper_bound_report(6, 3, t));
  const auto b = canonical_text(selberg_upper_bound_report(6, 3, t));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("wall_time_ms"), std::string::npos);
}

TEST(Report, CsvLayout) {
  std::vector<Report> rs{make_report("a", {{"q", "2"}, {"n", "4"}}, Rational(1), Relation::Equal, Rational(1)),
                         make_report("b", {}, Rational(5), Relation::LessEq, Rational(4))};
  std::ostringstream out;
  write_csv(out, rs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "name,params,lhs,relation,rhs,pass,wall_time_ms");
  std::getline(in, line);
  EXPECT_EQ(line, "a,\"n=4;q=2\",1,=,1,true,0");
  std::getline(in, line);
  EXPECT_EQ(line, "b,\"\",5,<=,4,false,0");
  EXPECT_FALSE(all_pass(rs));
}

TEST(Verify, SmallSuitesPass) {
  EXPECT_TRUE(all_pass(verify::small_product_set()));
  EXPECT_TRUE(all_pass(verify::delta()));
  const auto t = build_spf(Field::create(2), 10);
  EXPECT_TRUE(all_pass(verify::prime_counts(t, 10)));
  EXPECT_TRUE(all_pass(verify::rough_bounds(t, 8)));
  EXPECT_TRUE(all_pass(verify::h_counts(t, 8)));
}

TEST(Verify, TallyCountsFailures) {
  verify::Tally tally("demo", {{"q", "2"}});
  tally.check(true, "fine");
  tally.check(false, "broken");
  tally.absorb({make_report("r", {}, Rational(1), Relation::Equal, Rational(2))});
  Stopwatch sw;
  const auto r = tally.report(sw);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.lhs, "2");
  EXPECT_EQ(r.rhs, "0");
}

TEST(Verify, ScalingWindowRejectsOutliers) {
  const auto rows = verify::scaling_rows(Field::create(2), 8, 10);
  EXPECT_TRUE(all_pass(verify::scaling_window(rows, {1.5, 3.0})));
  EXPECT_FALSE(all_pass(verify::scaling_window(rows, {2.9, 3.0})));
}
