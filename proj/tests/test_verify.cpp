#include "pqnorm/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <regex>
#include <set>

using namespace pqnorm;

TEST(Verify, RegistryIsLargeAndSorted) {
  const auto names = check_names();
  EXPECT_GE(names.size(), 25u);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
}

TEST(Verify, UnknownCheckIsAnError) {
  EXPECT_THROW(run_check("no_such_check", 0, Sizes{}), std::invalid_argument);
}

TEST(Verify, AnchorsAreDescriptive) {
  for (const auto& name : check_names()) {
    const CheckResult r = run_check(name, 1, Sizes{1, 1});
    EXPECT_GT(r.anchor.size(), 15u) << name;
    EXPECT_FALSE(std::regex_search(r.anchor, std::regex("[0-9]+\\.[0-9]+"))) << name;
  }
}

TEST(Verify, QuickProfilePasses) {
  const Report rep = run_all(0, Profile::quick);
  for (const auto& c : rep.checks) EXPECT_EQ(c.verdict, "pass") << c.check << " margin " << c.margin;
  EXPECT_TRUE(rep.all_passed());
}

TEST(Verify, SizesRespectProfile) {
  for (const auto& c : run_all(3, Profile::quick).checks) {
    EXPECT_LE(c.sizes.d, 2) << c.check;
    EXPECT_LE(c.sizes.n, 2) << c.check;
  }
}

TEST(Verify, ReportsAreByteIdentical) {
  EXPECT_EQ(to_json(run_all(5, Profile::quick)).dump(), to_json(run_all(5, Profile::quick)).dump());
}

TEST(Verify, ReportSchema) {
  const Json j = to_json(run_check("roots_of_unity_pinching", 2, Sizes{3, 3}));
  for (const char* key : {"check", "anchor", "seed", "sizes", "margin", "tolerance", "verdict"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Verify, TinyToleranceFails) {
  const CheckResult r = run_check("schatten_diamond_multiplicativity", 0, Sizes{3, 3}, 0.0);
  EXPECT_GT(r.margin, 0.0);
  EXPECT_EQ(r.verdict, "fail");
}

TEST(Verify, InconclusiveNeverPasses) {
  CheckResult r;
  r.verdict = "inconclusive";
  EXPECT_FALSE(r.passed());
  Report rep;
  rep.checks.push_back(r);
  EXPECT_FALSE(rep.all_passed());
}
