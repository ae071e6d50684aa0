#include <cmath>

#include "doctest.h"
#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"

using namespace gldlmom;

namespace {

struct Expected {
  Region region;
  double l1, l2, l3, l4, tau5, tau6;
};

// High-precision solutions of tau3 = 0.4, tau4 = 0.25 standardized to L1 = 0,
// L2 = 1, obtained independently in 40-digit arithmetic.
constexpr Expected kSkewed[] = {
    {Region::R3, -1.1680635, 0.12427131, 5.416916, 92.621375, -0.0289514, 0.0673964},
    {Region::R3, 5.3196457, 0.13786003, 21.512978, 0.28570179, 0.163236, 0.102469},
    {Region::R4, -1.6200495, -0.15708637, -0.013724404, -0.21160709, 0.157925, 0.121368},
    {Region::R6, -7.0399559, -0.19359708, 11.905848, -0.30574799, 0.203756, 0.179951},
};

}  // namespace

TEST_CASE("census of a skewed target finds four solutions in three regions") {
  const auto sols = solution_census(0.4, 0.25);
  REQUIRE(sols.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const Expected& e = kSkewed[k];
    const CensusSolution& s = sols[k];
    CHECK(s.region == e.region);
    CHECK(s.shape.lambda3 == doctest::Approx(e.l3).epsilon(1e-6));
    CHECK(s.shape.lambda4 == doctest::Approx(e.l4).epsilon(1e-6));
    CHECK(s.standardized.lambda1 == doctest::Approx(e.l1).epsilon(1e-6));
    CHECK(s.standardized.lambda2 == doctest::Approx(e.l2).epsilon(1e-6));
    CHECK(s.objective < 1e-16);
    CHECK(s.achieved.tau3 == doctest::Approx(0.4).epsilon(1e-8));
    const LMomentSet m = gld_lmoments(s.standardized, 6);
    CHECK(m.l1 == doctest::Approx(0.0).scale(1e-9));
    CHECK(m.l2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.ratio(5) == doctest::Approx(e.tau5).epsilon(1e-5));
    CHECK(m.ratio(6) == doctest::Approx(e.tau6).epsilon(1e-5));
  }
}

TEST_CASE("census of a symmetric target has two symmetric and two mirrored solutions") {
  const auto sols = solution_census(0.0, 0.12304993999817188);
  REQUIRE(sols.size() == 4);
  int symmetric = 0;
  for (const auto& s : sols) {
    CHECK(s.region == Region::R3);
    if (std::abs(s.shape.lambda3 - s.shape.lambda4) < 1e-6) ++symmetric;
  }
  CHECK(symmetric == 2);
  CHECK(sols[1].shape.lambda3 == doctest::Approx(1.98022).epsilon(1e-4));
  CHECK(sols[1].shape.lambda4 == doctest::Approx(22.5885).epsilon(1e-4));
  CHECK(sols[3].shape.lambda3 == doctest::Approx(sols[1].shape.lambda4).epsilon(1e-6));
}

TEST_CASE("census below the reachable kurtosis is empty") {
  CHECK(solution_census(0.0, -0.02).empty());
}

TEST_CASE("census input checks") {
  CHECK_THROWS_AS(solution_census(0.0, -0.3), Error);
  CHECK_THROWS_AS(solution_census(1.0, 0.5), Error);
  CensusOptions bad;
  bad.seed_resolution = 8;
  CHECK_THROWS_AS(solution_census(0.1, 0.2, bad), Error);
}
