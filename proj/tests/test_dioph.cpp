#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qpfc/dioph.hpp"

using namespace qpfc;
namespace {
constexpr double kPi = std::numbers::pi;

// Re-evaluate the quarter-turn residuals directly from the constraint
// coefficients, independent of the solver's own bookkeeping.
double recompute_residual(const AnSolution& s, double c) {
  const double q = s.an * c / (kPi / 2);
  return q - std::round(q);
}
}  // namespace

TEST_CASE("level-1 constraint coefficients") {
  AnConstraintSystem c = AnConstraintSystem::at(1);
  CHECK(c.c1 == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(c.c3 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS(AnConstraintSystem::at(0));
}

TEST_CASE("level 1 solves exactly to pi/3") {
  AnSolution s = solve_an(1, 1e-12, 10);
  REQUIRE(s.found);
  CHECK(s.an == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(s.p == -1);
  CHECK(std::abs(s.r2) < 1e-14);
  CHECK(std::abs(s.r3) < 1e-14);
}

TEST_CASE("reported residuals match a re-substitution") {
  for (int n : {1, 2, 3}) {
    AnConstraintSystem c = AnConstraintSystem::at(n);
    AnSolution s = solve_an(n, 1.0, 2000);
    REQUIRE(s.found);
    // First condition holds exactly by construction.
    CHECK(s.an * c.c1 ==
          doctest::Approx((2.0 * s.p + 1) * kPi / 2).epsilon(1e-12));
    CHECK(s.r2 == doctest::Approx(recompute_residual(s, c.c2)).epsilon(1e-9));
    CHECK(s.r3 == doctest::Approx(recompute_residual(s, c.c3)).epsilon(1e-9));
  }
}

TEST_CASE("level 2 is approximate: found at loose tol, not at tight tol") {
  AnSolution loose = solve_an(2, 1e-2, 10000);
  CHECK(loose.found);
  CHECK(loose.best_max_residual > 1e-4);

  AnSolution tight = solve_an(2, 1e-4, 10000);
  CHECK_FALSE(tight.found);
  CHECK(tight.best_max_residual == doctest::Approx(loose.best_max_residual));

  AnSolution zero = solve_an(2, 0.0, 10000);
  CHECK_FALSE(zero.found);
}

TEST_CASE("best residual improves (weakly) with the search bound") {
  double prev = 1e9;
  for (std::int64_t bound : {100, 1000, 10000}) {
    AnSolution s = solve_an(2, 1.0, bound);
    REQUIRE(s.found);
    CHECK(s.best_max_residual <= prev + 1e-15);
    prev = s.best_max_residual;
  }
}

TEST_CASE("residual-to-infidelity mapping") {
  AnSolution a1 = solve_an(1, 1e-12, 10);
  ResidualReport exact = residual_to_infidelity(a1, 8, 1, 4);
  CHECK(exact.infidelity <= 1e-12);

  AnSolution coarse = solve_an(2, 1.0, 100);
  AnSolution fine = solve_an(2, 1.0, 10000);
  REQUIRE(coarse.found);
  REQUIRE(fine.found);
  REQUIRE(fine.best_max_residual < coarse.best_max_residual);
  ResidualReport rc = residual_to_infidelity(coarse, 10, 2, 5);
  ResidualReport rf = residual_to_infidelity(fine, 10, 2, 5);
  CHECK(rf.infidelity < rc.infidelity);
  CHECK(rc.infidelity > 0);
}
