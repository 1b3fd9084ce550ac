#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qpfc/compiler.hpp"

using namespace qpfc;
namespace {
constexpr double kPi = std::numbers::pi;

double fidelity(const CompileResult& r) {
  return compare_fidelity(r.schedule, r.target.op()).f;
}
}  // namespace

TEST_CASE("single-site focusing is exact on small chains") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.05, kPi - 0.05);
  for (int n = 2; n <= 6; ++n) {
    Geometry g = Geometry::chain(n);
    for (int k = 1; k <= n; ++k) {
      for (Axis ax : {Axis::X, Axis::Z}) {
        CompileResult r = compile_single(g, k, ax, ang(rng));
        CHECK(fidelity(r) >= 1 - 1e-10);
        CHECK(r.step_count == 3 * (1 << r.depth) - 2);
      }
    }
  }
}

TEST_CASE("y-axis rotations compile through the same recursion") {
  Geometry g = Geometry::chain(7);
  CompileResult r = compile_single(g, 4, Axis::Y, 0.61);
  CHECK(fidelity(r) >= 1 - 1e-10);
}

TEST_CASE("depth covers both sides of the focus") {
  CHECK(focus_depth_pow2(8, 3) == 3);  // max(5, 2) -> 2^3
  CHECK(focus_depth_pow2(8, 8) == 3);  // left distance 7
  CHECK(focus_depth_pow2(2, 1) == 1);
  CHECK(focus_depth_pow2(5, 3) == 2);
  CHECK(focus_depth_pow3(8, 4) == 2);  // bonds: max(3, 3) -> 3^2
  CHECK(focus_depth_pow3(4, 2) == 1);
  CHECK_THROWS(focus_depth_pow2(4, 5));
}

TEST_CASE("N=8 k=3 example: 22 steps, exact") {
  Geometry g = Geometry::chain(8);
  CompileResult r = compile_single(g, 3, Axis::X, 0.7);
  CHECK(r.depth == 3);
  CHECK(r.step_count == 22);
  CHECK(fidelity(r) >= 1 - 1e-10);
}

TEST_CASE("parity-comb intermediates") {
  const double theta = 0.11;
  for (auto [n, k] : {std::pair{5, 3}, {10, 5}, {10, 1}, {7, 6}}) {
    Geometry g = Geometry::chain(n);
    for (int l = 1; l <= 3; ++l) {
      Schedule s = compile_single_partial(g, k, Axis::X, theta, l);
      TargetOp comb =
          target_site_comb(g, k, 1 << l, Axis::X, std::ldexp(theta, l));
      CHECK(compare_fidelity(s, comb.op()).f >= 1 - 1e-10);
    }
  }
}

TEST_CASE("naive bond gate is exact and local") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0.05, kPi - 0.05);
  for (int n : {2, 4, 6}) {
    Geometry g = Geometry::chain(n);
    for (int k = 1; k < n; ++k) {
      CompileResult r = compile_bond_naive(g, k, ang(rng));
      CHECK(fidelity(r) >= 1 - 1e-10);
    }
  }
}

TEST_CASE("naive bond step count sits in the coarse linear band") {
  for (int n : {6, 8, 10}) {
    Geometry g = Geometry::chain(n);
    int worst = 0;
    for (int k = 1; k < n; ++k)
      worst = std::max(worst, compile_bond_naive(g, k, 0.4).step_count);
    CHECK(worst >= 2 * n);
    CHECK(worst <= 36 * n);
  }
}

TEST_CASE("bond comb level 1 reproduces the spacing-3 comb exactly") {
  Geometry g = Geometry::chain(8);
  const double theta = 0.09;
  Schedule s = compile_bond_comb_partial(g, 4, theta, 1, {});
  TargetOp comb = target_bond_comb(g, 4, 3, 2 * theta);
  CHECK(compare_fidelity(s, comb.op()).f >= 1 - 1e-10);
  // Survivors are exactly the bonds k + 3j: for k=4 on N=8, bonds 1, 4, 7.
  TargetOp wrong = target_bond_comb(g, 3, 3, 2 * theta);
  CHECK(compare_fidelity(s, wrong.op()).f < 1 - 1e-6);
}

TEST_CASE("full bond comb with a solved level-2 amplitude") {
  Geometry g = Geometry::chain(8);
  AnSolution a2 = solve_an(2, 1.0, 10000);
  REQUIRE(a2.found);
  CompileResult r = compile_bond_comb(g, 4, 0.5, {a2});
  CHECK(r.depth == 2);
  CHECK(r.step_count == 10);
  CHECK(fidelity(r) >= 1 - 1e-3);
  CHECK_THROWS(compile_bond_comb(g, 4, 0.5, {}));  // missing level 2
}

TEST_CASE("grid single site: full 3x3 sweep") {
  Geometry g = Geometry::grid(3, 3);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(0.05, kPi - 0.05);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (Axis ax : {Axis::X, Axis::Z}) {
        CompileResult r = compile_grid_single(g, i, j, ax, ang(rng));
        CHECK(fidelity(r) >= 1 - 1e-10);
      }
}

TEST_CASE("grid single site: zero angle collapses to identity") {
  Geometry g = Geometry::grid(2, 2);
  CompileResult r = compile_grid_single(g, 1, 2, Axis::X, 0.0);
  CHECK(compare_fidelity(r.schedule, OperatorHandle::identity(g)).f >=
        1 - 1e-12);
}

TEST_CASE("grid bond: both methods exact, literal-z collapses to identity") {
  Geometry g = Geometry::grid(3, 3);
  for (auto m : {GridBondMethod::Naive8, GridBondMethod::TwoOp}) {
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 2; ++j) {
        CompileResult r = compile_grid_bond(g, i, j, 0.7, m);
        CHECK(fidelity(r) >= 1 - 1e-10);
      }
  }
  CompileResult lit =
      compile_grid_bond(g, 2, 2, 0.7, GridBondMethod::TwoOpLiteralZ);
  CHECK(compare_fidelity(lit.schedule, OperatorHandle::identity(g)).f >=
        1 - 1e-10);
  CHECK(fidelity(lit) < 1 - 1e-6);
  CHECK_THROWS(compile_grid_bond(g, 1, 3, 0.2, GridBondMethod::Naive8));
}

TEST_CASE("readout populations") {
  {
    CompileResult r = compile_readout(1, 4, 2);
    StateVector psi = StateVector::all_one(Geometry::chain(4), 3);
    apply_schedule(psi, r.schedule);
    for (int s = 0; s < 4; ++s) {
      const bool marked = ((s + 1) - 2) % 2 == 0;
      CHECK(psi.site_population(s, 2) ==
            doctest::Approx(marked ? 1.0 : 0.0).epsilon(1e-10));
      CHECK(psi.site_population(s, 1) ==
            doctest::Approx(marked ? 0.0 : 1.0).epsilon(1e-10));
    }
  }
  {
    CompileResult r = compile_readout(2, 8, 1);
    Geometry g = Geometry::chain(8);
    StateVector psi = StateVector::all_one(g, 4);
    apply_schedule(psi, r.schedule);
    for (int site : {1, 5}) CHECK(psi.site_population(site - 1, 3) == doctest::Approx(1.0));
    for (int site : {3, 7}) CHECK(psi.site_population(site - 1, 2) == doctest::Approx(1.0));
    for (int site : {2, 4, 6, 8}) CHECK(psi.site_population(site - 1, 1) == doctest::Approx(1.0));
    // |00...0> is untouched: every pulse acts above level |0>.
    StateVector zero = StateVector::all_zero(g, 4);
    apply_schedule(zero, r.schedule);
    CHECK(std::abs(zero.amp(0) - cx(1, 0)) < 1e-12);
  }
}

TEST_CASE("argument validation") {
  Geometry g = Geometry::chain(4);
  CHECK_THROWS(compile_single(g, 0, Axis::X, 0.1));
  CHECK_THROWS(compile_single(g, 5, Axis::X, 0.1));
  CHECK_THROWS(compile_bond_naive(g, 4, 0.1));
  CHECK_THROWS(compile_grid_single(g, 1, 1, Axis::X, 0.1));
  CHECK_THROWS(compile_readout(0, 4, 1));
  CHECK_THROWS(compile_readout(1, 4, 5));
}
