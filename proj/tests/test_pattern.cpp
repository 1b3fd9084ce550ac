#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qpfc/pattern.hpp"
#include "qpfc/targets.hpp"

using namespace qpfc;
namespace {
constexpr double kPi = std::numbers::pi;

// Summed profile of the synthesized pulses at residue class r (1-based site
// coordinate i with i mod period == r), reduced against the target mod 2pi.
double profile_error(const SynthesisResult& res, const AnglePattern& pat) {
  Geometry g = Geometry::chain(2 * pat.period + 1);
  std::vector<double> sum(g.sites(), 0.0);
  for (const PulseSpec& p : res.pulses) {
    auto prof = angle_profile(p, g);
    for (int i = 0; i < g.sites(); ++i) sum[i] += prof[i];
  }
  double worst = 0.0;
  for (int i = 1; i <= g.sites(); ++i) {
    const double want = pat.values[i % pat.period];
    const double d = std::remainder(sum[i - 1] - want, 2 * kPi);
    worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

AnglePattern interval_mask() {
  AnglePattern p;
  p.period = 4;
  p.values = {0, 0, kPi / 2, kPi / 2};
  p.axis = Axis::X;
  return p;
}
}  // namespace

TEST_CASE("uniform pattern needs a single uniform pulse") {
  AnglePattern p;
  p.period = 1;
  p.values = {0.7};
  SynthesisResult r = synthesize(p, 2);
  REQUIRE(r.feasible);
  REQUIRE(r.pulses.size() == 1);
  CHECK(r.pulses[0].kind == PulseKind::Uniform);
  CHECK(r.pulses[0].theta == doctest::Approx(0.7));
}

TEST_CASE("parity pattern is a single cosine pulse") {
  AnglePattern p;
  p.period = 2;
  p.values = {0, kPi / 2};  // even sites off, odd sites pi/2
  SynthesisResult r = synthesize(p, 2);
  REQUIRE(r.feasible);
  REQUIRE(r.pulses.size() == 1);
  CHECK(r.pulses[0].kind == PulseKind::Periodic);
  CHECK(r.pulses[0].theta == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(r.pulses[0].period == doctest::Approx(2.0));
  CHECK(std::fabs(std::remainder(r.pulses[0].focus, 2.0)) < 1e-9);
  CHECK(profile_error(r, p) < 1e-9);
}

TEST_CASE("interval pattern needs two pulses") {
  AnglePattern p = interval_mask();
  SynthesisResult one = synthesize(p, 1);
  CHECK_FALSE(one.feasible);
  SynthesisResult two = synthesize(p, 2);
  REQUIRE(two.feasible);
  CHECK(two.pulses.size() == 2);
  CHECK(profile_error(two, p) < 1e-9);
}

TEST_CASE("generic period-4 pattern is infeasible and reports a distance") {
  AnglePattern p;
  p.period = 4;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(0.1, 1.0);
  p.values = {d(rng), d(rng), d(rng), d(rng)};
  p.values[3] += 2.0;  // push well off the 3-dimensional span
  SynthesisResult r = synthesize(p, 2);
  CHECK_FALSE(r.feasible);
  CHECK(r.span_distance > 1e-6);
}

TEST_CASE("flip parity and surviving bonds of the interval mask") {
  Geometry g = Geometry::chain(8);
  AnglePattern p = interval_mask();
  SynthesisResult r = synthesize(p, 2);
  REQUIRE(r.feasible);

  auto parity = mask_flip_parity(r.pulses, g);
  for (int i = 1; i <= 8; ++i) {
    const int rr = i % 4;
    CHECK(parity[i - 1] == (rr == 2 || rr == 3));
  }

  auto surv = mask_surviving_bonds(r.pulses, BondSet::all_chain(), g);
  REQUIRE(surv.size() == 3);
  CHECK(surv[0] == Bond{1, 2});
  CHECK(surv[1] == Bond{3, 4});
  CHECK(surv[2] == Bond{5, 6});
}

TEST_CASE("masked global Ising equals the surviving-bond evolution") {
  Geometry g = Geometry::chain(8);
  SynthesisResult r = synthesize(interval_mask(), 2);
  REQUIRE(r.feasible);
  const double theta = 0.37;
  Schedule s = masked_ising(r.pulses, BondSet::all_chain(), theta, g);
  TargetOp want =
      target_bond_set_zz(g, {{1, 2}, {3, 4}, {5, 6}}, theta);
  CHECK(compare_fidelity(s, want.op()).f >= 1 - 1e-10);
}

TEST_CASE("empty mask doubles every bond") {
  Geometry g = Geometry::chain(6);
  Schedule s = masked_ising({}, BondSet::all_chain(), 0.6, g);
  TargetOp want = target_bond_set_zz(g, bonds_of(BondSet::all_chain(), g), 0.6);
  CHECK(compare_fidelity(s, want.op()).f >= 1 - 1e-10);
}

TEST_CASE("mask validation") {
  Geometry g = Geometry::chain(4);
  // A z-axis mask commutes with the Ising pulse and cannot echo anything.
  std::vector<PulseSpec> zmask = {PulseSpec::periodic(Axis::Z, kPi / 4, 2, 0)};
  CHECK_THROWS(masked_ising(zmask, BondSet::all_chain(), 0.1, g));
  // Angles off the 0 / pi/2 grid have no flip-parity reading.
  std::vector<PulseSpec> bad = {PulseSpec::uniform(Axis::X, 0.3)};
  CHECK_THROWS(mask_flip_parity(bad, g));
}

TEST_CASE("z-conjugation of an XY pulse signs the crossing bonds") {
  // Conjugating exp(+i theta sum (XX+YY)) by pi/2 z-rotations on sites
  // 2,3,6,7 flips the sign of every bond with exactly one rotated endpoint.
  Geometry g = Geometry::chain(4);
  const double theta = 0.29;
  AnglePattern zpat = interval_mask();
  zpat.axis = Axis::Z;
  SynthesisResult r = synthesize(zpat, 2);
  REQUIRE(r.feasible);

  Schedule s;
  s.geometry = g;
  for (const PulseSpec& p : r.pulses) s.pulses.push_back(p);
  s.pulses.push_back(PulseSpec::xy_bond(theta, BondSet::all_chain()));
  for (auto it = r.pulses.rbegin(); it != r.pulses.rend(); ++it)
    s.pulses.push_back(it->inverse());

  HamiltonianSpec h;
  h.geometry = g;
  auto parity = mask_flip_parity(r.pulses, g);
  for (const Bond& b : bonds_of(BondSet::all_chain(), g)) {
    HamTerm t;
    t.kind = HamTerm::Kind::XY;
    t.a = b.first;
    t.b = b.second;
    t.coeff = (parity[b.first] == parity[b.second]) ? 1.0 : -1.0;
    h.terms.push_back(t);
  }
  OperatorHandle want = exact_evolve(h, -theta);
  CHECK(phase_invariant_fidelity(schedule_to_unitary(s).mat, want.mat) >=
        1 - 1e-10);
}
