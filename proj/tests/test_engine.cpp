#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qpfc/engine.hpp"

using namespace qpfc;
namespace {
constexpr double kPi = std::numbers::pi;

StateVector random_state(const Geometry& g, int d, std::uint64_t seed) {
  StateVector psi = StateVector::all_zero(g, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  for (std::int64_t i = 0; i < psi.amp.size(); ++i)
    psi.amp(i) = cx(dist(rng), dist(rng));
  psi.amp.normalize();
  return psi;
}

std::vector<PulseSpec> pulse_zoo(bool grid) {
  std::vector<PulseSpec> zoo;
  if (grid) {
    zoo.push_back(PulseSpec::periodic(Axis::X, 0.3, 2, 1, Direction::Rows));
    zoo.push_back(PulseSpec::periodic(Axis::Y, -0.4, 3, 2, Direction::Cols));
    zoo.push_back(PulseSpec::uniform(Axis::Z, 0.9));
    zoo.push_back(PulseSpec::ising(0.5, BondSet::all_grid()));
    zoo.push_back(PulseSpec::ising(-0.2, BondSet::grid_rows_only()));
    zoo.push_back(PulseSpec::ising(0.7, BondSet::dimer_a()));
    zoo.push_back(PulseSpec::xxz(0.8, 0.3, 0.6, BondSet::all_grid()));
    zoo.push_back(PulseSpec::xxz(0.8, 0.3, 0.6, BondSet::dimer_a()));
    zoo.push_back(PulseSpec::heisenberg(0.5, 0.4, BondSet::all_grid()));
    zoo.push_back(PulseSpec::xy_bond(0.35, BondSet::dimer_a()));
    zoo.push_back(PulseSpec::xy_bond(0.35, BondSet::all_grid()));
  } else {
    zoo.push_back(PulseSpec::periodic(Axis::X, 0.3, 2, 1));
    zoo.push_back(PulseSpec::periodic(Axis::Z, 0.25, 4, 2.5));
    zoo.push_back(PulseSpec::uniform(Axis::Y, -0.6));
    zoo.push_back(PulseSpec::ising(0.5, BondSet::all_chain()));
    zoo.push_back(PulseSpec::xxz(0.8, 0.3, 0.6, BondSet::all_chain()));
    zoo.push_back(PulseSpec::heisenberg(0.5, 0.4, BondSet::all_chain()));
    zoo.push_back(PulseSpec::xy_bond(0.35, BondSet::all_chain()));
  }
  return zoo;
}

}  // namespace

TEST_CASE("uniform pi/2 x pulse moves |00> to |11>") {
  Geometry g = Geometry::chain(2);
  StateVector psi = StateVector::all_zero(g);
  apply_pulse(psi, PulseSpec::uniform(Axis::X, kPi / 2));
  CHECK(std::norm(psi.amp(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(psi.site_population(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("z pulses are diagonal") {
  Geometry g = Geometry::chain(5);
  const PulseSpec p = PulseSpec::periodic(Axis::Z, kPi / 4, 2, 3);
  for (int digit : {0, 1}) {
    StateVector psi = StateVector::basis(g, 2, {digit, 1, 0, 1, digit});
    const Vec before = psi.amp;
    apply_pulse(psi, p);
    for (std::int64_t i = 0; i < psi.amp.size(); ++i) {
      if (std::abs(before(i)) > 0)
        CHECK(std::abs(psi.amp(i)) == doctest::Approx(std::abs(before(i))));
      else
        CHECK(std::abs(psi.amp(i)) < 1e-14);
    }
  }
}

TEST_CASE("ising pulse phases match the bond sum") {
  Geometry g = Geometry::chain(4);
  const double theta = 0.37;
  const std::vector<int> digits = {0, 1, 1, 0};
  StateVector psi = StateVector::basis(g, 2, digits);
  apply_pulse(psi, PulseSpec::ising(theta, BondSet::all_chain()));
  int sum = 0;
  for (int b = 0; b < 3; ++b) {
    const int sa = digits[b] == 0 ? 1 : -1;
    const int sb = digits[b + 1] == 0 ? 1 : -1;
    sum += sa * sb;
  }
  std::int64_t idx = 0;
  for (int d : digits) idx = idx * 2 + d;
  CHECK(std::arg(psi.amp(idx)) == doctest::Approx(theta * sum).epsilon(1e-12));
}

TEST_CASE("norm preservation over random pulses and states") {
  std::mt19937_64 rng(7);
  Geometry c = Geometry::chain(5);
  Geometry g = Geometry::grid(2, 4);
  auto chain_zoo = pulse_zoo(false);
  auto grid_zoo = pulse_zoo(true);
  for (int trial = 0; trial < 100; ++trial) {
    const bool use_grid = trial % 2 == 0;
    const Geometry& geo = use_grid ? g : c;
    const auto& zoo = use_grid ? grid_zoo : chain_zoo;
    StateVector psi = random_state(geo, 2, rng());
    apply_pulse(psi, zoo[trial % zoo.size()]);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unitarity of random schedules") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    Geometry g = trial % 2 == 0 ? Geometry::chain(6) : Geometry::grid(2, 4);
    auto zoo = pulse_zoo(g.is_grid());
    Schedule s;
    s.geometry = g;
    s.local_dim = 2;
    for (int i = 0; i < 20; ++i) s.pulses.push_back(zoo[rng() % zoo.size()]);
    CHECK(schedule_to_unitary(s).unitarity_defect() <= 1e-10);
  }
}

TEST_CASE("every pulse kind matches its generator oracle") {
  Geometry c = Geometry::chain(5);
  Geometry g = Geometry::grid(2, 4);
  std::mt19937_64 rng(13);
  auto check = [&](const Geometry& geo, const PulseSpec& p, int d) {
    StateVector psi = random_state(geo, d, rng());
    StateVector via_pulse = psi;
    apply_pulse(via_pulse, p);
    auto [h, t] = pulse_generator(p, geo, d);
    const Vec via_oracle = exact_evolve(h, t).mat * psi.amp;
    CHECK((via_pulse.amp - via_oracle).cwiseAbs().maxCoeff() <= 1e-10);
  };
  for (const PulseSpec& p : pulse_zoo(false)) check(c, p, 2);
  for (const PulseSpec& p : pulse_zoo(true)) check(g, p, 2);
  check(c, PulseSpec::subspace_periodic(1, Axis::X, 0.4, 2, 1), 3);
  check(c, PulseSpec::subspace_periodic(2, Axis::Z, 0.3, 4, 2), 4);
  check(c, PulseSpec::subspace_uniform(1, Axis::Y, 0.7), 4);
}

TEST_CASE("diagonal pulses commute") {
  Geometry g = Geometry::chain(4);
  Schedule a;
  a.geometry = g;
  a.pulses.push_back(PulseSpec::periodic(Axis::Z, 0.3, 2, 1));
  a.pulses.push_back(PulseSpec::ising(0.4, BondSet::all_chain()));
  Schedule b = a;
  std::swap(b.pulses[0], b.pulses[1]);
  CHECK((schedule_to_unitary(a).mat - schedule_to_unitary(b).mat)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("xxz with j2=0 equals ising with theta=-j1*t") {
  Geometry g = Geometry::chain(4);
  Schedule a;
  a.geometry = g;
  a.pulses.push_back(PulseSpec::xxz(0.7, 0.0, 0.9, BondSet::all_chain()));
  Schedule b;
  b.geometry = g;
  b.pulses.push_back(PulseSpec::ising(-0.7 * 0.9, BondSet::all_chain()));
  CHECK(schedule_fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact evolve examples") {
  Geometry g2 = Geometry::chain(2);
  HamiltonianSpec zz;
  zz.geometry = g2;
  zz.terms.push_back({HamTerm::Kind::ZZ, 0, 1, Axis::X, 1.0});
  const Mat u = exact_evolve(zz, kPi / 4).mat;
  const cx em = std::exp(cx(0, -kPi / 4)), ep = std::exp(cx(0, kPi / 4));
  CHECK(std::abs(u(0, 0) - em) < 1e-12);
  CHECK(std::abs(u(1, 1) - ep) < 1e-12);
  CHECK(std::abs(u(2, 2) - ep) < 1e-12);
  CHECK(std::abs(u(3, 3) - em) < 1e-12);

  // Heisenberg bond: eigenvalues 1 (triplet) and -3 (singlet).
  HamiltonianSpec heis;
  heis.geometry = g2;
  heis.terms.push_back({HamTerm::Kind::Heis, 0, 1, Axis::X, 1.0});
  Eigen::SelfAdjointEigenSolver<Mat> es(heis.matrix());
  CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0));
  for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(1.0));
}

TEST_CASE("fidelity self comparisons") {
  Geometry g = Geometry::chain(3);
  Schedule s;
  s.geometry = g;
  s.pulses.push_back(PulseSpec::uniform(Axis::X, 0.4));
  CHECK(compare_fidelity(s, schedule_to_unitary(s)).f ==
        doctest::Approx(1.0).epsilon(1e-12));

  Schedule empty;
  empty.geometry = g;
  CHECK(compare_fidelity(empty, OperatorHandle::identity(g)).f ==
        doctest::Approx(1.0));

  HamiltonianSpec h;
  h.geometry = g;
  for (int s0 = 0; s0 < 3; ++s0)
    h.terms.push_back({HamTerm::Kind::Single, s0, 0, Axis::X, 0.3});
  Schedule u;
  u.geometry = g;
  u.pulses.push_back(PulseSpec::uniform(Axis::X, 0.3));
  CHECK(compare_fidelity(u, exact_evolve(h, 1.0)).f >= 1 - 1e-10);
}

TEST_CASE("sampling mode is deterministic and agrees with full mode") {
  Geometry g = Geometry::chain(4);
  Schedule s;
  s.geometry = g;
  s.pulses.push_back(PulseSpec::periodic(Axis::X, 0.3, 2, 1));
  s.pulses.push_back(PulseSpec::ising(0.5, BondSet::all_chain()));
  const Mat u = schedule_to_unitary(s).mat;
  auto applier = [&](StateVector& psi) { psi.amp = u * psi.amp; };
  FidelityReport a = compare_by_sampling(s, applier, 42);
  FidelityReport b = compare_by_sampling(s, applier, 42);
  CHECK(a.f == b.f);
  CHECK(a.sample_count >= 20);
  CHECK(a.f >= 1 - 1e-10);

  // A wrong target must be caught by sampling too.
  Schedule wrong = s;
  wrong.pulses[0] = PulseSpec::periodic(Axis::X, 0.3, 2, 2);
  FidelityReport c = compare_by_sampling(wrong, applier, 42);
  CHECK(c.f < 1 - 1e-6);
}

TEST_CASE("state dump round trip") {
  Geometry g = Geometry::chain(3);
  StateVector psi = random_state(g, 3, 99);
  std::ostringstream os;
  write_state_dump(os, psi);
  std::istringstream is(os.str());
  StateVector r = parse_state_dump(is, g, 3);
  CHECK((r.amp - psi.amp).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dimension and compatibility errors") {
  Geometry g = Geometry::chain(3);
  StateVector psi = StateVector::all_zero(g, 2);
  CHECK_THROWS(apply_pulse(psi, PulseSpec::subspace_uniform(1, Axis::X, 0.1)));
  CHECK_THROWS(apply_pulse(psi, PulseSpec::ising(0.1, BondSet::all_grid())));
}
