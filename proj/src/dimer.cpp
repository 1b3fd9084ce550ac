#include "qpfc/dimer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpfc/pattern.hpp"

namespace qpfc {

namespace {

constexpr double kPi = std::numbers::pi;

void add_heis(HamiltonianSpec& h, const BondSet& bonds, double coeff) {
  for (const Bond& b : bonds_of(bonds, h.geometry))
    h.terms.push_back({HamTerm::Kind::Heis, b.first, b.second, Axis::X, coeff});
}

// Period-4 column flip mask whose equal-parity bonds are exactly the A links
// among horizontal bonds: flipped columns are those with column index = 0 or
// 3 mod 4.
std::vector<PulseSpec> dimer_mask(const Geometry& g) {
  AnglePattern pat;
  pat.period = 4;
  pat.values = {kPi / 2.0, 0.0, 0.0, kPi / 2.0};
  pat.axis = Axis::X;
  SynthesisResult syn = synthesize(pat, 2, Direction::Cols);
  if (!syn.feasible)
    throw std::logic_error("dimer column mask synthesis failed");
  return syn.pulses;
}

}  // namespace

HamiltonianSpec dimer_hd(const DimerSystem& sys) {
  HamiltonianSpec h;
  h.geometry = sys.grid;
  h.local_dim = 2;
  add_heis(h, BondSet::dimer_a(), sys.j);
  add_heis(h, BondSet::dimer_b(), sys.lambda * sys.j);
  return h;
}

HamiltonianSpec dimer_h1(const DimerSystem& sys) {
  HamiltonianSpec h;
  h.geometry = sys.grid;
  h.local_dim = 2;
  add_heis(h, BondSet::all_grid(), sys.lambda * sys.j);
  return h;
}

HamiltonianSpec dimer_h2(const DimerSystem& sys) {
  HamiltonianSpec h;
  h.geometry = sys.grid;
  h.local_dim = 2;
  add_heis(h, BondSet::dimer_a(), (1.0 - sys.lambda) * sys.j);
  return h;
}

Schedule u_a_global(const Geometry& g, double theta) {
  return masked_ising(dimer_mask(g), BondSet::grid_rows_only(), theta, g);
}

Schedule u_b_global(const Geometry& g, double theta) {
  const Schedule ua = u_a_global(g, theta);
  Schedule s;
  s.geometry = g;
  s.local_dim = 2;
  // XX factor: conjugate the ZZ block by W = Uz(pi/4) Ux(pi/4), which maps
  // z to x on every site.
  s.pulses.push_back(PulseSpec::uniform(Axis::Z, -kPi / 4.0));
  s.pulses.push_back(PulseSpec::uniform(Axis::X, -kPi / 4.0));
  s.append(ua);
  s.pulses.push_back(PulseSpec::uniform(Axis::X, kPi / 4.0));
  s.pulses.push_back(PulseSpec::uniform(Axis::Z, kPi / 4.0));
  // YY factor: conjugate by Ux(pi/4), mapping z to -y (the sign squares
  // away on a two-site product).
  s.pulses.push_back(PulseSpec::uniform(Axis::X, -kPi / 4.0));
  s.append(ua);
  s.pulses.push_back(PulseSpec::uniform(Axis::X, kPi / 4.0));
  return s;
}

Schedule build_trotter_schedule(const DimerSystem& sys, TrotterOrder order,
                                H2Mode mode) {
  if (sys.k_steps < 1) throw std::invalid_argument("K must be >= 1");
  if (sys.grid.cols % 2 != 0)
    throw std::invalid_argument("dimer grids need an even column count");
  const double tau = sys.t / sys.k_steps;
  const double th2 = -(1.0 - sys.lambda) * sys.j * tau;

  Schedule s;
  s.geometry = sys.grid;
  s.local_dim = 2;

  auto h1_step = [&](double dt) {
    return PulseSpec::heisenberg(sys.lambda * sys.j, dt, BondSet::all_grid());
  };
  auto append_h2 = [&]() {
    if (th2 == 0.0) return;
    if (mode == H2Mode::Oracle) {
      s.pulses.push_back(PulseSpec::ising(th2, BondSet::dimer_a()));
      s.pulses.push_back(PulseSpec::xy_bond(th2, BondSet::dimer_a()));
    } else {
      s.append(u_a_global(sys.grid, th2));
      s.append(u_b_global(sys.grid, th2));
    }
  };

  for (int step = 0; step < sys.k_steps; ++step) {
    if (order == TrotterOrder::First) {
      s.pulses.push_back(h1_step(tau));
      append_h2();
    } else {
      s.pulses.push_back(h1_step(tau / 2.0));
      append_h2();
      s.pulses.push_back(h1_step(tau / 2.0));
    }
  }
  return s;
}

ErrorScan trotter_error_scan(const DimerSystem& sys,
                             const std::vector<int>& k_list,
                             TrotterOrder order) {
  const Mat exact = exact_evolve(dimer_hd(sys), sys.t).mat;
  ErrorScan scan;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k : k_list) {
    DimerSystem s = sys;
    s.k_steps = k;
    const Mat u = schedule_to_unitary(build_trotter_schedule(s, order)).mat;
    const double err = 1.0 - phase_invariant_fidelity(exact, u);
    scan.rows.push_back({k, err});
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(std::max(err, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(k_list.size());
  scan.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return scan;
}

FidelityReport global_mode_equivalence(const DimerSystem& sys) {
  const double th2 = -(1.0 - sys.lambda) * sys.j * sys.t / sys.k_steps;
  Schedule oracle;
  oracle.geometry = sys.grid;
  oracle.local_dim = 2;
  oracle.pulses.push_back(PulseSpec::ising(th2, BondSet::dimer_a()));
  oracle.pulses.push_back(PulseSpec::xy_bond(th2, BondSet::dimer_a()));

  Schedule global = u_a_global(sys.grid, th2);
  global.append(u_b_global(sys.grid, th2));

  FidelityReport rep;
  rep.mode = FidelityReport::Mode::FullUnitary;
  rep.f = schedule_fidelity(oracle, global);
  return rep;
}

}  // namespace qpfc
