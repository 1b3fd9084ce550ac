#include "qpfc/compiler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpfc {

namespace {

constexpr double kPi = std::numbers::pi;

Axis conjugator_axis(Axis a) {
  // Any axis anticommuting with the rotation axis works; x-rotations are
  // wrapped in z-conjugators and everything else in x... except that y also
  // anticommutes with z, so z is used for both x and y rotations.
  switch (a) {
    case Axis::X: return Axis::Z;
    case Axis::Z: return Axis::X;
    case Axis::Y: return Axis::Z;
  }
  throw std::logic_error("unreachable");
}

int extent_along(const Geometry& g, Direction dir) {
  if (g.is_chain()) {
    if (dir != Direction::Chain)
      throw std::invalid_argument("grid direction on a chain");
    return g.chain_len;
  }
  switch (dir) {
    case Direction::Rows: return g.rows;
    case Direction::Cols: return g.cols;
    default: throw std::invalid_argument("chain direction on a grid");
  }
}

Schedule wrap(const Schedule& inner, const PulseSpec& conj) {
  Schedule out;
  out.geometry = inner.geometry;
  out.local_dim = inner.local_dim;
  out.pulses.push_back(conj);
  out.pulses.insert(out.pulses.end(), inner.pulses.begin(),
                    inner.pulses.end());
  out.pulses.push_back(conj.inverse());
  out.pulses.insert(out.pulses.end(), inner.pulses.begin(),
                    inner.pulses.end());
  return out;
}

double an_for_level(int n, const std::vector<AnSolution>& solutions) {
  if (n == 1) return kPi / 3.0;
  for (const AnSolution& s : solutions)
    if (s.n == n) {
      if (!s.found)
        throw std::invalid_argument(
            "bond comb: amplitude solution for level " + std::to_string(n) +
            " did not meet its tolerance");
      return s.an;
    }
  throw std::invalid_argument("bond comb: no amplitude solution for level " +
                              std::to_string(n));
}

}  // namespace

int focus_depth_pow2(int extent, int k) {
  if (k < 1 || k > extent) throw std::out_of_range("focus site out of range");
  const int need = std::max(extent - k, k - 1);
  int m = 0;
  long p = 1;
  while (p <= need) {
    p *= 2;
    ++m;
  }
  return m;
}

int focus_depth_pow3(int extent, int k) {
  if (k < 1 || k > extent - 1)
    throw std::out_of_range("focus bond out of range");
  const int need = std::max(extent - 1 - k, k - 1);
  int n = 0;
  long p = 1;
  while (p <= need) {
    p *= 3;
    ++n;
  }
  return n;
}

Schedule compile_single_partial(const Geometry& g, int k, Axis axis,
                                double base_theta, int levels, Direction dir) {
  const int extent = extent_along(g, dir);
  if (k < 1 || k > extent) throw std::out_of_range("focus site out of range");
  if (levels < 0) throw std::invalid_argument("negative level count");
  const Axis conj = conjugator_axis(axis);

  Schedule s;
  s.geometry = g;
  s.local_dim = 2;
  s.pulses.push_back(PulseSpec::uniform(axis, base_theta));
  for (int l = 1; l <= levels; ++l) {
    const double period = std::ldexp(1.0, l);  // 2^l
    s = wrap(s, PulseSpec::periodic(conj, kPi / 4.0, period, k, dir));
  }
  return s;
}

CompileResult compile_single(const Geometry& g, int k, Axis axis,
                             double theta) {
  if (!g.is_chain())
    throw std::invalid_argument("compile_single expects a chain");
  const int m = focus_depth_pow2(g.chain_len, k);
  CompileResult r;
  r.schedule = compile_single_partial(g, k, axis, std::ldexp(theta, -m), m);
  r.target = target_single_site(g, k, axis, theta);
  r.step_count = r.schedule.step_count();
  r.depth = m;
  if (r.step_count != 3 * (1 << m) - 2)
    throw std::logic_error("single-site step-count identity violated");
  return r;
}

CompileResult compile_bond_naive(const Geometry& g, int k, double theta) {
  if (!g.is_chain())
    throw std::invalid_argument("compile_bond_naive expects a chain");
  const int n = g.chain_len;
  if (k < 1 || k > n - 1) throw std::out_of_range("bond out of range");

  CompileResult xa = compile_single(g, k, Axis::X, kPi / 2.0);
  CompileResult xb = compile_single(g, k + 1, Axis::X, kPi / 2.0);
  const PulseSpec up = PulseSpec::ising(theta / 4.0, BondSet::all_chain());
  const PulseSpec um = PulseSpec::ising(-theta / 4.0, BondSet::all_chain());

  CompileResult r;
  r.schedule.geometry = g;
  r.schedule.local_dim = 2;
  auto& ps = r.schedule.pulses;
  auto put = [&](const Schedule& s) {
    ps.insert(ps.end(), s.pulses.begin(), s.pulses.end());
  };
  // Application order of the 6-conjugator identity (operator order reversed).
  put(xa.schedule);
  put(xb.schedule);
  ps.push_back(up);
  put(xa.schedule);
  ps.push_back(um);
  put(xa.schedule);
  put(xb.schedule);
  ps.push_back(um);
  put(xa.schedule);
  ps.push_back(up);

  r.target = target_bond_zz(g, k, theta);
  r.step_count = r.schedule.step_count();
  r.depth = std::max(xa.depth, xb.depth);
  return r;
}

Schedule compile_bond_comb_partial(const Geometry& g, int k, double base_theta,
                                   int levels,
                                   const std::vector<AnSolution>& solutions,
                                   Direction dir) {
  BondSet bonds = BondSet::all_chain();
  if (g.is_grid()) {
    if (dir != Direction::Cols)
      throw std::invalid_argument(
          "grid bond combs run along the column coordinate");
    bonds = BondSet::grid_rows_only();
  }
  const int extent = extent_along(g, dir);
  if (k < 1 || k > extent - 1)
    throw std::out_of_range("focus bond out of range");

  Schedule s;
  s.geometry = g;
  s.local_dim = 2;
  s.pulses.push_back(PulseSpec::ising(base_theta, bonds));
  for (int n = 1; n <= levels; ++n) {
    const double an = an_for_level(n, solutions);
    const double period = std::pow(3.0, n);
    const double focus = k - (period - 1.0) / 2.0;
    s = wrap(s, PulseSpec::periodic(Axis::X, an, period, focus, dir));
  }
  return s;
}

CompileResult compile_bond_comb(const Geometry& g, int k, double theta,
                                const std::vector<AnSolution>& solutions) {
  if (!g.is_chain())
    throw std::invalid_argument("compile_bond_comb expects a chain");
  const int nf = focus_depth_pow3(g.chain_len, k);
  CompileResult r;
  r.schedule = compile_bond_comb_partial(g, k, std::ldexp(theta, -nf), nf,
                                         solutions);
  r.target = target_bond_zz(g, k, theta);
  r.step_count = r.schedule.step_count();
  r.depth = nf;
  if (r.step_count != 3 * (1 << nf) - 2)
    throw std::logic_error("bond-comb step-count identity violated");
  return r;
}

CompileResult compile_grid_single(const Geometry& g, int i, int j, Axis axis,
                                  double theta) {
  if (!g.is_grid())
    throw std::invalid_argument("compile_grid_single expects a grid");
  const int mr = focus_depth_pow2(g.rows, i);
  const int mc = focus_depth_pow2(g.cols, j);
  const Axis conj = conjugator_axis(axis);

  // Row block: rotates every site of row i by the block angle; column block
  // likewise along columns with the anticommuting axis. The sandwich leaves
  // a net rotation only at (i, j); the row-block sign is chosen so the
  // composition is exp(-i theta sigma^axis).
  auto row_block = [&](double phi) {
    return compile_single_partial(g, i, axis, std::ldexp(phi, -mr), mr,
                                  Direction::Rows);
  };
  auto col_block = [&](double phi) {
    return compile_single_partial(g, j, conj, std::ldexp(phi, -mc), mc,
                                  Direction::Cols);
  };

  CompileResult r;
  r.schedule = col_block(-kPi / 2.0);
  r.schedule.append(row_block(-theta / 2.0));
  r.schedule.append(col_block(kPi / 2.0));
  r.schedule.append(row_block(theta / 2.0));
  r.target = target_grid_single(g, i, j, axis, theta);
  r.step_count = r.schedule.step_count();
  r.depth = std::max(mr, mc);
  return r;
}

CompileResult compile_grid_bond(const Geometry& g, int i, int j, double theta,
                                GridBondMethod method) {
  if (!g.is_grid())
    throw std::invalid_argument("compile_grid_bond expects a grid");
  if (j < 1 || j > g.cols - 1 || i < 1 || i > g.rows)
    throw std::out_of_range("horizontal bond out of range");

  CompileResult r;
  r.schedule.geometry = g;
  r.schedule.local_dim = 2;
  auto& ps = r.schedule.pulses;
  auto put = [&](const Schedule& s) {
    ps.insert(ps.end(), s.pulses.begin(), s.pulses.end());
  };

  if (method == GridBondMethod::Naive8) {
    CompileResult xa = compile_grid_single(g, i, j, Axis::X, kPi / 2.0);
    CompileResult xb = compile_grid_single(g, i, j + 1, Axis::X, kPi / 2.0);
    const PulseSpec up = PulseSpec::ising(theta / 4.0, BondSet::all_grid());
    const PulseSpec um = PulseSpec::ising(-theta / 4.0, BondSet::all_grid());
    put(xa.schedule);
    put(xb.schedule);
    ps.push_back(up);
    put(xa.schedule);
    put(xb.schedule);
    ps.push_back(um);
    put(xb.schedule);
    ps.push_back(um);
    put(xb.schedule);
    ps.push_back(up);
    put(xa.schedule);
    ps.push_back(um);
    put(xa.schedule);
    ps.push_back(up);
    r.depth = std::max(xa.depth, xb.depth);
  } else {
    // Column-pair Ising over every row, focused on column pair (j, j+1),
    // then halved/negated and conjugated by a single-site flip at (i, j).
    const int nf = focus_depth_pow3(g.cols, j);
    std::vector<AnSolution> solutions;
    for (int n = 2; n <= nf; ++n) solutions.push_back(solve_an(n, 1.0, 100000));
    auto column_pair = [&](double phi) {
      return compile_bond_comb_partial(g, j, std::ldexp(phi, -nf), nf,
                                       solutions, Direction::Cols);
    };
    const Axis conj =
        method == GridBondMethod::TwoOpLiteralZ ? Axis::Z : Axis::X;
    CompileResult flip = compile_grid_single(g, i, j, conj, kPi / 2.0);
    put(flip.schedule);
    put(column_pair(-theta / 2.0));
    put(flip.schedule);
    put(column_pair(theta / 2.0));
    r.depth = std::max(nf, flip.depth);
  }

  r.target = target_grid_bond_zz(g, i, j, theta);
  r.step_count = r.schedule.step_count();
  return r;
}

CompileResult compile_readout(int levels, int n, int anchor) {
  if (levels < 1) throw std::invalid_argument("readout needs >= 1 level");
  const Geometry g = Geometry::chain(n);
  if (anchor < 1 || anchor > n) throw std::out_of_range("anchor out of range");

  CompileResult r;
  r.schedule.geometry = g;
  r.schedule.local_dim = levels + 2;
  auto& ps = r.schedule.pulses;
  for (int l = 1; l <= levels; ++l) {
    // One parity wrap per level: sites already parked below the active
    // subspace are untouched, so a single wrap isolates the 2^l comb.
    const double period = std::ldexp(1.0, l);
    const PulseSpec conj =
        PulseSpec::subspace_periodic(l, Axis::Z, kPi / 4.0, period, anchor);
    const PulseSpec step = PulseSpec::subspace_uniform(l, Axis::X, kPi / 4.0);
    ps.push_back(conj);
    ps.push_back(step);
    ps.push_back(conj.inverse());
    ps.push_back(step);
  }
  r.target = target_identity(g, levels + 2);
  r.target.label = "readout";
  r.step_count = r.schedule.step_count();
  r.depth = levels;
  return r;
}

}  // namespace qpfc
