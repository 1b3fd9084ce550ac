#pragma once

#include <vector>

#include "qpfc/dioph.hpp"
#include "qpfc/targets.hpp"

// Schedule emitters for focused local operations: single-site rotations,
// two-site ZZ gates (naive and comb procedures), the 2D row/column sandwich
// constructions, and the readout level-mapping sequence. Every emitter
// returns the schedule together with the analytic target it claims to
// realize (up to global phase) and the closed-form step bookkeeping.

namespace qpfc {

struct CompileResult {
  Schedule schedule;
  TargetOp target;
  int step_count = 0;
  int depth = 0;  // focusing iteration depth (m or n_f)
};

// Smallest m with 2^m > max(extent - k, k - 1) for a focus coordinate k in
// [1, extent].
int focus_depth_pow2(int extent, int k);
// Smallest n with 3^n > max(extent - 1 - k, k - 1) for a focus bond k in
// [1, extent - 1].
int focus_depth_pow3(int extent, int k);

// Partial single-site focusing recursion: starting from the uniform pulse
// exp(-i base_theta sigma^axis) on every site, performs `levels` wrap
// iterations. After level l the composed unitary is the spacing-2^l parity
// comb prod_j exp(-i 2^l base_theta sigma_{k+2^l j}^axis). `dir` selects the
// coordinate the profile follows (Chain for chains, Rows/Cols for grids).
Schedule compile_single_partial(const Geometry& g, int k, Axis axis,
                                double base_theta, int levels,
                                Direction dir = Direction::Chain);

// exp(-i theta sigma_k^axis) on a chain; 3*2^m - 2 pulses.
CompileResult compile_single(const Geometry& g, int k, Axis axis, double theta);

// exp(+i theta sigma_k^z sigma_{k+1}^z) via the 6-conjugator Ising identity,
// with every pi/2 x-flip itself compiled by compile_single.
CompileResult compile_bond_naive(const Geometry& g, int k, double theta);

// Partial bond-comb recursion: starting from ISING{base_theta} over the full
// bond set, performs `levels` wraps; after level n the unitary is the
// spacing-3^n bond comb prod_j exp(+i 2^n base_theta B_{k+3^n j}). Level 1
// uses the exact amplitude pi/3; levels >= 2 take amplitudes from
// `solutions` (matched by level).
Schedule compile_bond_comb_partial(const Geometry& g, int k, double base_theta,
                                   int levels,
                                   const std::vector<AnSolution>& solutions,
                                   Direction dir = Direction::Chain);

// exp(+i theta B_k) on a chain via the comb procedure; 3*2^{n_f} - 2 pulses.
// Fidelity is approximate, governed by the amplitude-solution residuals.
CompileResult compile_bond_comb(const Geometry& g, int k, double theta,
                                const std::vector<AnSolution>& solutions);

// exp(-i theta sigma_{(i,j)}^axis) on a grid via the row/column sandwich.
CompileResult compile_grid_single(const Geometry& g, int i, int j, Axis axis,
                                  double theta);

enum class GridBondMethod {
  Naive8,
  TwoOp,
  // TwoOp with a z-axis conjugator instead of x: the conjugator commutes with
  // every ZZ phase, so the emitted schedule composes to the identity. Kept
  // for regression coverage of that failure mode.
  TwoOpLiteralZ
};

// exp(+i theta Z_(i,j) Z_(i,j+1)) on a grid (horizontal bonds only).
CompileResult compile_grid_bond(const Geometry& g, int i, int j, double theta,
                                GridBondMethod method);

// Readout mapping on a qudit chain (local dimension levels + 2): applied to
// |11...1>, sites with (s - anchor) = 0 mod 2^levels end in |a_levels>,
// sites at odd multiples of 2^{l-1} end in |a_{l-1}>.
CompileResult compile_readout(int levels, int n, int anchor);

}  // namespace qpfc
