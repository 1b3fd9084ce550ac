#pragma once

#include <vector>

#include "qpfc/engine.hpp"

// Coupled-dimer Heisenberg model on an even-width grid: strong bonds on the
// A links (decoupled horizontal dimers), weak bonds scaled by lambda on the
// rest. Trotterized global-pulse schedules approximate exp(-i H_d t); the
// H2 (A-link-only) factor can be emitted either as direct dimer-bond pulses
// or compiled from rows-only global pulses with synthesized column masks.

namespace qpfc {

struct DimerSystem {
  Geometry grid;
  double j = 1.0;
  double lambda = 0.5;  // in [0, 1]
  double t = 1.0;
  int k_steps = 1;
};

HamiltonianSpec dimer_hd(const DimerSystem& sys);
// H1 = lambda*J over all bonds; H2 = (1-lambda)*J over A links;
// H1 + H2 = H_d exactly.
HamiltonianSpec dimer_h1(const DimerSystem& sys);
HamiltonianSpec dimer_h2(const DimerSystem& sys);

enum class TrotterOrder { First, Symmetric };
enum class H2Mode { Oracle, Global };

// U_a(theta) = exp(+i theta sum_A ZZ) and U_b(theta) = exp(+i theta sum_A
// (XX + YY)) as global-pulse schedules: rows-only Ising conjugated by the
// synthesized period-4 column flip mask (U_a), further conjugated by uniform
// basis-change rotations for the XX and YY factors (U_b).
Schedule u_a_global(const Geometry& g, double theta);
Schedule u_b_global(const Geometry& g, double theta);

// K repetitions of the H1 step exp(-i H1 t/K) (a full-grid Heisenberg pulse)
// interleaved with the H2 block U_a(th2)*U_b(th2), th2 = -(1-lambda)*J*t/K.
// Symmetric order splits the H1 step into halves around the H2 block.
Schedule build_trotter_schedule(const DimerSystem& sys, TrotterOrder order,
                                H2Mode mode = H2Mode::Oracle);

struct ErrorScanRow {
  int k = 0;
  double error = 0.0;  // 1 - F vs the exact evolution
};
struct ErrorScan {
  std::vector<ErrorScanRow> rows;
  double slope = 0.0;  // least-squares log-log slope of error vs K
};

ErrorScan trotter_error_scan(const DimerSystem& sys,
                             const std::vector<int>& k_list,
                             TrotterOrder order);

// Global-mode H2 block vs the oracle-mode block, full-unitary fidelity.
FidelityReport global_mode_equivalence(const DimerSystem& sys);

}  // namespace qpfc
