#pragma once

#include <cstdint>
#include <vector>

// Amplitude solver for the bond-comb conjugator pulses. Each comb level n
// needs a pulse amplitude a_n whose cosine profile lands on an exact
// quarter-turn lattice at three site classes simultaneously; level 1 has the
// closed-form a_1 = pi/3, higher levels are found by integer search.

namespace qpfc {

struct AnConstraintSystem {
  int n = 1;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;

  static AnConstraintSystem at(int n);
};

struct AnSolution {
  bool found = false;
  int n = 1;
  double an = 0.0;
  std::int64_t p = 0, l = 0, m_eq4 = 0;
  // Distances of an*c2 and an*c3 from the nearest integer multiple of pi/2,
  // in units of pi/2.
  double r2 = 0.0, r3 = 0.0;
  double tol = 0.0;
  // Smallest max(|r2|,|r3|) seen during the scan (== the returned solution's
  // when found).
  double best_max_residual = 0.0;
};

// Scans p in [-bound, bound], eliminating a_n via the first (exact) condition
// a_n*c1 = (2p+1)*pi/2. Returns the best candidate; found=false if its
// max-residual exceeds tol. Tie-break: smallest |p|, then positive p.
AnSolution solve_an(int n, double tol, std::int64_t bound);

struct ResidualReport {
  double residual = 0.0;
  double infidelity = 0.0;
};

// Builds the level-n conjugation stage on a chain of length n_sites with the
// solved amplitude and measures agreement with the ideal spacing-3^n comb.
ResidualReport residual_to_infidelity(const AnSolution& sol, int n_sites,
                                      int level, int k);

}  // namespace qpfc
