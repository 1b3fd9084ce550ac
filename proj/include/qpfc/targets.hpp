#pragma once

#include <string>

#include "qpfc/engine.hpp"

// Analytic target operators the compiler's schedules are verified against.
// A target is a Hermitian generator plus an evolution time: U = exp(-i H t).
// Fast statevector application is available when the generator is all-diagonal
// or a sum of single-site terms with at most one term per site; otherwise the
// dense route is used (within the matrix cap).

namespace qpfc {

struct TargetOp {
  HamiltonianSpec generator;
  double time = 1.0;
  std::string label;

  Mat matrix() const;
  OperatorHandle op() const;
  void apply(StateVector& psi) const;
  StateApplier applier() const {
    return [*this](StateVector& psi) { apply(psi); };
  }
};

// exp(-i angle sigma_k^axis), chain site k (1-based).
TargetOp target_single_site(const Geometry& g, int k, Axis axis, double angle,
                            int local_dim = 2);
// exp(-i angle sigma_(i,j)^axis) on a grid.
TargetOp target_grid_single(const Geometry& g, int i, int j, Axis axis,
                            double angle);
// exp(+i angle Z_k Z_{k+1}), chain bond k.
TargetOp target_bond_zz(const Geometry& g, int k, double angle);
// exp(+i angle Z_(i,j) Z_(i,j+1)) on a grid.
TargetOp target_grid_bond_zz(const Geometry& g, int i, int j, double angle);
// Parity comb: prod_j exp(-i angle sigma_{k + spacing*j}^axis) over sites in
// range (j any integer).
TargetOp target_site_comb(const Geometry& g, int k, int spacing, Axis axis,
                          double angle);
// Bond comb: prod_j exp(+i angle Z_b Z_{b+1}) for bonds b = k + spacing*j.
TargetOp target_bond_comb(const Geometry& g, int k, int spacing, double angle);
// exp(+i angle sum over an explicit bond list of Z Z).
TargetOp target_bond_set_zz(const Geometry& g, const std::vector<Bond>& bonds,
                            double angle);
TargetOp target_identity(const Geometry& g, int local_dim = 2);

// Parse a CLI target descriptor, e.g. "single:x:3:0.7", "bond:6:0.5",
// "grid-single:x:2:2:0.4", "grid-bond:2:2:0.7", "comb:4:3:0.25",
// "site-comb:x:2:2:0.3", "interval:0.3", "dimer-exact:lambda=0.5,t=1,j=1",
// "identity".
TargetOp parse_target(const std::string& spec, const Geometry& g,
                      int local_dim = 2);

}  // namespace qpfc
