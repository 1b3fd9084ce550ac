#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qpfc/lattice.hpp"

// Dense simulation engine: applies schedules to statevectors or accumulates
// full unitaries, and computes phase-invariant agreement metrics. The engine
// is exact (no internal Trotterization); it is the oracle that judges the
// compiler.

namespace qpfc {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Dense-matrix dimension cap; QPFC_MATRIX_CAP overrides.
std::int64_t matrix_cap();

std::int64_t hilbert_dim(const Geometry& g, int local_dim);

struct StateVector {
  Geometry geometry;
  int local_dim = 2;
  Vec amp;

  static StateVector all_zero(const Geometry& g, int d = 2);
  static StateVector all_one(const Geometry& g, int d = 2);
  // Basis state from per-site digits (flat site order, base d).
  static StateVector basis(const Geometry& g, int d, const std::vector<int>& digits);

  double norm() const { return amp.norm(); }
  // Probability of finding site s (flat index) in level l.
  double site_population(int site, int level) const;
};

struct OperatorHandle {
  Geometry geometry;
  int local_dim = 2;
  Mat mat;

  static OperatorHandle identity(const Geometry& g, int d = 2);
  // Max-entry deviation of U^dag U from the identity.
  double unitarity_defect() const;
};

// ---- Hamiltonian descriptors (exact-evolution oracle) ----

struct HamTerm {
  enum class Kind { ZZ, XY, Heis, Single };
  Kind kind = Kind::ZZ;
  int a = 0, b = 0;   // flat sites; Single uses a only
  Axis axis = Axis::X;  // Single only
  double coeff = 0.0;
  int l0 = 0, l1 = 1;  // Single only: the two-level subspace acted on
};

struct HamiltonianSpec {
  Geometry geometry;
  int local_dim = 2;
  std::vector<HamTerm> terms;

  Mat matrix() const;
};

// exp(-i H t) via Hermitian eigendecomposition. Dimension must be within the
// matrix cap; Hermiticity of the assembled matrix is validated.
OperatorHandle exact_evolve(const HamiltonianSpec& h, double t);

// ---- Pulse application ----

void apply_pulse(StateVector& psi, const PulseSpec& p);
// Left-multiplies: u.mat <- P * u.mat.
void apply_pulse(OperatorHandle& u, const PulseSpec& p);

void apply_schedule(StateVector& psi, const Schedule& s);

OperatorHandle schedule_to_unitary(const Schedule& s);

// Generator of a pulse: apply_pulse(psi, p) == exact_evolve(H, t) * psi.
// Used as an independent cross-check of the fast per-pulse kernels.
std::pair<HamiltonianSpec, double> pulse_generator(const PulseSpec& p,
                                                   const Geometry& g,
                                                   int local_dim = 2);

// ---- Fidelity ----

struct FidelityReport {
  double f = 0.0;
  enum class Mode { FullUnitary, Sampling } mode = Mode::FullUnitary;
  int sample_count = 0;
  double worst_sample_deviation = 0.0;  // 1 - min overlap over samples
};

// |Tr(U^dag V)| / dim
double phase_invariant_fidelity(const Mat& u, const Mat& v);

FidelityReport compare_fidelity(const Schedule& s, const OperatorHandle& target);

// Seeded random-state mode: F = min over samples of |<psi| U^dag V |psi>|.
using StateApplier = std::function<void(StateVector&)>;
FidelityReport compare_by_sampling(const Schedule& s, const StateApplier& target,
                                   std::uint64_t seed, int samples = 20);

// Schedule-vs-schedule agreement, full-unitary mode.
double schedule_fidelity(const Schedule& a, const Schedule& b);

// Statevector dump: one line per basis state with |amp| >= 1e-14,
// `<base-d index string> <re> <im>`.
void write_state_dump(std::ostream& os, const StateVector& psi);
StateVector parse_state_dump(std::istream& is, const Geometry& g, int d);

}  // namespace qpfc
