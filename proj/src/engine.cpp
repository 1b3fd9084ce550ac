#include "qpfc/engine.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace qpfc {

namespace {

constexpr double kHermTol = 1e-10;

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t{1} << 50) / base)
      throw std::invalid_argument("Hilbert dimension overflow");
    r *= base;
  }
  return r;
}

// s_z eigenvalue of a local level: |0> -> +1, |1> -> -1, higher levels 0.
inline int sz_of(int level) { return level == 0 ? 1 : (level == 1 ? -1 : 0); }

inline std::int64_t site_stride(const Geometry& g, int d, int flat_site) {
  return ipow(d, g.sites() - 1 - flat_site);
}

// 2x2 unitary of exp(-i theta sigma^axis).
Eigen::Matrix2cd rotation2(Axis axis, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2cd u;
  switch (axis) {
    case Axis::X:
      u << cx(c, 0), cx(0, -s), cx(0, -s), cx(c, 0);
      break;
    case Axis::Y:
      u << cx(c, 0), cx(-s, 0), cx(s, 0), cx(c, 0);
      break;
    case Axis::Z:
      u << std::exp(cx(0, -theta)), cx(0, 0), cx(0, 0), std::exp(cx(0, theta));
      break;
  }
  return u;
}

// Apply a 2x2 gate on levels (l0, l1) of one site to a raw amplitude column.
void apply_two_level(cx* data, std::int64_t dim, std::int64_t stride, int d,
                     int l0, int l1, const Eigen::Matrix2cd& u) {
  const cx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const std::int64_t block = stride * d;
  const std::int64_t off0 = l0 * stride, off1 = l1 * stride;
  for (std::int64_t base = 0; base < dim; base += block) {
    cx* p0 = data + base + off0;
    cx* p1 = data + base + off1;
    for (std::int64_t low = 0; low < stride; ++low) {
      const cx a = p0[low], b = p1[low];
      p0[low] = u00 * a + u01 * b;
      p1[low] = u10 * a + u11 * b;
    }
  }
}

// Apply a 4x4 gate on qubit levels {0,1} of two sites (d == 2).
void apply_two_site(cx* data, std::int64_t dim, std::int64_t sa,
                    std::int64_t sb, const Eigen::Matrix4cd& u) {
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    if ((idx / sa) % 2 != 0 || (idx / sb) % 2 != 0) continue;
    const std::int64_t i00 = idx, i01 = idx + sb, i10 = idx + sa,
                       i11 = idx + sa + sb;
    const cx a = data[i00], b = data[i01], c = data[i10], e = data[i11];
    data[i00] = u(0, 0) * a + u(0, 1) * b + u(0, 2) * c + u(0, 3) * e;
    data[i01] = u(1, 0) * a + u(1, 1) * b + u(1, 2) * c + u(1, 3) * e;
    data[i10] = u(2, 0) * a + u(2, 1) * b + u(2, 2) * c + u(2, 3) * e;
    data[i11] = u(3, 0) * a + u(3, 1) * b + u(3, 2) * c + u(3, 3) * e;
  }
}

bool bonds_disjoint(const std::vector<Bond>& bonds) {
  std::set<int> seen;
  for (const Bond& b : bonds) {
    if (!seen.insert(b.first).second) return false;
    if (!seen.insert(b.second).second) return false;
  }
  return true;
}

Eigen::Matrix4cd two_site_unitary(const PulseSpec& p) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  const Eigen::Vector4d zz(1, -1, -1, 1);
  Eigen::Matrix4d xy = Eigen::Matrix4d::Zero();
  xy(1, 2) = xy(2, 1) = 2.0;
  double t = 0.0;
  switch (p.kind) {
    case PulseKind::Xxz:
      h = p.j1 * Eigen::Matrix4d(zz.asDiagonal()) - p.j2 * xy;
      t = p.t;
      break;
    case PulseKind::Heisenberg:
      h = p.j * (Eigen::Matrix4d(zz.asDiagonal()) + xy);
      t = p.t;
      break;
    case PulseKind::XyBond:
      h = -xy;  // exp(+i theta (XX+YY)) == exp(-i theta * (-(XX+YY)))
      t = p.theta;
      break;
    default:
      throw std::logic_error("two_site_unitary: not a bond evolution pulse");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) {
    const cx phase = std::exp(cx(0, -t * es.eigenvalues()[k]));
    u += phase * (es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose())
                     .cast<cx>();
  }
  return u;
}

// Diagonal of exp(+i theta sum_bonds sz sz).
Vec ising_diagonal(const PulseSpec& p, const Geometry& g, int d) {
  const std::int64_t dim = hilbert_dim(g, d);
  const auto bonds = bonds_of(p.bonds, g);
  std::vector<std::int64_t> sa(bonds.size()), sb(bonds.size());
  for (size_t k = 0; k < bonds.size(); ++k) {
    sa[k] = site_stride(g, d, bonds[k].first);
    sb[k] = site_stride(g, d, bonds[k].second);
  }
  Vec diag(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    int sum = 0;
    for (size_t k = 0; k < bonds.size(); ++k) {
      sum += sz_of(static_cast<int>((idx / sa[k]) % d)) *
             sz_of(static_cast<int>((idx / sb[k]) % d));
    }
    diag[idx] = std::exp(cx(0, p.theta * sum));
  }
  return diag;
}

struct PulsePlan {
  enum class Op { SiteRotations, Diagonal, BondGates, Dense } op;
  // SiteRotations: one 2x2 per site on levels (l0, l1)
  std::vector<Eigen::Matrix2cd> site_gates;
  int l0 = 0, l1 = 1;
  Vec diagonal;
  Eigen::Matrix4cd bond_gate;
  std::vector<Bond> bonds;
  Mat dense;
};

PulsePlan plan_pulse(const PulseSpec& p, const Geometry& g, int d) {
  PulsePlan plan;
  if (p.is_rotation()) {
    int l0 = 0, l1 = 1;
    if (p.kind == PulseKind::SubspacePeriodic) {
      // |a_0> = |1> sits at level 1; |a_l> at level l + 1.
      l0 = p.level;
      l1 = p.level + 1;
      if (l1 >= d)
        throw std::invalid_argument("subspace pulse level exceeds local dimension");
    }
    const auto profile = angle_profile(p, g);
    plan.op = PulsePlan::Op::SiteRotations;
    plan.l0 = l0;
    plan.l1 = l1;
    plan.site_gates.reserve(profile.size());
    for (double th : profile) plan.site_gates.push_back(rotation2(p.axis, th));
    return plan;
  }
  if (p.kind == PulseKind::Ising) {
    plan.op = PulsePlan::Op::Diagonal;
    plan.diagonal = ising_diagonal(p, g, d);
    return plan;
  }
  // XXZ / Heisenberg / XY bond evolutions: qubit levels only.
  if (d != 2)
    throw std::invalid_argument("bond evolution pulses require local dimension 2");
  plan.bonds = bonds_of(p.bonds, g);
  if (bonds_disjoint(plan.bonds)) {
    plan.op = PulsePlan::Op::BondGates;
    plan.bond_gate = two_site_unitary(p);
    return plan;
  }
  auto [h, t] = pulse_generator(p, g, d);
  plan.op = PulsePlan::Op::Dense;
  plan.dense = exact_evolve(h, t).mat;
  return plan;
}

void apply_plan_to_column(const PulsePlan& plan, const Geometry& g, int d,
                          cx* data, std::int64_t dim) {
  switch (plan.op) {
    case PulsePlan::Op::SiteRotations:
      for (int s = 0; s < g.sites(); ++s) {
        apply_two_level(data, dim, site_stride(g, d, s), d, plan.l0, plan.l1,
                        plan.site_gates[s]);
      }
      break;
    case PulsePlan::Op::Diagonal:
      for (std::int64_t i = 0; i < dim; ++i) data[i] *= plan.diagonal[i];
      break;
    case PulsePlan::Op::BondGates:
      for (const Bond& b : plan.bonds) {
        apply_two_site(data, dim, site_stride(g, d, b.first),
                       site_stride(g, d, b.second), plan.bond_gate);
      }
      break;
    case PulsePlan::Op::Dense: {
      Eigen::Map<Vec> v(data, dim);
      Vec out = plan.dense * v;
      v = out;
      break;
    }
  }
}

}  // namespace

std::int64_t matrix_cap() {
  if (const char* env = std::getenv("QPFC_MATRIX_CAP")) {
    const long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 4096;
}

std::int64_t hilbert_dim(const Geometry& g, int local_dim) {
  return ipow(local_dim, g.sites());
}

StateVector StateVector::all_zero(const Geometry& g, int d) {
  return basis(g, d, std::vector<int>(g.sites(), 0));
}

StateVector StateVector::all_one(const Geometry& g, int d) {
  return basis(g, d, std::vector<int>(g.sites(), 1));
}

StateVector StateVector::basis(const Geometry& g, int d,
                               const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != g.sites())
    throw std::invalid_argument("basis: digit count != site count");
  std::int64_t idx = 0;
  for (int v : digits) {
    if (v < 0 || v >= d) throw std::invalid_argument("basis digit out of range");
    idx = idx * d + v;
  }
  StateVector psi;
  psi.geometry = g;
  psi.local_dim = d;
  psi.amp = Vec::Zero(hilbert_dim(g, d));
  psi.amp[idx] = 1.0;
  return psi;
}

double StateVector::site_population(int site, int level) const {
  const std::int64_t stride = site_stride(geometry, local_dim, site);
  double sum = 0.0;
  for (std::int64_t idx = 0; idx < amp.size(); ++idx) {
    if ((idx / stride) % local_dim == level) sum += std::norm(amp[idx]);
  }
  return sum;
}

OperatorHandle OperatorHandle::identity(const Geometry& g, int d) {
  const std::int64_t dim = hilbert_dim(g, d);
  if (dim > matrix_cap())
    throw std::invalid_argument("dimension exceeds dense-matrix cap");
  OperatorHandle u;
  u.geometry = g;
  u.local_dim = d;
  u.mat = Mat::Identity(dim, dim);
  return u;
}

double OperatorHandle::unitarity_defect() const {
  Mat d = mat.adjoint() * mat;
  d.diagonal().array() -= 1.0;
  return d.cwiseAbs().maxCoeff();
}

Mat HamiltonianSpec::matrix() const {
  const std::int64_t dim = hilbert_dim(geometry, local_dim);
  if (dim > matrix_cap())
    throw std::invalid_argument("Hamiltonian dimension exceeds dense-matrix cap");
  const int d = local_dim;
  Mat h = Mat::Zero(dim, dim);
  for (const HamTerm& term : terms) {
    const std::int64_t sa = site_stride(geometry, d, term.a);
    const std::int64_t sb =
        term.kind == HamTerm::Kind::Single ? 0 : site_stride(geometry, d, term.b);
    for (std::int64_t idx = 0; idx < dim; ++idx) {
      const int da = static_cast<int>((idx / sa) % d);
      switch (term.kind) {
        case HamTerm::Kind::ZZ: {
          const int db = static_cast<int>((idx / sb) % d);
          h(idx, idx) += term.coeff * sz_of(da) * sz_of(db);
          break;
        }
        case HamTerm::Kind::XY: {
          const int db = static_cast<int>((idx / sb) % d);
          // (XX + YY)|01> = 2|10> and vice versa
          if (da == 0 && db == 1) h(idx + sa - sb, idx) += 2.0 * term.coeff;
          if (da == 1 && db == 0) h(idx - sa + sb, idx) += 2.0 * term.coeff;
          break;
        }
        case HamTerm::Kind::Heis: {
          const int db = static_cast<int>((idx / sb) % d);
          h(idx, idx) += term.coeff * sz_of(da) * sz_of(db);
          if (da == 0 && db == 1) h(idx + sa - sb, idx) += 2.0 * term.coeff;
          if (da == 1 && db == 0) h(idx - sa + sb, idx) += 2.0 * term.coeff;
          break;
        }
        case HamTerm::Kind::Single: {
          if (da == term.l0) {
            const std::int64_t up = idx + (term.l1 - term.l0) * sa;
            switch (term.axis) {
              case Axis::X:
                h(up, idx) += term.coeff;
                break;
              case Axis::Y:
                h(up, idx) += cx(0, 1) * term.coeff;
                break;
              case Axis::Z:
                h(idx, idx) += term.coeff;
                break;
            }
          } else if (da == term.l1) {
            const std::int64_t dn = idx - (term.l1 - term.l0) * sa;
            switch (term.axis) {
              case Axis::X:
                h(dn, idx) += term.coeff;
                break;
              case Axis::Y:
                h(dn, idx) += cx(0, -1) * term.coeff;
                break;
              case Axis::Z:
                h(idx, idx) -= term.coeff;
                break;
            }
          }
          break;
        }
      }
    }
  }
  return h;
}

OperatorHandle exact_evolve(const HamiltonianSpec& h, double t) {
  Mat hm = h.matrix();
  const double herm = (hm - hm.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol)
    throw std::invalid_argument("exact_evolve: descriptor is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(hm);
  const Vec phases =
      (cx(0, -t) * es.eigenvalues().cast<cx>().array()).exp().matrix();
  OperatorHandle u;
  u.geometry = h.geometry;
  u.local_dim = h.local_dim;
  u.mat = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u;
}

void apply_pulse(StateVector& psi, const PulseSpec& p) {
  const PulsePlan plan = plan_pulse(p, psi.geometry, psi.local_dim);
  apply_plan_to_column(plan, psi.geometry, psi.local_dim, psi.amp.data(),
                       psi.amp.size());
}

void apply_pulse(OperatorHandle& u, const PulseSpec& p) {
  const PulsePlan plan = plan_pulse(p, u.geometry, u.local_dim);
  const std::int64_t dim = u.mat.rows();
  if (plan.op == PulsePlan::Op::Dense) {
    u.mat = plan.dense * u.mat;
    return;
  }
  for (std::int64_t c = 0; c < u.mat.cols(); ++c) {
    apply_plan_to_column(plan, u.geometry, u.local_dim, u.mat.data() + c * dim,
                         dim);
  }
}

namespace {

// Runs of consecutive site-rotation pulses acting on the same level pair are
// products of tensor products, so they collapse to one accumulated 2x2 gate
// per site before touching the (much larger) state or operator data.
template <typename Sink>
void run_schedule_fused(const Schedule& s, const Geometry& g, int d,
                        const Sink& sink) {
  std::vector<Eigen::Matrix2cd> pending;
  int pl0 = 0, pl1 = 1;
  bool have = false;
  const auto flush = [&] {
    if (!have) return;
    PulsePlan fused;
    fused.op = PulsePlan::Op::SiteRotations;
    fused.l0 = pl0;
    fused.l1 = pl1;
    fused.site_gates = pending;
    sink(fused);
    have = false;
  };
  for (const PulseSpec& p : s.pulses) {
    PulsePlan plan = plan_pulse(p, g, d);
    if (plan.op == PulsePlan::Op::SiteRotations) {
      if (have && plan.l0 == pl0 && plan.l1 == pl1) {
        for (size_t i = 0; i < pending.size(); ++i)
          pending[i] = plan.site_gates[i] * pending[i];
      } else {
        flush();
        pending = std::move(plan.site_gates);
        pl0 = plan.l0;
        pl1 = plan.l1;
        have = true;
      }
      continue;
    }
    flush();
    sink(plan);
  }
  flush();
}

}  // namespace

void apply_schedule(StateVector& psi, const Schedule& s) {
  if (!(psi.geometry == s.geometry) || psi.local_dim != s.local_dim)
    throw std::invalid_argument("apply_schedule: geometry/dimension mismatch");
  run_schedule_fused(s, psi.geometry, psi.local_dim, [&](const PulsePlan& plan) {
    apply_plan_to_column(plan, psi.geometry, psi.local_dim, psi.amp.data(),
                         psi.amp.size());
  });
}

OperatorHandle schedule_to_unitary(const Schedule& s) {
  const std::int64_t dim = hilbert_dim(s.geometry, s.local_dim);
  if (dim > matrix_cap())
    throw std::invalid_argument(
        "schedule_to_unitary: dimension exceeds dense-matrix cap; use sampling");
  OperatorHandle u = OperatorHandle::identity(s.geometry, s.local_dim);
  run_schedule_fused(s, u.geometry, u.local_dim, [&](const PulsePlan& plan) {
    if (plan.op == PulsePlan::Op::Dense) {
      u.mat = plan.dense * u.mat;
      return;
    }
    for (std::int64_t c = 0; c < u.mat.cols(); ++c)
      apply_plan_to_column(plan, u.geometry, u.local_dim, u.mat.data() + c * dim,
                           dim);
  });
  return u;
}

std::pair<HamiltonianSpec, double> pulse_generator(const PulseSpec& p,
                                                   const Geometry& g,
                                                   int local_dim) {
  HamiltonianSpec h;
  h.geometry = g;
  h.local_dim = local_dim;
  if (p.is_rotation()) {
    const auto profile = angle_profile(p, g);
    int l0 = 0, l1 = 1;
    if (p.kind == PulseKind::SubspacePeriodic) {
      l0 = p.level;
      l1 = p.level + 1;
    }
    for (int s = 0; s < g.sites(); ++s) {
      if (profile[s] == 0.0) continue;
      HamTerm term;
      term.kind = HamTerm::Kind::Single;
      term.a = s;
      term.axis = p.axis;
      term.coeff = profile[s];
      term.l0 = l0;
      term.l1 = l1;
      h.terms.push_back(term);
    }
    return {h, 1.0};
  }
  const auto bonds = bonds_of(p.bonds, g);
  switch (p.kind) {
    case PulseKind::Ising:
      for (const Bond& b : bonds)
        h.terms.push_back({HamTerm::Kind::ZZ, b.first, b.second, Axis::X, -1.0});
      return {h, p.theta};
    case PulseKind::Xxz:
      for (const Bond& b : bonds) {
        h.terms.push_back({HamTerm::Kind::ZZ, b.first, b.second, Axis::X, p.j1});
        h.terms.push_back({HamTerm::Kind::XY, b.first, b.second, Axis::X, -p.j2});
      }
      return {h, p.t};
    case PulseKind::Heisenberg:
      for (const Bond& b : bonds)
        h.terms.push_back({HamTerm::Kind::Heis, b.first, b.second, Axis::X, p.j});
      return {h, p.t};
    case PulseKind::XyBond:
      for (const Bond& b : bonds)
        h.terms.push_back({HamTerm::Kind::XY, b.first, b.second, Axis::X, -1.0});
      return {h, p.theta};
    default:
      throw std::logic_error("pulse_generator: unhandled pulse kind");
  }
}

double phase_invariant_fidelity(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const cx tr = (u.adjoint() * v).trace();
  return std::abs(tr) / static_cast<double>(u.rows());
}

FidelityReport compare_fidelity(const Schedule& s, const OperatorHandle& target) {
  if (!(s.geometry == target.geometry) || s.local_dim != target.local_dim)
    throw std::invalid_argument("compare_fidelity: geometry/dimension mismatch");
  OperatorHandle u = schedule_to_unitary(s);
  FidelityReport r;
  r.mode = FidelityReport::Mode::FullUnitary;
  r.f = phase_invariant_fidelity(u.mat, target.mat);
  return r;
}

FidelityReport compare_by_sampling(const Schedule& s, const StateApplier& target,
                                   std::uint64_t seed, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const std::int64_t dim = hilbert_dim(s.geometry, s.local_dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FidelityReport r;
  r.mode = FidelityReport::Mode::Sampling;
  r.sample_count = samples;
  r.f = 1.0;
  for (int k = 0; k < samples; ++k) {
    StateVector psi;
    psi.geometry = s.geometry;
    psi.local_dim = s.local_dim;
    psi.amp = Vec(dim);
    for (std::int64_t i = 0; i < dim; ++i) psi.amp[i] = cx(gauss(rng), gauss(rng));
    psi.amp.normalize();
    StateVector lhs = psi, rhs = psi;
    apply_schedule(lhs, s);
    target(rhs);
    const double overlap = std::abs(lhs.amp.dot(rhs.amp));
    r.f = std::min(r.f, overlap);
    r.worst_sample_deviation = std::max(r.worst_sample_deviation, 1.0 - overlap);
  }
  return r;
}

double schedule_fidelity(const Schedule& a, const Schedule& b) {
  OperatorHandle ua = schedule_to_unitary(a);
  OperatorHandle ub = schedule_to_unitary(b);
  return phase_invariant_fidelity(ua.mat, ub.mat);
}

void write_state_dump(std::ostream& os, const StateVector& psi) {
  const int n = psi.geometry.sites();
  const int d = psi.local_dim;
  std::string digits(n, '0');
  for (std::int64_t idx = 0; idx < psi.amp.size(); ++idx) {
    const cx a = psi.amp[idx];
    if (std::abs(a) < 1e-14) continue;
    std::int64_t rem = idx;
    for (int s = n - 1; s >= 0; --s) {
      digits[s] = static_cast<char>('0' + rem % d);
      rem /= d;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", a.real(), a.imag());
    os << digits << buf;
  }
}

StateVector parse_state_dump(std::istream& is, const Geometry& g, int d) {
  StateVector psi;
  psi.geometry = g;
  psi.local_dim = d;
  psi.amp = Vec::Zero(hilbert_dim(g, d));
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string digits;
    double re, im;
    if (!(ss >> digits >> re >> im))
      throw std::invalid_argument("bad dump line: " + line);
    if (static_cast<int>(digits.size()) != g.sites())
      throw std::invalid_argument("dump digit count != site count");
    std::int64_t idx = 0;
    for (char c : digits) {
      const int v = c - '0';
      if (v < 0 || v >= d) throw std::invalid_argument("dump digit out of range");
      idx = idx * d + v;
    }
    psi.amp[idx] = cx(re, im);
  }
  return psi;
}

}  // namespace qpfc
