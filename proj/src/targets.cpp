#include "qpfc/targets.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace qpfc {

namespace {

// All terms diagonal (ZZ or Single-z)?
bool all_diagonal(const HamiltonianSpec& h) {
  for (const HamTerm& t : h.terms) {
    if (t.kind == HamTerm::Kind::ZZ) continue;
    if (t.kind == HamTerm::Kind::Single && t.axis == Axis::Z) continue;
    return false;
  }
  return true;
}

// Sum of single-site terms, at most one per site?
bool disjoint_singles(const HamiltonianSpec& h) {
  std::set<int> seen;
  for (const HamTerm& t : h.terms) {
    if (t.kind != HamTerm::Kind::Single) return false;
    if (!seen.insert(t.a).second) return false;
  }
  return true;
}

std::int64_t stride_of(const Geometry& g, int d, int site) {
  std::int64_t s = 1;
  for (int i = 0; i < g.sites() - 1 - site; ++i) s *= d;
  return s;
}

int sz_of(int level) { return level == 0 ? 1 : (level == 1 ? -1 : 0); }

}  // namespace

Mat TargetOp::matrix() const {
  const std::int64_t dim = hilbert_dim(generator.geometry, generator.local_dim);
  if (all_diagonal(generator)) {
    StateVector psi;
    psi.geometry = generator.geometry;
    psi.local_dim = generator.local_dim;
    psi.amp = Vec::Ones(dim);
    apply(psi);  // diagonal action: the all-ones vector collects the phases
    return Mat(psi.amp.asDiagonal());
  }
  if (disjoint_singles(generator)) {
    // Column-wise application of the fast statevector path keeps large
    // diagonal targets (N = 12) out of the dense eigensolver.
    Mat u = Mat::Identity(dim, dim);
    for (std::int64_t col = 0; col < dim; ++col) {
      StateVector psi;
      psi.geometry = generator.geometry;
      psi.local_dim = generator.local_dim;
      psi.amp = u.col(col);
      apply(psi);
      u.col(col) = psi.amp;
    }
    return u;
  }
  return exact_evolve(generator, time).mat;
}

OperatorHandle TargetOp::op() const {
  OperatorHandle h;
  h.geometry = generator.geometry;
  h.local_dim = generator.local_dim;
  h.mat = matrix();
  return h;
}

void TargetOp::apply(StateVector& psi) const {
  const Geometry& g = generator.geometry;
  const int d = generator.local_dim;
  if (!(psi.geometry == g) || psi.local_dim != d)
    throw std::invalid_argument("target apply: geometry/dimension mismatch");
  if (all_diagonal(generator)) {
    for (std::int64_t idx = 0; idx < psi.amp.size(); ++idx) {
      double e = 0.0;
      for (const HamTerm& t : generator.terms) {
        const int da = static_cast<int>((idx / stride_of(g, d, t.a)) % d);
        if (t.kind == HamTerm::Kind::ZZ) {
          const int db = static_cast<int>((idx / stride_of(g, d, t.b)) % d);
          e += t.coeff * sz_of(da) * sz_of(db);
        } else {
          e += t.coeff * (da == t.l0 ? 1.0 : (da == t.l1 ? -1.0 : 0.0));
        }
      }
      psi.amp[idx] *= std::exp(cx(0, -time * e));
    }
    return;
  }
  if (disjoint_singles(generator)) {
    // Product of independent single-site rotations.
    for (const HamTerm& t : generator.terms) {
      PulseSpec rot = PulseSpec::uniform(t.axis, 0.0);
      // Apply exp(-i (coeff*time) sigma^axis) on one site via a one-site
      // explicit profile: reuse the engine by building a periodic pulse is
      // clumsy here, so apply directly.
      const double th = t.coeff * time;
      const double c = std::cos(th), s = std::sin(th);
      Eigen::Matrix2cd u;
      switch (t.axis) {
        case Axis::X: u << cx(c, 0), cx(0, -s), cx(0, -s), cx(c, 0); break;
        case Axis::Y: u << cx(c, 0), cx(-s, 0), cx(s, 0), cx(c, 0); break;
        case Axis::Z:
          u << std::exp(cx(0, -th)), cx(0, 0), cx(0, 0), std::exp(cx(0, th));
          break;
      }
      (void)rot;
      const std::int64_t stride = stride_of(g, d, t.a);
      const std::int64_t block = stride * d;
      const std::int64_t off0 = t.l0 * stride, off1 = t.l1 * stride;
      cx* data = psi.amp.data();
      for (std::int64_t base = 0; base < psi.amp.size(); base += block) {
        for (std::int64_t low = 0; low < stride; ++low) {
          cx& a = data[base + off0 + low];
          cx& b = data[base + off1 + low];
          const cx a0 = a, b0 = b;
          a = u(0, 0) * a0 + u(0, 1) * b0;
          b = u(1, 0) * a0 + u(1, 1) * b0;
        }
      }
    }
    return;
  }
  Mat u = matrix();
  psi.amp = u * psi.amp;
}

TargetOp target_single_site(const Geometry& g, int k, Axis axis, double angle,
                            int local_dim) {
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = local_dim;
  HamTerm term;
  term.kind = HamTerm::Kind::Single;
  term.a = g.flat(k);
  term.axis = axis;
  term.coeff = angle;
  t.generator.terms.push_back(term);
  t.time = 1.0;
  t.label = "single:" + to_string(axis) + ":" + std::to_string(k);
  return t;
}

TargetOp target_grid_single(const Geometry& g, int i, int j, Axis axis,
                            double angle) {
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  HamTerm term;
  term.kind = HamTerm::Kind::Single;
  term.a = g.flat(i, j);
  term.axis = axis;
  term.coeff = angle;
  t.generator.terms.push_back(term);
  t.label = "grid-single";
  return t;
}

TargetOp target_bond_zz(const Geometry& g, int k, double angle) {
  // exp(+i angle ZZ) = exp(-i H) with H = -angle ZZ
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  t.generator.terms.push_back(
      {HamTerm::Kind::ZZ, g.flat(k), g.flat(k + 1), Axis::X, -angle});
  t.label = "bond-zz:" + std::to_string(k);
  return t;
}

TargetOp target_grid_bond_zz(const Geometry& g, int i, int j, double angle) {
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  t.generator.terms.push_back(
      {HamTerm::Kind::ZZ, g.flat(i, j), g.flat(i, j + 1), Axis::X, -angle});
  t.label = "grid-bond-zz";
  return t;
}

TargetOp target_site_comb(const Geometry& g, int k, int spacing, Axis axis,
                          double angle) {
  if (!g.is_chain()) throw std::invalid_argument("site comb targets are 1D");
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  const int n = g.chain_len;
  int first = k;
  while (first - spacing >= 1) first -= spacing;
  for (int s = first; s <= n; s += spacing) {
    HamTerm term;
    term.kind = HamTerm::Kind::Single;
    term.a = g.flat(s);
    term.axis = axis;
    term.coeff = angle;
    t.generator.terms.push_back(term);
  }
  t.label = "site-comb";
  return t;
}

TargetOp target_bond_comb(const Geometry& g, int k, int spacing, double angle) {
  if (!g.is_chain()) throw std::invalid_argument("bond comb targets are 1D");
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  const int n = g.chain_len;
  int first = k;
  while (first - spacing >= 1) first -= spacing;
  for (int b = first; b <= n - 1; b += spacing) {
    t.generator.terms.push_back(
        {HamTerm::Kind::ZZ, g.flat(b), g.flat(b + 1), Axis::X, -angle});
  }
  t.label = "bond-comb";
  return t;
}

TargetOp target_bond_set_zz(const Geometry& g, const std::vector<Bond>& bonds,
                            double angle) {
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = 2;
  for (const Bond& b : bonds)
    t.generator.terms.push_back(
        {HamTerm::Kind::ZZ, b.first, b.second, Axis::X, -angle});
  t.label = "bond-set-zz";
  return t;
}

TargetOp target_identity(const Geometry& g, int local_dim) {
  TargetOp t;
  t.generator.geometry = g;
  t.generator.local_dim = local_dim;
  t.time = 0.0;
  t.label = "identity";
  return t;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

Axis axis_from(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw std::invalid_argument("bad axis in target: " + s);
}

}  // namespace

TargetOp parse_target(const std::string& spec, const Geometry& g,
                      int local_dim) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty target spec");
  const std::string& kind = parts[0];
  auto need = [&](size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("bad field count in target: " + spec);
  };
  if (kind == "identity") {
    need(1);
    return target_identity(g, local_dim);
  }
  if (kind == "single") {
    need(4);
    return target_single_site(g, std::stoi(parts[2]), axis_from(parts[1]),
                              std::stod(parts[3]), local_dim);
  }
  if (kind == "grid-single") {
    need(5);
    return target_grid_single(g, std::stoi(parts[2]), std::stoi(parts[3]),
                              axis_from(parts[1]), std::stod(parts[4]));
  }
  if (kind == "bond") {
    need(3);
    return target_bond_zz(g, std::stoi(parts[1]), std::stod(parts[2]));
  }
  if (kind == "grid-bond") {
    need(4);
    return target_grid_bond_zz(g, std::stoi(parts[1]), std::stoi(parts[2]),
                               std::stod(parts[3]));
  }
  if (kind == "comb") {
    need(4);
    return target_bond_comb(g, std::stoi(parts[1]), std::stoi(parts[2]),
                            std::stod(parts[3]));
  }
  if (kind == "interval") {
    need(2);
    // Alternating bonds 2, 4, 6, ... (even left endpoints).
    return target_bond_comb(g, 2, 2, std::stod(parts[1]));
  }
  if (kind == "site-comb") {
    need(5);
    return target_site_comb(g, std::stoi(parts[2]), std::stoi(parts[3]),
                            axis_from(parts[1]), std::stod(parts[4]));
  }
  if (kind == "dimer-exact") {
    need(2);
    double lambda = 0.5, tt = 1.0, j = 1.0;
    for (const std::string& kvs : split(parts[1], ',')) {
      const auto eq = kvs.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad dimer-exact field: " + kvs);
      const std::string key = kvs.substr(0, eq);
      const double v = std::stod(kvs.substr(eq + 1));
      if (key == "lambda") lambda = v;
      else if (key == "t") tt = v;
      else if (key == "j") j = v;
      else throw std::invalid_argument("unknown dimer-exact key: " + key);
    }
    if (!g.is_grid())
      throw std::invalid_argument("dimer-exact target needs a grid");
    TargetOp t;
    t.generator.geometry = g;
    t.generator.local_dim = 2;
    for (const Bond& b : bonds_of(BondSet::dimer_a(), g))
      t.generator.terms.push_back(
          {HamTerm::Kind::Heis, b.first, b.second, Axis::X, j});
    for (const Bond& b : bonds_of(BondSet::dimer_b(), g))
      t.generator.terms.push_back(
          {HamTerm::Kind::Heis, b.first, b.second, Axis::X, lambda * j});
    t.time = tt;
    t.label = "dimer-exact";
    return t;
  }
  throw std::invalid_argument("unknown target kind: " + kind);
}

}  // namespace qpfc
