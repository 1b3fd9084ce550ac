#include "qpfc/dioph.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpfc/compiler.hpp"
#include "qpfc/targets.hpp"

namespace qpfc {

namespace {
constexpr double kPi = std::numbers::pi;

// Distance to the nearest integer, and that integer.
double nearest_int_dist(double x, std::int64_t& which) {
  const double r = std::round(x);
  which = static_cast<std::int64_t>(r);
  return x - r;
}
}  // namespace

AnConstraintSystem AnConstraintSystem::at(int n) {
  if (n < 1) throw std::invalid_argument("constraint level must be >= 1");
  AnConstraintSystem s;
  s.n = n;
  const double p3n = std::pow(3.0, n);
  const double p3n1 = std::pow(3.0, n - 1);
  s.c1 = std::cos((p3n1 + 1) * kPi / p3n) - std::cos((p3n1 - 1) * kPi / p3n);
  s.c2 = std::cos((p3n - 1) * kPi / p3n) - std::cos((p3n1 - 1) * kPi / p3n);
  s.c3 = 1.0 - std::cos((p3n - 1) * kPi / p3n);
  return s;
}

AnSolution solve_an(int n, double tol, std::int64_t bound) {
  if (n < 1) throw std::invalid_argument("solve_an: level must be >= 1");
  if (tol < 0) throw std::invalid_argument("solve_an: negative tolerance");
  if (bound < 1) throw std::invalid_argument("solve_an: bound must be >= 1");
  const AnConstraintSystem sys = AnConstraintSystem::at(n);

  AnSolution best;
  best.n = n;
  best.tol = tol;
  best.best_max_residual = std::numeric_limits<double>::infinity();
  for (std::int64_t p = -bound; p <= bound; ++p) {
    const double an = (2 * p + 1) * kPi / (2.0 * sys.c1);
    std::int64_t l = 0, m = 0;
    const double r2 = nearest_int_dist(an * sys.c2 / (kPi / 2.0), l);
    const double r3 = nearest_int_dist(an * sys.c3 / (kPi / 2.0), m);
    const double maxr = std::max(std::fabs(r2), std::fabs(r3));
    bool better = maxr < best.best_max_residual - 1e-15;
    if (!better && maxr < best.best_max_residual + 1e-15) {
      // Deterministic tie-break: smallest amplitude magnitude, then the
      // positive amplitude.
      const double mag = std::fabs(an), bmag = std::fabs(best.an);
      better = mag < bmag - 1e-15 ||
               (std::fabs(mag - bmag) <= 1e-15 && an > best.an);
    }
    if (better) {
      best.an = an;
      best.p = p;
      best.l = l;
      best.m_eq4 = m;
      best.r2 = r2;
      best.r3 = r3;
      best.best_max_residual = maxr;
    }
  }
  best.found = best.best_max_residual <= tol;
  return best;
}

ResidualReport residual_to_infidelity(const AnSolution& sol, int n_sites,
                                      int level, int k) {
  if (sol.n != level)
    throw std::invalid_argument("residual_to_infidelity: level mismatch");
  const Geometry g = Geometry::chain(n_sites);
  const double base_theta = 0.1;

  std::vector<AnSolution> table;
  table.push_back(sol);
  Schedule stage =
      compile_bond_comb_partial(g, k, base_theta, level, table, Direction::Chain);

  const double comb_angle = std::ldexp(base_theta, level);  // 2^level * theta
  const int spacing = 1;
  (void)spacing;
  TargetOp ideal = target_bond_comb(
      g, k, static_cast<int>(std::llround(std::pow(3.0, level))), comb_angle);

  ResidualReport rep;
  rep.residual = std::max(std::fabs(sol.r2), std::fabs(sol.r3));
  FidelityReport f = compare_fidelity(stage, ideal.op());
  rep.infidelity = 1.0 - f.f;
  return rep;
}

}  // namespace qpfc
