#include "qpfc/pattern.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qpfc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FitResult {
  Eigen::Vector3d c;
  double residual = 0.0;
};

// Least-squares fit of the target onto span{1, cos(2 pi r / P),
// sin(2 pi r / P)} over residues r; SVD keeps degenerate periods (P <= 2,
// where the sine column vanishes) well-defined.
FitResult fit_span(const std::vector<double>& v) {
  const int p = static_cast<int>(v.size());
  Eigen::MatrixXd a(p, 3);
  Eigen::VectorXd b(p);
  for (int r = 0; r < p; ++r) {
    a(r, 0) = 1.0;
    a(r, 1) = std::cos(kTwoPi * r / p);
    a(r, 2) = std::sin(kTwoPi * r / p);
    b(r) = v[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  FitResult f;
  f.c = svd.solve(b);
  f.residual = (a * f.c - b).norm();
  return f;
}

}  // namespace

SynthesisResult synthesize(const AnglePattern& pattern, int max_pulses,
                           Direction dir, int shift_window) {
  const int p = pattern.period;
  if (p < 1 || static_cast<int>(pattern.values.size()) != p)
    throw std::invalid_argument("pattern values must match the period");
  if (max_pulses < 1) throw std::invalid_argument("max_pulses must be >= 1");

  if (p == 1) {
    // Every site sits in the same residue class: one uniform pulse suffices.
    SynthesisResult flat;
    flat.feasible = true;
    flat.shifts = {0};
    if (std::fabs(pattern.values[0]) > 1e-12)
      flat.pulses.push_back(PulseSpec::uniform(pattern.axis, pattern.values[0]));
    return flat;
  }

  SynthesisResult best;
  best.span_distance = std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_c = Eigen::Vector3d::Zero();

  // Enumerate integer 2pi shifts per residue class.
  const int w = shift_window;
  const int choices = 2 * w + 1;
  std::int64_t total = 1;
  for (int r = 0; r < p; ++r) total *= choices;
  std::vector<double> v(p);
  std::vector<int> shifts(p);
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (int r = 0; r < p; ++r) {
      shifts[r] = static_cast<int>(c % choices) - w;
      c /= choices;
      v[r] = pattern.values[r] + kTwoPi * shifts[r];
    }
    const FitResult f = fit_span(v);
    // Prefer strictly smaller residuals; among equally feasible shifts
    // prefer the smallest-amplitude coefficient vector (degenerate periods
    // admit many exact fits differing by whole turns).
    bool better = f.residual < best.span_distance - 1e-12;
    if (!better && f.residual <= 1e-9 && best.span_distance <= 1e-9)
      better = f.c.norm() < best_c.norm() - 1e-12;
    if (better) {
      best.span_distance = f.residual;
      best.shifts = shifts;
      best_c = f.c;
    }
  }

  if (best.span_distance > 1e-9) return best;  // feasible stays false

  const double c0 = best_c(0), c1 = best_c(1), c2 = best_c(2);
  const double rho = std::hypot(c1, c2);
  if (rho <= 1e-12) {
    if (std::fabs(c0) > 1e-12)
      best.pulses.push_back(PulseSpec::uniform(pattern.axis, c0));
  } else if (std::fabs(rho - std::fabs(c0)) <= 1e-12) {
    const double s = c0 >= 0 ? 1.0 : -1.0;
    const double phi = std::atan2(-c2 * s, -c1 * s);
    best.pulses.push_back(PulseSpec::periodic(pattern.axis, c0, p,
                                              phi * p / kTwoPi, dir));
  } else {
    if (max_pulses < 2) {
      best.span_distance = 0.0;
      return best;  // representable, but not within the pulse budget
    }
    // Triangle construction: split (c1, c2) between two opposed profile
    // directions so the amplitudes sum to c0 and difference to |(c1, c2)|.
    const double th1 = (c0 + rho) / 2.0;
    const double th2 = (c0 - rho) / 2.0;
    const double phi1 = std::atan2(-c2, -c1);
    const double phi2 = std::atan2(c2, c1);
    best.pulses.push_back(PulseSpec::periodic(pattern.axis, th1, p,
                                              phi1 * p / kTwoPi, dir));
    best.pulses.push_back(PulseSpec::periodic(pattern.axis, th2, p,
                                              phi2 * p / kTwoPi, dir));
  }
  best.feasible = true;
  return best;
}

std::vector<bool> mask_flip_parity(const std::vector<PulseSpec>& mask,
                                   const Geometry& g) {
  std::vector<double> total(g.sites(), 0.0);
  for (const PulseSpec& p : mask) {
    if (!p.is_rotation() || p.kind == PulseKind::SubspacePeriodic)
      throw std::invalid_argument("mask pulses must be site rotations");
    const std::vector<double> prof = angle_profile(p, g);
    for (int s = 0; s < g.sites(); ++s) total[s] += prof[s];
  }
  std::vector<bool> flip(g.sites());
  for (int s = 0; s < g.sites(); ++s) {
    double x = std::fmod(total[s], kPi);
    if (x < 0) x += kPi;
    if (std::fabs(x - kPi / 2.0) <= 1e-9) {
      flip[s] = true;
    } else if (x <= 1e-9 || x >= kPi - 1e-9) {
      flip[s] = false;
    } else {
      throw std::invalid_argument(
          "mask is not a flip pattern: site angle not 0 or pi/2 mod pi");
    }
  }
  return flip;
}

std::vector<Bond> mask_surviving_bonds(const std::vector<PulseSpec>& mask,
                                       const BondSet& bonds,
                                       const Geometry& g) {
  const std::vector<bool> flip = mask_flip_parity(mask, g);
  std::vector<Bond> out;
  for (const Bond& b : bonds_of(bonds, g))
    if (flip[b.first] == flip[b.second]) out.push_back(b);
  return out;
}

Schedule masked_ising(const std::vector<PulseSpec>& mask, const BondSet& bonds,
                      double theta, const Geometry& g) {
  for (const PulseSpec& p : mask)
    if (p.axis == Axis::Z)
      throw std::invalid_argument("mask axis must anticommute with z");
  mask_flip_parity(mask, g);  // validates the flip property

  Schedule s;
  s.geometry = g;
  s.local_dim = 2;
  const PulseSpec half = PulseSpec::ising(theta / 2.0, bonds);
  for (const PulseSpec& p : mask) s.pulses.push_back(p);
  s.pulses.push_back(half);
  for (auto it = mask.rbegin(); it != mask.rend(); ++it)
    s.pulses.push_back(it->inverse());
  s.pulses.push_back(half);
  return s;
}

}  // namespace qpfc
