#pragma once

#include <vector>

#include "qpfc/engine.hpp"

// Synthesis of arbitrary periodic per-site angle patterns (modulo 2pi) from
// one or two same-period cosine-profile pulses, and flip-mask conjugation of
// global Ising pulses into bond-subset evolutions.

namespace qpfc {

struct AnglePattern {
  int period = 1;
  // Target angle for residue class r = site-coordinate mod period, r in
  // [0, period).
  std::vector<double> values;
  Axis axis = Axis::X;
};

struct SynthesisResult {
  bool feasible = false;
  std::vector<PulseSpec> pulses;
  // Per-residue 2pi multiples added to land in the achievable span.
  std::vector<int> shifts;
  // Distance of the (best-shifted) target from the achievable span.
  double span_distance = 0.0;
};

// Finds pulses of the pattern's period whose summed profiles match the target
// at every residue class modulo 2pi within 1e-9. Searches integer 2pi-shift
// vectors with entries in [-shift_window, shift_window]. Infeasible patterns
// give feasible=false with the closest span distance.
SynthesisResult synthesize(const AnglePattern& pattern, int max_pulses,
                           Direction dir = Direction::Chain,
                           int shift_window = 2);

// Flip parity (rotation by pi about the pulse axis) per site of the summed
// mask profile; throws unless every site angle is 0 or pi/2 modulo pi.
std::vector<bool> mask_flip_parity(const std::vector<PulseSpec>& mask,
                                   const Geometry& g);

// Bonds of `bonds` whose endpoints have equal flip parity under the mask:
// these survive (doubled) in masked_ising; all others cancel.
std::vector<Bond> mask_surviving_bonds(const std::vector<PulseSpec>& mask,
                                       const BondSet& bonds,
                                       const Geometry& g);

// [mask, ISING(theta/2, bonds), mask^-1, ISING(theta/2, bonds)]: realizes
// exp(+i theta sum over surviving bonds of ZZ). The mask axis must
// anticommute with z (x or y).
Schedule masked_ising(const std::vector<PulseSpec>& mask, const BondSet& bonds,
                      double theta, const Geometry& g);

}  // namespace qpfc
