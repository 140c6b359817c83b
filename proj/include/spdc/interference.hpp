#pragma once

// Count probability behind an unbalanced polarization interferometer as a
// function of the delay tau, and the width of its fringe envelope.

#include <vector>

#include "spdc/dispersion.hpp"

namespace spdc {

struct FringePattern {
  std::vector<double> tau;          // s
  std::vector<double> probability;  // P1(tau), unnormalized
  double reference = 0.0;           // P1(0) = integral of the spectral weight
  double carrier_omega = 0.0;
};

// P1(tau) = integral dOmega w(Omega) |1 + exp(i (Omega0 + Omega) tau)|^2 / 4,
// trapezoidal in Omega.
FringePattern fringe_pattern(const Spectrum& spectrum, const std::vector<double>& tau_grid);

inline constexpr std::size_t kDefaultTauPoints = 8192;
inline constexpr double kDefaultTauHalfSpan = 300e-15;

std::vector<double> tau_grid(double half_span = kDefaultTauHalfSpan,
                             std::size_t points = kDefaultTauPoints);

// (max - min) / (max + min), with max and min read from upper and lower
// envelopes drawn through the fringe extrema (one of each per carrier
// period). Throws DomainError("undersampled") when a period holds fewer than
// 8 samples.
std::vector<double> fringe_visibility(const FringePattern& pattern);

// FWHM of the fringe-visibility envelope (first half-maximum crossing on each
// side of the envelope peak), in seconds.
double envelope_width(const FringePattern& pattern);

}  // namespace spdc
