#pragma once

#include <cstdint>
#include <vector>

#include "hfric/profile.hpp"

// Deterministic test profiles for the rough-sliding checks.
namespace hfric::synthetic {

struct Tone {
  double amplitude = 0.0;   // mm
  double wavelength = 0.0;  // mm
  double phase = 0.0;       // rad
};

// z(x) = sum A sin(2 pi x / w + phase) on n uniform points spaced dx.
profile::RawProfile multi_sine(std::size_t n, double dx, const std::vector<Tone>& tones);

// Band-limited self-affine profile: random-phase modes between
// lambda_min and lambda_max with amplitude ~ q^-(1/2 + hurst), scaled to the
// requested rms height. The generator is seeded, so output is reproducible.
struct FractalParams {
  std::size_t n = 4000;
  double dx = 0.02;          // mm
  double lambda_min = 0.25;  // mm
  double lambda_max = 10.0;  // mm
  double hurst = 0.8;
  double rms = 0.1;  // mm
  std::uint64_t seed = 20240531;
};
profile::RawProfile filtered_fractal(const FractalParams& p);

} // namespace hfric::synthetic
