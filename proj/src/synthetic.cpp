#include "hfric/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hfric/errors.hpp"

namespace hfric::synthetic {

profile::RawProfile multi_sine(std::size_t n, double dx, const std::vector<Tone>& tones) {
  std::vector<profile::Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = dx * static_cast<double>(i);
    double z = 0.0;
    for (const auto& t : tones) z += t.amplitude * std::sin(2.0 * std::numbers::pi * x / t.wavelength + t.phase);
    pts[i] = {x, z};
  }
  return profile::make_raw_profile(std::move(pts), "multi-sine");
}

profile::RawProfile filtered_fractal(const FractalParams& p) {
  if (p.n < profile::kMinPoints || !(p.dx > 0.0) || !(p.lambda_min > 0.0) || p.lambda_max < p.lambda_min) {
    throw InputError("invalid fractal profile parameters");
  }
  const double length = p.dx * static_cast<double>(p.n - 1);
  // Mode k has wavelength length / k.
  const int k_lo = std::max(1, static_cast<int>(std::ceil(length / p.lambda_max)));
  const int k_hi = static_cast<int>(std::floor(length / p.lambda_min));
  if (k_hi < k_lo) throw InputError("fractal band is empty for this profile length");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> amp, q, ph;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double qk = 2.0 * std::numbers::pi * k / length;
    q.push_back(qk);
    amp.push_back(std::pow(qk, -(0.5 + p.hurst)));
    ph.push_back(phase(rng));
  }
  std::vector<profile::Point> pts(p.n);
  double s2 = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    const double x = p.dx * static_cast<double>(i);
    double z = 0.0;
    for (std::size_t m = 0; m < q.size(); ++m) z += amp[m] * std::sin(q[m] * x + ph[m]);
    pts[i] = {x, z};
    s2 += z * z;
  }
  const double scale = p.rms / std::sqrt(s2 / static_cast<double>(p.n));
  for (auto& pt : pts) pt.z *= scale;
  return profile::make_raw_profile(std::move(pts), "fractal");
}

} // namespace hfric::synthetic
