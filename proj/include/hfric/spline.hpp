#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hfric/profile.hpp"

namespace hfric::profile {

// Natural cubic spline. On interval i, with d = x - knots[i]:
//   z(x) = c[0] + c[1] d + c[2] d^2 + c[3] d^3
struct SplineTable {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<std::array<double, 4>> coeffs;  // one row per interval

  std::size_t intervals() const { return coeffs.size(); }
  double x_min() const { return knots.front(); }
  double x_max() const { return knots.back(); }
};

// Records evaluations that fell outside the knot range. Thread-safe.
class ClampLog {
public:
  void record(double x) noexcept;
  bool warned() const noexcept { return count_.load(std::memory_order_relaxed) > 0; }
  std::size_t count() const noexcept { return count_.load(std::memory_order_relaxed); }
  double first_x() const noexcept { return first_x_.load(std::memory_order_relaxed); }
  // Empty when nothing was clamped.
  std::string message() const;

private:
  std::atomic<std::size_t> count_{0};
  std::atomic<double> first_x_{0.0};
};

// Throws NonMonotonicKnots, TooFewPoints.
SplineTable build_spline(std::span<const double> x, std::span<const double> z);
SplineTable build_spline(const Profile& p);

// knots[trailing] <= x < knots[leading], leading = trailing + 1; x outside the
// range maps to the first/last interval with `clamped` set.
struct Bracket {
  std::size_t trailing = 0;
  std::size_t leading = 1;
  bool clamped = false;
};
Bracket locate_bracket(std::span<const double> knots, double x);

double eval_spline(const SplineTable& s, double x, ClampLog* log = nullptr);
double eval_spline_slope(const SplineTable& s, double x, ClampLog* log = nullptr);
double eval_spline_curvature(const SplineTable& s, double x);

} // namespace hfric::profile
