#include "hfric/spline.hpp"

#include <algorithm>
#include <sstream>

#include "hfric/errors.hpp"

namespace hfric::profile {

void ClampLog::record(double x) noexcept {
  if (count_.fetch_add(1, std::memory_order_relaxed) == 0) {
    first_x_.store(x, std::memory_order_relaxed);
  }
}

std::string ClampLog::message() const {
  if (!warned()) return {};
  std::ostringstream os;
  os << "ClampWarning: " << count() << " spline evaluation(s) outside the knot range (first at x="
     << first_x() << " mm)";
  return os.str();
}

SplineTable build_spline(std::span<const double> x, std::span<const double> z) {
  const std::size_t n = x.size();
  if (n != z.size()) throw InputError("spline: x and z sizes differ");
  if (n < kMinPoints) throw TooFewPoints("spline needs at least 4 knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) {
      throw NonMonotonicKnots("spline knots not strictly increasing at index " + std::to_string(i));
    }
  }
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  // Second derivatives at the knots; natural ends M[0] = M[n-1] = 0.
  std::vector<double> m(n, 0.0);
  const std::size_t ni = n - 2;
  std::vector<double> diag(ni), upper(ni), rhs(ni);
  for (std::size_t k = 0; k < ni; ++k) {
    const std::size_t i = k + 1;
    diag[k] = 2.0 * (h[i - 1] + h[i]);
    upper[k] = h[i];
    rhs[k] = 6.0 * ((z[i + 1] - z[i]) / h[i] - (z[i] - z[i - 1]) / h[i - 1]);
  }
  // Thomas algorithm; sub-diagonal entry of row k is h[k].
  for (std::size_t k = 1; k < ni; ++k) {
    const double w = h[k] / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  for (std::size_t k = ni; k-- > 0;) {
    const double next = k + 1 < ni ? m[k + 2] : 0.0;
    m[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
  }

  SplineTable s;
  s.knots.assign(x.begin(), x.end());
  s.values.assign(z.begin(), z.end());
  s.coeffs.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto& c = s.coeffs[i];
    c[0] = z[i];
    c[1] = (z[i + 1] - z[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    c[2] = 0.5 * m[i];
    c[3] = (m[i + 1] - m[i]) / (6.0 * h[i]);
  }
  return s;
}

SplineTable build_spline(const Profile& p) {
  std::vector<double> x(p.size()), z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    x[i] = p.points[i].x;
    z[i] = p.points[i].z;
  }
  return build_spline(x, z);
}

Bracket locate_bracket(std::span<const double> knots, double x) {
  const std::size_t n = knots.size();
  if (x < knots.front()) return {0, 1, true};
  if (x > knots.back()) return {n - 2, n - 1, true};
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t k = static_cast<std::size_t>(it - knots.begin()) - 1;
  if (k > n - 2) k = n - 2;  // x == last knot
  return {k, k + 1, false};
}

namespace {

struct Located {
  std::size_t i;
  double d;
  bool at_last;
};

Located locate(const SplineTable& s, double x, ClampLog* log) {
  const Bracket b = locate_bracket(s.knots, x);
  if (b.clamped) {
    if (log) log->record(x);
    x = std::clamp(x, s.x_min(), s.x_max());
  }
  return {b.trailing, x - s.knots[b.trailing], x == s.x_max()};
}

} // namespace

double eval_spline(const SplineTable& s, double x, ClampLog* log) {
  const Located at = locate(s, x, log);
  if (at.at_last) return s.values.back();
  const auto& c = s.coeffs[at.i];
  return c[0] + at.d * (c[1] + at.d * (c[2] + at.d * c[3]));
}

double eval_spline_slope(const SplineTable& s, double x, ClampLog* log) {
  const Located at = locate(s, x, log);
  const auto& c = s.coeffs[at.i];
  return c[1] + at.d * (2.0 * c[2] + 3.0 * at.d * c[3]);
}

double eval_spline_curvature(const SplineTable& s, double x) {
  const Located at = locate(s, x, nullptr);
  const auto& c = s.coeffs[at.i];
  return 2.0 * c[2] + 6.0 * at.d * c[3];
}

} // namespace hfric::profile
