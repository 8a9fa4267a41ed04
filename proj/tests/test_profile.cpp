#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hfric/errors.hpp"
#include "hfric/profile.hpp"
#include "hfric/spline.hpp"

using namespace hfric;
using namespace hfric::profile;

namespace {

RawProfile from_fn(std::size_t n, double x0, double x1, double (*f)(double)) {
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts[i] = {x, f(x)};
  }
  return make_raw_profile(std::move(pts), "fn");
}

double amplitude_interior(const RawProfile& p, double lo, double hi) {
  double m = 0.0;
  for (const auto& q : p.points)
    if (q.x >= lo && q.x <= hi) m = std::max(m, std::abs(q.z));
  return m;
}

// Natural cubic spline through (x, z) by a dense tridiagonal solve on second
// derivatives, written independently of the library.
struct OracleSpline {
  std::vector<double> x, z, M;
  OracleSpline(std::vector<double> xs, std::vector<double> zs) : x(std::move(xs)), z(std::move(zs)) {
    const std::size_t n = x.size();
    M.assign(n, 0.0);
    std::vector<double> a(n), b(n), c(n), d(n);
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      d[i] = (z[i + 1] - z[i]) / h1 - (z[i] - z[i - 1]) / h0;
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    M[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) M[i] = (d[i] - c[i] * M[i + 1]) / b[i];
  }
  double operator()(double t) const {
    std::size_t i = 0;
    while (i + 2 < x.size() && t >= x[i + 1]) ++i;
    const double h = x[i + 1] - x[i], A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
    return A * z[i] + B * z[i + 1] + ((A * A * A - A) * M[i] + (B * B * B - B) * M[i + 1]) * h * h / 6.0;
  }
};

} // namespace

TEST(ProfileLoad, FourRowsEcho) {
  std::istringstream in("0 0\n1 1\n2 0\n3 1\n");
  const auto p = parse_profile(in, "t");
  ASSERT_EQ(p.points.size(), 4u);
  EXPECT_EQ(p.points[1].x, 1.0);
  EXPECT_EQ(p.points[3].z, 1.0);
}

TEST(ProfileLoad, SortsOutOfOrderRows) {
  std::istringstream in("2 0\n0 0\n3 1\n1 1\n");
  const auto p = parse_profile(in, "t");
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(p.points[i].x, static_cast<double>(i));
  EXPECT_EQ(p.points[1].z, 1.0);
}

TEST(ProfileLoad, ThreePointsRejected) {
  std::istringstream in("0 0\n1 1\n2 0\n");
  EXPECT_THROW(parse_profile(in, "t"), TooFewPoints);
}

TEST(ProfileLoad, DuplicatesMergedByAveraging) {
  std::istringstream in("0 0\n1 1\n1.0000000001 3\n2 0\n3 1\n");
  const auto p = parse_profile(in, "t");
  ASSERT_EQ(p.points.size(), 4u);
  EXPECT_DOUBLE_EQ(p.points[1].z, 2.0);
}

TEST(ProfileLoad, MalformedRowReportsLine) {
  std::istringstream in("0 0\n1 1\n2 x\n3 1\n4 0\n");
  try {
    parse_profile(in, "t");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ProfileLoad, CommentsAndCommas) {
  std::istringstream in("# header\n0, 0\n1,1 # tail\n2,0\n3,1\n");
  EXPECT_EQ(parse_profile(in, "t").points.size(), 4u);
}

TEST(ProfileLoad, CsvHeaderTolerated) {
  std::istringstream in("x,z\n0,0\n1,1\n2,0\n3,1\n");
  EXPECT_EQ(parse_profile(in, "t", Format::csv).points.size(), 4u);
}

TEST(ProfileLoad, MissingFileIsInputError) {
  EXPECT_THROW(load_profile("/nonexistent/p.xy"), InputError);
}

TEST(ProfileLoad, WriteReadRoundTrip) {
  auto raw = from_fn(50, 0.0, 3.0, [](double x) { return std::sin(3 * x) + 0.1 * x; });
  const Profile p = rebase(raw);
  std::stringstream ss;
  write_profile(ss, p);
  const auto back = parse_profile(ss, "rt");
  ASSERT_EQ(back.points.size(), p.points.size());
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    EXPECT_EQ(back.points[i].x, p.points[i].x);
    EXPECT_EQ(back.points[i].z, p.points[i].z);
  }
}

TEST(ProfileLevel, ExactLineRemoved) {
  const auto p = level(from_fn(40, 0.0, 7.0, [](double x) { return 2.0 + 0.5 * x; }));
  for (const auto& q : p.points) EXPECT_NEAR(q.z, 0.0, 1e-10);
}

TEST(ProfileLevel, ConstantRemoved) {
  const auto p = level(from_fn(10, 0.0, 1.0, [](double) { return 5.0; }));
  for (const auto& q : p.points) EXPECT_NEAR(q.z, 0.0, 1e-10);
}

TEST(ProfileLevel, SineWithTiltMatchesDirectFit) {
  const auto raw = from_fn(1000, 0.0, 20.0 * std::numbers::pi, [](double x) { return std::sin(x) + 0.3 * x; });
  const auto p = level(raw);
  // Normal-equation oracle.
  double sx = 0, sz = 0, sxx = 0, sxz = 0;
  const double n = static_cast<double>(raw.points.size());
  for (const auto& q : raw.points) {
    sx += q.x, sz += q.z, sxx += q.x * q.x, sxz += q.x * q.z;
  }
  const double slope = (n * sxz - sx * sz) / (n * sxx - sx * sx);
  const double icpt = (sz - slope * sx) / n;
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    const auto& q = raw.points[i];
    EXPECT_NEAR(p.points[i].z, q.z - (icpt + slope * q.x), 1e-9);
  }
  const auto fit = fit_line(p.points);
  EXPECT_LT(std::abs(fit.slope), 1e-10);
  EXPECT_LT(std::abs(fit.intercept), 1e-10);
}

TEST(ProfileLevel, Idempotent) {
  const auto once = level(from_fn(300, 0.0, 9.0, [](double x) { return std::cos(2 * x) + x * x * 0.01; }));
  const auto twice = level(once);
  for (std::size_t i = 0; i < once.points.size(); ++i) EXPECT_NEAR(once.points[i].z, twice.points[i].z, 1e-10);
}

TEST(ProfileFilter, ConstantUnchanged) {
  const auto p = gaussian_s_filter(from_fn(500, 0.0, 10.0, [](double) { return 3.0; }), 0.5);
  for (const auto& q : p.points) EXPECT_NEAR(q.z, 3.0, 1e-12);
}

TEST(ProfileFilter, HalfTransmissionAtCutoff) {
  const double lc = 0.5;
  auto raw = from_fn(4001, 0.0, 20.0, [](double x) { return std::sin(2 * std::numbers::pi * x / 0.5); });
  const auto f = gaussian_s_filter(raw, lc);
  EXPECT_NEAR(amplitude_interior(f, 5 * lc, 20.0 - 5 * lc), 0.5, 0.01);
}

TEST(ProfileFilter, LongWavelengthMatchesTransmissionFormula) {
  const double lc = 0.1, w = 20 * lc;
  auto raw = from_fn(2001, 0.0, 20.0, [](double x) { return std::sin(2 * std::numbers::pi * x / 2.0); });
  const auto f = gaussian_s_filter(raw, lc);
  // Continuous Gaussian transmission exp(-pi (a lc / w)^2), a = sqrt(ln2 / pi).
  const double alpha = std::sqrt(std::log(2.0) / std::numbers::pi);
  const double expected = std::exp(-std::numbers::pi * alpha * alpha * (lc / w) * (lc / w));
  EXPECT_NEAR(amplitude_interior(f, 5 * lc, 20.0 - 5 * lc), expected, 2e-3);
  EXPECT_GT(amplitude_interior(f, 5 * lc, 20.0 - 5 * lc), 0.995);
}

TEST(ProfileFilter, CutoffTooLarge) {
  EXPECT_THROW(gaussian_s_filter(from_fn(100, 0.0, 1.0, [](double x) { return x; }), 0.2), CutoffTooLarge);
}

TEST(ProfileFilter, DcGain) {
  auto raw = from_fn(6001, 0.0, 60.0, [](double x) { return 1.0 + 0.3 * std::sin(7 * x) + 0.1 * std::cos(31 * x); });
  const auto f = gaussian_s_filter(raw, 0.25);
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < raw.points.size(); ++i) m0 += raw.points[i].z, m1 += f.points[i].z;
  EXPECT_NEAR(m1 / m0, 1.0, 1e-4);
}

TEST(ProfileRebase, ShiftArithmetic) {
  const auto p = rebase(make_raw_profile({{5, 3}, {6, 1}, {7, 2}, {8, 4}}, "t"));
  EXPECT_EQ(p.points[0].x, 0.0);
  EXPECT_EQ(p.points[0].z, 2.0);
  EXPECT_EQ(p.points[1].z, 0.0);
  EXPECT_EQ(p.points[2].z, 1.0);
}

TEST(ProfileRebase, NegativeElevations) {
  const auto p = rebase(make_raw_profile({{0, -2}, {1, -5}, {2, -4}, {3, -3}}, "t"));
  EXPECT_EQ(p.points[0].z, 3.0);
  EXPECT_EQ(p.points[1].z, 0.0);
}

TEST(ProfileRebase, Idempotent) {
  const auto p = rebase(make_raw_profile({{5, 3}, {6, 1}, {7, 2}, {8, 4}}, "t"));
  const auto q = rebase(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p.points[i].x, q.points[i].x);
    EXPECT_EQ(p.points[i].z, q.points[i].z);
  }
}

TEST(ProfileDownsample, IdentityAndCounting) {
  std::vector<Point> pts;
  for (int i = 0; i < 11; ++i) pts.push_back({double(i), double(i % 3)});
  const auto p = rebase(make_raw_profile(pts, "t"));
  EXPECT_EQ(downsample(p, 1).size(), 11u);
  const auto d = downsample(p, 2);
  ASSERT_EQ(d.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(d.points[i].x, 2.0 * i);
}

TEST(ProfileDownsample, TwelveThousandByFive) {
  std::vector<Point> pts;
  for (int i = 0; i < 12000; ++i) pts.push_back({0.01 * i, std::sin(0.1 * i)});
  const auto p = rebase(make_raw_profile(pts, "t"));
  // Index set {0, 5, ..., 11995} plus the forced last point 11999.
  std::size_t expected = 0;
  for (int i = 0; i < 12000; i += 5) ++expected;
  if (11999 % 5 != 0) ++expected;
  EXPECT_EQ(downsample(p, 5).size(), expected);
  EXPECT_EQ(expected, 2401u);
}

TEST(ProfileDownsample, TooFewPoints) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({double(i), double(i % 2)});
  EXPECT_THROW(downsample(rebase(make_raw_profile(pts, "t")), 5), TooFewPoints);
}

TEST(ProfileDownsample, Nesting) {
  std::vector<Point> pts;
  for (int i = 0; i < 203; ++i) pts.push_back({0.01 * i + 0.001 * (i % 3), std::cos(0.2 * i)});
  const auto p = rebase(make_raw_profile(pts, "t"));
  const auto a = downsample(downsample(p, 2), 2);
  const auto b = downsample(p, 4);
  // Same points except the forced final point of the inner pass.
  std::size_t j = 0;
  for (const auto& q : b.points) {
    while (j < a.size() && a.points[j].x < q.x - 1e-12) ++j;
    ASSERT_LT(j, a.size());
    EXPECT_NEAR(a.points[j].x, q.x, 1e-12);
  }
  EXPECT_LE(a.size(), b.size() + 1);
}

TEST(Spline, ReproducesLine) {
  std::vector<double> x{0, 0.3, 1.1, 2.0, 2.2, 3.5}, z;
  for (double v : x) z.push_back(1.5 - 0.7 * v);
  const auto s = build_spline(x, z);
  for (double t = 0.0; t <= 3.5; t += 0.01) {
    EXPECT_NEAR(eval_spline(s, t), 1.5 - 0.7 * t, 1e-12);
    EXPECT_NEAR(eval_spline_slope(s, t), -0.7, 1e-12);
  }
}

TEST(Spline, CubicAgainstDenseOracle) {
  std::vector<double> x{0, 0.25, 0.5, 0.75, 1.0}, z;
  for (double v : x) z.push_back(v * v * v);
  const auto s = build_spline(x, z);
  const OracleSpline o(x, z);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double m = 0.5 * (x[i] + x[i + 1]);
    EXPECT_NEAR(eval_spline(s, m), o(m), 1e-10);
  }
}

TEST(Spline, KnotsReproducedAndNaturalEnds) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> x, z;
  double xv = 0.0;
  for (int i = 0; i < 200; ++i) {
    xv += 0.005 + 0.02 * U(rng);
    x.push_back(xv);
    z.push_back(U(rng));
  }
  const auto s = build_spline(x, z);
  double zmax = 0;
  for (double v : z) zmax = std::max(zmax, std::abs(v));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LE(std::abs(eval_spline(s, x[i]) - z[i]), 1e-12 * zmax);
  EXPECT_NEAR(eval_spline_curvature(s, x.front()), 0.0, 1e-9);
  EXPECT_NEAR(eval_spline_curvature(s, x.back()), 0.0, 1e-9);
  // C1 and C2 at interior knots, from the one-sided polynomial pieces.
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const auto& L = s.coeffs[i - 1];
    const auto& R = s.coeffs[i];
    const double h = x[i] - x[i - 1];
    const double d1 = L[1] + 2 * L[2] * h + 3 * L[3] * h * h;
    const double d2 = 2 * L[2] + 6 * L[3] * h;
    EXPECT_NEAR(d1, R[1], 1e-9 * std::max(1.0, std::abs(R[1])));
    EXPECT_NEAR(d2, 2 * R[2], 1e-9 * std::max(1.0, std::abs(R[2])));
  }
}

TEST(Spline, SlopeAgainstFiniteDifferences) {
  std::vector<double> x, z;
  for (int i = 0; i <= 60; ++i) {
    x.push_back(0.05 * i);
    z.push_back(std::sin(2.0 * x.back()));
  }
  const auto s = build_spline(x, z);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double m = 0.5 * (x[i] + x[i + 1]);
    const double h = 0.05 / 100.0;
    const double fd = (eval_spline(s, m + h) - eval_spline(s, m - h)) / (2 * h);
    const double sl = eval_spline_slope(s, m);
    EXPECT_NEAR(sl, fd, 1e-6 * std::max(1.0, std::abs(sl)));
  }
}

TEST(Spline, NonMonotonicKnots) {
  std::vector<double> x{0, 1, 1, 2}, z{0, 1, 2, 3};
  EXPECT_THROW(build_spline(x, z), NonMonotonicKnots);
}

TEST(Bracket, HalfOpenOnKnot) {
  std::vector<double> k{0, 1, 2, 3, 4};
  const auto b = locate_bracket(k, 2.0);
  EXPECT_EQ(b.trailing, 2u);
  EXPECT_EQ(b.leading, 3u);
  EXPECT_FALSE(b.clamped);
}

TEST(Bracket, UniformGridInterior) {
  std::vector<double> k;
  for (int i = 0; i < 100; ++i) k.push_back(0.1 * i);
  const auto b = locate_bracket(k, 4.15);
  EXPECT_EQ(b.trailing, 41u);
  EXPECT_EQ(b.leading, 42u);
}

TEST(Bracket, ClampBelowAndAbove) {
  std::vector<double> k{0, 1, 2, 3};
  auto b = locate_bracket(k, -1.0);
  EXPECT_EQ(b.trailing, 0u);
  EXPECT_TRUE(b.clamped);
  b = locate_bracket(k, 7.0);
  EXPECT_EQ(b.trailing, 2u);
  EXPECT_EQ(b.leading, 3u);
  EXPECT_TRUE(b.clamped);
}

TEST(Bracket, MillionRandomQueriesMatchLinearScan) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> k;
  double x = 0.0;
  for (int i = 0; i < 997; ++i) {
    k.push_back(x);
    x += 0.001 + 0.01 * U(rng);
  }
  const double lo = k.front(), hi = k.back();
  std::size_t bad = 0;
  for (int q = 0; q < 1000000; ++q) {
    const double t = lo + (hi - lo) * U(rng);
    std::size_t i = 0;
    while (i + 2 < k.size() && k[i + 1] <= t) ++i;
    const auto b = locate_bracket(k, t);
    if (b.trailing != i || b.leading != i + 1) ++bad;
    if (q % 1000 == 0 && q) {
      // also exact-knot hits
      const std::size_t j = static_cast<std::size_t>(U(rng) * (k.size() - 2));
      const auto e = locate_bracket(k, k[j]);
      if (e.trailing != j) ++bad;
    }
  }
  EXPECT_EQ(bad, 0u);
}

TEST(Spline, ClampLogRecordsOutOfRange) {
  std::vector<double> x{0, 1, 2, 3}, z{0, 1, 0, 1};
  const auto s = build_spline(x, z);
  ClampLog log;
  eval_spline(s, 1.5, &log);
  EXPECT_FALSE(log.warned());
  eval_spline(s, -0.5, &log);
  eval_spline(s, 4.0, &log);
  EXPECT_TRUE(log.warned());
  EXPECT_EQ(log.count(), 2u);
  EXPECT_DOUBLE_EQ(log.first_x(), -0.5);
  EXPECT_FALSE(log.message().empty());
}
