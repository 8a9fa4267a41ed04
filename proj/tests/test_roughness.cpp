#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hfric/errors.hpp"
#include "hfric/profile.hpp"
#include "hfric/roughness.hpp"
#include "support/roughness_oracle.hpp"

using namespace hfric;
using namespace hfric::roughness;
using profile::Point;
using namespace hfric::testing;

TEST(Amplitude, SineIntegrals) {
  const double a = 0.7;
  // Cosine phase: its least-squares line over whole periods is flat.
  const Profile p = leveled(4001, 0.0, 40.0, [&](double x) { return a * std::cos(2 * kPi * x / 10.0); });
  const AmplitudeParams r = amplitude_params(p);
  EXPECT_NEAR(r.Pa, 2 * a / kPi, 0.005 * 2 * a / kPi);
  EXPECT_NEAR(r.Pq, a / std::sqrt(2.0), 0.005 * a / std::sqrt(2.0));
  EXPECT_NEAR(r.Pt, 2 * a, 0.005 * 2 * a);
}

TEST(Amplitude, ConstantIsZero) {
  const AmplitudeParams r = amplitude_params(direct(50, 0.0, 5.0, [](double) { return 3.0; }));
  EXPECT_NEAR(r.Pa, 0.0, 1e-14);
  EXPECT_NEAR(r.Pq, 0.0, 1e-14);
  EXPECT_EQ(r.Pt, 0.0);
}

TEST(Amplitude, TriangleClosedFormAndQuadrature) {
  const double a = 1.3, w = 4.0;
  const Profile p = direct(2001, 0.0, 5 * w, [&](double x) { return triangle(x, a, w); });
  const AmplitudeParams r = amplitude_params(p);
  EXPECT_NEAR(r.Pa, a / 2, 0.005 * a / 2);
  EXPECT_NEAR(r.Pq, a / std::sqrt(3.0), 0.005 * a / std::sqrt(3.0));
  EXPECT_NEAR(r.Pt, 2 * a, 0.005 * 2 * a);

  // Dense midpoint quadrature of the analytic wave.
  const int n = 2'000'000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = triangle((i + 0.5) * 5 * w / n, a, w);
    s1 += std::abs(z);
    s2 += z * z;
  }
  EXPECT_NEAR(r.Pa, s1 / n, 1e-4);
  EXPECT_NEAR(r.Pq, std::sqrt(s2 / n), 1e-4);
}

TEST(Sections, SineFiveSections) {
  const double a = 0.4;
  const Profile p = leveled(2001, 0.0, 100.0, [&](double x) { return a * std::cos(2 * kPi * x / 10.0); });
  const SectionParams s = section_params(p, 5);
  EXPECT_NEAR(s.Ppt, a, 0.01 * a);
  EXPECT_NEAR(s.Pvt, a, 0.01 * a);
  EXPECT_NEAR(s.Pz, 2 * a, 0.02 * a);
}

TEST(Sections, SpikeMatchesBruteForce) {
  const double h = 2.5;
  const Profile p = direct(1001, 0.0, 100.0, [&](double x) { return std::abs(x - 50.0) < 1e-9 ? h : 0.0; });
  const SectionParams s = section_params(p, 5);

  const auto [c0, c1] = ls_line(p.points);
  std::array<double, 5> pk{}, pt{};
  pk.fill(-1e300);
  pt.fill(-1e300);
  for (const auto& q : p.points) {
    const int k = std::min(4, static_cast<int>(q.x / 20.0));
    const double d = q.z - (c0 + c1 * q.x);
    pk[k] = std::max(pk[k], d);
    pt[k] = std::max(pt[k], -d);
  }
  double pz = 0;
  for (int k = 0; k < 5; ++k) pz += (pk[k] + pt[k]) / 5;
  EXPECT_NEAR(s.Ppt, *std::max_element(pk.begin(), pk.end()), 1e-12);
  EXPECT_NEAR(s.Pvt, *std::max_element(pt.begin(), pt.end()), 1e-12);
  EXPECT_NEAR(s.Pz, pz, 1e-12);
  EXPECT_NEAR(s.Ppt, h, 0.01 * h);
  EXPECT_LT(s.Pvt, 0.01 * h);
}

TEST(Sections, SingleSectionSpansRange) {
  std::mt19937_64 rng(7);
  const Profile p = random_profile(rng);
  const SectionParams s = section_params(p, 1);
  const AmplitudeParams a = amplitude_params(p);
  EXPECT_NEAR(s.Ppt + s.Pvt, a.Pt, 1e-12 * a.Pt);
  EXPECT_NEAR(s.Pz, a.Pt, 1e-12 * a.Pt);
}

TEST(Sections, TooFewPointsPerSection) {
  const Profile p = direct(49, 0.0, 10.0, [](double x) { return std::sin(x); });
  EXPECT_THROW(section_params(p, 5), TooFewPointsPerSection);
  EXPECT_NO_THROW(section_params(p, 4));
}

TEST(Elements, SineOneElementPerPeriod) {
  // The least-squares line of a sine tilts by O(1/periods^2); 20 periods keep
  // the spacing shift below one sample.
  const double a = 0.5, w = 10.0, delta = 0.5;
  const int periods = 20;
  const Profile p = leveled(8001, 0.0, periods * w + 2 * delta,
                            [&](double x) { return a * std::sin(2 * kPi * (x - delta) / w); });
  const ElementParams e = element_params(p);
  ASSERT_EQ(static_cast<int>(e.elements.size()), periods);
  for (const auto& el : e.elements) {
    EXPECT_NEAR(el.spacing, w, p.dx_mean);
    EXPECT_NEAR(el.height, 2 * a, 0.01 * 2 * a);
    EXPECT_GT(el.spacing, 0.0);
  }
  EXPECT_NEAR(e.Psm, w, p.dx_mean);
  EXPECT_NEAR(e.Psmx, w, p.dx_mean);
  EXPECT_NEAR(e.Pc, 2 * a, 0.02 * a);
  EXPECT_NEAR(e.Pcx, 2 * a, 0.02 * a);
}

class TwoTone : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(TwoTone, RipplesDiscriminatedAgainstOracle) {
  const auto [ripple, phase] = GetParam();
  const double a = 1.0, L1 = 10.0, delta = 0.5;
  const int periods = 8;
  auto f = [&](double x) {
    const double th = 2 * kPi * (x - delta) / L1;
    return a * std::sin(th) + ripple * a * std::sin(20 * th + phase);
  };
  const double len = periods * L1 + 2 * delta;
  const std::size_t n = 4001;
  const Profile p = leveled(n, 0.0, len, f);
  const ElementParams e = element_params(p, {0.1, 0.01});
  EXPECT_EQ(static_cast<int>(e.elements.size()), periods);

  const Profile fine = direct(10 * (n - 1) + 1, 0.0, len, f);
  EXPECT_EQ(oracle_element_count(fine.points, 0.1, 0.01), periods);
  EXPECT_NEAR(e.Psm, L1, 2 * p.dx_mean + 0.05);
}

INSTANTIATE_TEST_SUITE_P(Ripple, TwoTone,
                         ::testing::Values(std::pair{0.05, 0.0}, std::pair{0.1, kPi / 3},
                                           std::pair{0.12, 1.0}));

TEST(Elements, MonotoneRampHasNone) {
  const Profile p = leveled(200, 0.0, 20.0, [](double x) { return 0.3 * x; });
  EXPECT_THROW(element_params(p), NoElementsFound);
}

TEST(Elements, InvalidDiscrimination) {
  const Profile p = leveled(200, 0.0, 20.0, [](double x) { return std::sin(x); });
  EXPECT_THROW(element_params(p, {0.0, 0.01}), InputError);
  EXPECT_THROW(element_params(p, {0.1, 1.0}), InputError);
}

TEST(Mpd, FlatSineAsymmetric) {
  EXPECT_EQ(mpd(direct(100, 0.0, 100.0, [](double) { return 0.0; })), 0.0);

  const double a = 0.8;
  const Profile s = direct(4001, 0.0, 100.0, [&](double x) { return a * std::sin(2 * kPi * x / 10.0); });
  EXPECT_NEAR(mpd(s), a, 0.01 * a);

  // Half-1 peak 2, half-2 peak 1, baseline c chosen so the mean is 0.4.
  const double c = 0.385 / 0.99;
  Profile q;
  q.points = {{0, c}, {10, c}, {10.5, 2.0}, {11, c}, {60, c}, {60.5, 1.0}, {61, c}, {100, c}};
  double area = 0;
  for (std::size_t i = 0; i + 1 < q.points.size(); ++i)
    area += 0.5 * (q.points[i].z + q.points[i + 1].z) * (q.points[i + 1].x - q.points[i].x);
  ASSERT_NEAR(area / 100.0, 0.4, 1e-14);
  bool short_base = true;
  EXPECT_NEAR(mpd(q, &short_base), 1.1, 1e-12);
  EXPECT_FALSE(short_base);
  mpd(direct(20, 0.0, 50.0, [](double) { return 0.0; }), &short_base);
  EXPECT_TRUE(short_base);
}

TEST(Report, SineComposition) {
  const double a = 1.0, w = 10.0;
  const Profile p = leveled(4001, 0.0, 100.0, [&](double x) { return a * std::cos(2 * kPi * x / w); });
  const RoughnessReport r = roughness_report(p, 5);
  EXPECT_NEAR(r.Pa, 0.637, 0.01 * 0.637);
  EXPECT_NEAR(r.Pq, 0.707, 0.01 * 0.707);
  EXPECT_NEAR(r.Pt, 2.0, 0.02);
  EXPECT_NEAR(r.Pz, 2.0, 0.02);
  EXPECT_NEAR(r.Psm, 10.0, 0.1);
  EXPECT_NEAR(r.Pc, 2.0, 0.02);
  EXPECT_NEAR(r.MPD, 1.0, 0.01);
  EXPECT_EQ(r.scheme.n_sections, 5);
  EXPECT_NEAR(r.scheme.section_len, 20.0, 1e-12);

  const auto j = to_json(r);
  EXPECT_DOUBLE_EQ(j.at("Pa").get<double>(), r.Pa);
  EXPECT_EQ(j.at("element_count").get<int>(), r.element_count);
  EXPECT_EQ(j.at("scheme").at("n_sections").get<int>(), 5);
  const std::string t = to_table(r);
  EXPECT_LT(t.find("MPD"), t.find("Pa"));
  EXPECT_NE(t.find("Pcx"), std::string::npos);
}

TEST(Report, ConstantProfile) {
  const RoughnessReport r = roughness_report(direct(100, 0.0, 10.0, [](double) { return 1.0; }), 5);
  EXPECT_EQ(r.Pa, 0.0);
  EXPECT_EQ(r.Pt, 0.0);
  EXPECT_EQ(r.MPD, 0.0);
  EXPECT_EQ(r.element_count, 0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(RoughnessProperty, OrderingScalingTranslation) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Profile p = random_profile(rng);
    const RoughnessReport r = roughness_report(p, 5);
    EXPECT_GE(r.Pq, r.Pa);
    EXPECT_GE(r.Pa, 0.0);
    EXPECT_GE(r.Pt, r.Pz);
    EXPECT_LE(r.Ppt, r.Pt);
    EXPECT_LE(r.Pvt, r.Pt);
    if (r.element_count > 0) {
      EXPECT_GE(r.Pcx, r.Pc);
      EXPECT_GE(r.Psmx, r.Psm);
    }

    const double k = 0.1 + 5 * u(rng);
    const double c = 10 * (u(rng) - 0.5);
    Profile scaled = p, shifted = p;
    for (auto& pt : scaled.points) pt.z *= k;
    for (auto& pt : shifted.points) pt.z += c;
    const RoughnessReport rs = roughness_report(scaled, 5);
    const RoughnessReport rt = roughness_report(shifted, 5);
    const double tol = 1e-9 * (1 + r.Pt);
    for (auto [x, y] : {std::pair{r.Pa, rs.Pa}, {r.Pq, rs.Pq}, {r.Pt, rs.Pt}, {r.Ppt, rs.Ppt},
                        {r.Pvt, rs.Pvt}, {r.Pz, rs.Pz}, {r.Pc, rs.Pc}, {r.Pcx, rs.Pcx}, {r.MPD, rs.MPD}})
      EXPECT_NEAR(k * x, y, k * tol);
    EXPECT_EQ(r.element_count, rs.element_count);
    EXPECT_NEAR(r.Psm, rs.Psm, 1e-9);
    EXPECT_NEAR(r.Psmx, rs.Psmx, 1e-9);

    for (auto [x, y] : {std::pair{r.Pa, rt.Pa}, {r.Pq, rt.Pq}, {r.Pt, rt.Pt}, {r.Ppt, rt.Ppt}, {r.Pvt, rt.Pvt},
                        {r.Pz, rt.Pz}, {r.Psm, rt.Psm}, {r.Pc, rt.Pc}, {r.MPD, rt.MPD}})
      EXPECT_NEAR(x, y, tol + 1e-9 * std::abs(c));
    EXPECT_EQ(r.element_count, rt.element_count);

    const SectionParams one = section_params(p, 1);
    EXPECT_NEAR(one.Pz, r.Pt, 1e-12 * (1 + r.Pt));
  }
}
