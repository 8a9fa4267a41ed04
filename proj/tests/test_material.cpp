#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hfric/errors.hpp"
#include "hfric/material.hpp"
#include "hfric/nnls.hpp"

using namespace hfric;
using namespace hfric::material;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ComplexModulusSample> sample(const PronySeries& m, double w_lo, double w_hi, int n) {
  std::vector<ComplexModulusSample> s;
  for (int i = 0; i < n; ++i) {
    const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (n - 1));
    s.push_back(complex_modulus(m, w));
  }
  return s;
}

PronySeries random_series(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PronySeries m;
  m.E0 = 0.5 + 10 * u(rng);
  const int n = 1 + static_cast<int>(3 * u(rng));
  for (int k = 0; k < n; ++k) m.arms.push_back({1 + 1000 * u(rng), std::pow(10.0, -8 + 7 * u(rng))});
  return m;
}

} // namespace

TEST(Relaxation, ThreeArmInstantaneous) {
  EXPECT_NEAR(relaxation_modulus(three_arm(), 0.0), 2900.77, 1e-9);
  EXPECT_NEAR(three_arm().E_inst(), 2900.77, 1e-9);
}

TEST(Relaxation, ThreeArmLongTerm) { EXPECT_NEAR(relaxation_modulus(three_arm(), 1.0), 9.77, 1e-6); }

TEST(Relaxation, SingleArmAtTau) {
  const PronySeries m = single_arm();
  EXPECT_NEAR(relaxation_modulus(m, m.arms[0].tau), 4.17 + 1.72 / std::numbers::e, 1e-4);
  EXPECT_NEAR(relaxation_modulus(m, m.arms[0].tau), 4.80277, 1e-4);
}

TEST(Relaxation, CompletelyMonotoneRandomized) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const PronySeries m = random_series(rng);
    double prev = relaxation_modulus(m, 0.0);
    for (int i = 1; i <= 200; ++i) {
      const double t = 1e-10 * std::pow(10.0, 10.0 * i / 200.0);
      const double e = relaxation_modulus(m, t);
      EXPECT_LE(e, prev);
      EXPECT_GE(e, m.E0);
      prev = e;
    }
    EXPECT_LT(relaxation_modulus(m, 1.0), relaxation_modulus(m, 0.0));
  }
}

TEST(Complex, DcAndHighFrequencyLimits) {
  const PronySeries m = three_arm();
  const auto dc = complex_modulus(m, 0.0);
  EXPECT_EQ(dc.storage, m.E0);
  EXPECT_EQ(dc.loss, 0.0);
  const auto hi = complex_modulus(m, 1e6 / m.min_tau());
  EXPECT_NEAR(hi.storage, m.E_inst(), 1e-6 * m.E_inst());
  EXPECT_LT(hi.loss, 1e-5 * m.E_inst());
}

TEST(Complex, SingleDebyePeak) {
  const PronySeries m = single_arm();
  const double tau = m.arms[0].tau;
  const auto s = complex_modulus(m, 1.0 / tau);
  EXPECT_NEAR(s.storage, 4.17 + 0.86, 1e-12);
  EXPECT_NEAR(s.loss, 0.86, 1e-12);

  // Grid argmax of the loss lies within one step of 1/tau.
  const int n = 2001;
  const double lo = std::log(1e-3 / tau), hi = std::log(1e3 / tau), step = (hi - lo) / (n - 1);
  double best = -1, wbest = 0;
  for (int i = 0; i < n; ++i) {
    const double w = std::exp(lo + step * i);
    const double l = complex_modulus(m, w).loss;
    if (l > best) best = l, wbest = w;
  }
  EXPECT_LE(std::abs(std::log(wbest * tau)), step);
}

TEST(Complex, StorageNondecreasingWithinBounds) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const PronySeries m = random_series(rng);
    double prev = m.E0;
    for (int i = 0; i <= 300; ++i) {
      const auto s = complex_modulus(m, std::pow(10.0, -2 + 14.0 * i / 300));
      EXPECT_GE(s.storage, prev - 1e-12 * m.E_inst());
      EXPECT_LE(s.storage, m.E_inst() * (1 + 1e-15));
      EXPECT_GE(s.loss, 0.0);
      prev = s.storage;
    }
  }
}

TEST(OptimalT1, SingleArmClosedForm) {
  const PronySeries m = single_arm();
  const double tau = m.arms[0].tau;
  EXPECT_NEAR(optimal_t1(m, 1.0 / tau), tau * std::log(2.0), 1e-10 * tau);
  EXPECT_NEAR(optimal_t1(m, 10.0 / tau), tau * std::log(1.01), 1e-9);
  EXPECT_NEAR(optimal_t1(m, 10.0 / tau), 1.1284e-4, 1e-8);
}

TEST(OptimalT1, ThreeArmResidual) {
  const PronySeries m = three_arm();
  for (double lambda : {2 * kPi / 320, 0.1, 1.0, 10.0}) {
    const double w = 2 * kPi * 100.0 / lambda;
    const double t1 = optimal_t1(m, w);
    EXPECT_LT(std::abs(t1_residual(m, w, t1)), 1e-9 * m.E_inst()) << lambda;
  }
}

TEST(OptimalT1, DecreasesWithFrequency) {
  const PronySeries m = three_arm();
  double prev = optimal_t1(m, 1e2);
  for (int i = 1; i <= 40; ++i) {
    const double t = optimal_t1(m, 1e2 * std::pow(10.0, 8.0 * i / 40));
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(OptimalT1, RejectsDegenerateInput) {
  EXPECT_THROW(optimal_t1(elastic(10.0), 1.0), InputError);
  EXPECT_THROW(optimal_t1(single_arm(), 0.0), InputError);
}

TEST(CriticalVelocity, Values) {
  EXPECT_NEAR(critical_velocity(1.0, 2 * kPi), 1.0, 1e-15);
  EXPECT_NEAR(critical_velocity(0.01134034, 2 * kPi / 320), 0.27566, 1e-4);
  EXPECT_NEAR(critical_velocity(0.3, 4.0), 2 * critical_velocity(0.3, 2.0), 1e-14);
}

TEST(Nnls, MatchesUnconstrainedWhenInterior) {
  Eigen::MatrixXd A(4, 2);
  A << 1, 0, 0, 1, 1, 1, 2, 1;
  const Eigen::VectorXd x0 = Eigen::Vector2d(0.5, 2.0);
  const Eigen::VectorXd x = numeric::nnls(A, A * x0);
  EXPECT_NEAR((x - x0).norm(), 0.0, 1e-12);
}

TEST(Nnls, ClipsAndSatisfiesKkt) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::MatrixXd A(12, 5);
    Eigen::VectorXd b(12);
    for (int i = 0; i < 12; ++i) {
      b[i] = g(rng);
      for (int j = 0; j < 5; ++j) A(i, j) = g(rng);
    }
    const Eigen::VectorXd x = numeric::nnls(A, b);
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    for (int j = 0; j < 5; ++j) {
      EXPECT_GE(x[j], 0.0);
      if (x[j] > 1e-12) EXPECT_NEAR(w[j], 0.0, 1e-9);
      else EXPECT_LE(w[j], 1e-9);
    }
  }
}

TEST(Fit, ExactRecoveryThreeArm) {
  const PronySeries m = three_arm();
  const auto s = sample(m, 1e3, 1e13, 40);
  std::vector<double> grid;
  for (const auto& a : m.arms) grid.push_back(a.tau);
  const FitResult f = fit_prony(s, 3, grid);
  ASSERT_EQ(f.series.arms.size(), 3u);
  EXPECT_NEAR(f.series.E0, m.E0, 1e-6 * m.E0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(f.series.arms[k].E, m.arms[k].E, 1e-6 * m.arms[k].E);
}

TEST(Fit, OneArmWorseThanThree) {
  const PronySeries m = three_arm();
  const auto s = sample(m, 1e3, 1e13, 40);
  const FitResult one = fit_prony(s, 1);
  std::vector<double> grid;
  for (const auto& a : m.arms) grid.push_back(a.tau);
  const FitResult three = fit_prony(s, 3, grid);
  EXPECT_GT(one.residual, three.residual);
  EXPECT_GT(one.residual, 0.0);
}

TEST(Fit, ConstantStorage) {
  std::vector<ComplexModulusSample> s;
  for (int i = 0; i < 5; ++i) s.push_back({std::pow(10.0, i), 7.5, 0.0});
  const FitResult f = fit_prony(s, 0);
  EXPECT_NEAR(f.series.E0, 7.5, 1e-12);
  EXPECT_TRUE(f.series.arms.empty());
}

TEST(Fit, Errors) {
  const auto s = sample(three_arm(), 1e3, 1e13, 6);
  EXPECT_THROW(fit_prony(s, 3), InputError);
  const auto s2 = sample(three_arm(), 1e3, 1e13, 20);
  EXPECT_THROW(fit_prony(s2, 2, {1e-6, 1e-6}), RankDeficient);
}

TEST(MaterialIo, RoundTrip) {
  const PronySeries m = three_arm();
  std::stringstream ss;
  write_material(ss, m);
  const PronySeries r = parse_material(ss, "round");
  EXPECT_EQ(r.E0, m.E0);
  EXPECT_EQ(r.nu, m.nu);
  ASSERT_EQ(r.arms.size(), m.arms.size());
  for (std::size_t k = 0; k < m.arms.size(); ++k) {
    EXPECT_EQ(r.arms[k].E, m.arms[k].E);
    EXPECT_EQ(r.arms[k].tau, m.arms[k].tau);
  }
}

TEST(MaterialIo, ParseAndValidate) {
  std::istringstream ok("# comment\nE0 = 4.17\narm = 1.72, 0.01134034\nnu = 0.3\n");
  const PronySeries m = parse_material(ok, "ok");
  EXPECT_EQ(m.arms.size(), 1u);
  EXPECT_NEAR(m.E_inst(), 5.89, 1e-12);

  std::istringstream bad_nu("E0 = 1\nnu = 0.5\n");
  EXPECT_THROW(parse_material(bad_nu, "x"), InputError);
  std::istringstream bad_arm("E0 = 1\narm = -1, 0.1\n");
  EXPECT_THROW(parse_material(bad_arm, "x"), InputError);
  std::istringstream garbage("E0 = 1\nfoo bar\n");
  EXPECT_THROW(parse_material(garbage, "x"), ParseError);
  EXPECT_THROW(load_material("/nonexistent/material.txt"), InputError);
}
