#include "hfric/material.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "hfric/errors.hpp"
#include "hfric/nnls.hpp"

namespace hfric::material {

double PronySeries::E_inst() const {
  double e = E0;
  for (const auto& a : arms) e += a.E;
  return e;
}

double PronySeries::max_tau() const {
  double t = 0.0;
  for (const auto& a : arms) t = std::max(t, a.tau);
  return t;
}

double PronySeries::min_tau() const {
  if (arms.empty()) return 0.0;
  double t = arms.front().tau;
  for (const auto& a : arms) t = std::min(t, a.tau);
  return t;
}

void validate(const PronySeries& m) {
  if (!(m.E0 > 0.0)) throw InputError("material: E0 must be positive");
  for (const auto& a : m.arms) {
    if (!(a.E > 0.0) || !(a.tau > 0.0)) {
      throw InputError("material: every arm needs E > 0 and tau > 0");
    }
  }
  if (!(m.nu >= 0.0 && m.nu < 0.5)) throw InputError("material: nu must lie in [0, 0.5)");
}

double relaxation_modulus(const PronySeries& m, double t) {
  double e = m.E0;
  for (const auto& a : m.arms) e += a.E * std::exp(-t / a.tau);
  return e;
}

ComplexModulusSample complex_modulus(const PronySeries& m, double omega) {
  ComplexModulusSample s{omega, m.E0, 0.0};
  for (const auto& a : m.arms) {
    const double wt = omega * a.tau;
    const double den = 1.0 + wt * wt;
    s.storage += a.E * wt * wt / den;
    s.loss += a.E * wt / den;
  }
  return s;
}

double t1_residual(const PronySeries& m, double omega, double t1) {
  double r = 0.0;
  for (const auto& a : m.arms) {
    const double wt = omega * a.tau;
    r += a.E * (std::exp(-t1 / a.tau) - wt * wt / (1.0 + wt * wt));
  }
  return r;
}

double optimal_t1(const PronySeries& m, double omega) {
  if (!(omega > 0.0)) throw InputError("optimal_t1: omega must be positive");
  if (m.arms.empty()) throw InputError("optimal_t1: material has no Maxwell arms");
  double lo = 0.0;
  double hi = 50.0 * m.max_tau();
  if (!(t1_residual(m, omega, lo) > 0.0) || t1_residual(m, omega, hi) > 0.0) {
    throw NoRoot("optimal_t1: no sign change on [0, 50 max tau] at omega = " +
                 std::to_string(omega));
  }
  // Run to floating-point convergence; this is well inside 1e-10 relative.
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (t1_residual(m, omega, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double critical_velocity(double tau, double lambda) {
  if (!(tau > 0.0) || !(lambda > 0.0)) throw InputError("critical_velocity: tau and lambda must be positive");
  return lambda / (2.0 * std::numbers::pi * tau);
}

FitResult fit_prony(const std::vector<ComplexModulusSample>& samples, int n_arms,
                    std::vector<double> tau_grid) {
  if (n_arms < 0) throw InputError("fit_prony: n_arms must be >= 0");
  if (tau_grid.empty() && n_arms > 0) {
    double wmin = 0.0, wmax = 0.0;
    for (const auto& s : samples) {
      if (s.omega <= 0.0) continue;
      wmin = wmin == 0.0 ? s.omega : std::min(wmin, s.omega);
      wmax = std::max(wmax, s.omega);
    }
    if (wmax <= 0.0) throw InputError("fit_prony: need samples with omega > 0 to place the tau grid");
    const double lt_lo = std::log10(1.0 / wmax);
    const double lt_hi = std::log10(1.0 / wmin);
    for (int k = 0; k < n_arms; ++k) {
      const double f = n_arms == 1 ? 0.5 : static_cast<double>(k) / (n_arms - 1);
      tau_grid.push_back(std::pow(10.0, lt_lo + f * (lt_hi - lt_lo)));
    }
  }
  const auto n_tau = static_cast<Eigen::Index>(tau_grid.size());
  if (samples.size() < static_cast<std::size_t>(2 * n_tau + 1)) {
    throw InputError("fit_prony: need at least 2 n_arms + 1 samples");
  }
  for (double t : tau_grid) {
    if (!(t > 0.0)) throw InputError("fit_prony: relaxation times must be positive");
  }

  const auto n_s = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n_s, n_tau + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(2 * n_s);
  for (Eigen::Index j = 0; j < n_s; ++j) {
    const auto& s = samples[static_cast<std::size_t>(j)];
    const double mag = std::hypot(s.storage, s.loss);
    const double ds = std::max(std::abs(s.storage), 1e-9 * mag);
    const double dl = std::max(std::abs(s.loss), 1e-9 * mag);
    A(2 * j, 0) = 1.0 / ds;
    b[2 * j] = s.storage / ds;
    b[2 * j + 1] = s.loss / dl;
    for (Eigen::Index k = 0; k < n_tau; ++k) {
      const double wt = s.omega * tau_grid[static_cast<std::size_t>(k)];
      const double den = 1.0 + wt * wt;
      A(2 * j, k + 1) = wt * wt / den / ds;
      A(2 * j + 1, k + 1) = wt / den / dl;
    }
  }

  // Rank check on the column-normalized design.
  Eigen::MatrixXd An = A;
  for (Eigen::Index k = 0; k < An.cols(); ++k) {
    const double nrm = An.col(k).norm();
    if (nrm > 0.0) An.col(k) /= nrm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(An);
  qr.setThreshold(1e-10);
  if (qr.rank() < An.cols()) {
    throw RankDeficient("fit_prony: tau grid is collinear over the sampled frequencies (rank " +
                        std::to_string(qr.rank()) + " of " + std::to_string(An.cols()) + ")");
  }

  const Eigen::VectorXd x = numeric::nnls(A, b);
  FitResult out;
  out.tau_grid = tau_grid;
  out.residual = (A * x - b).squaredNorm();
  out.series.E0 = x[0];
  out.series.nu = 0.3;
  out.series.name = "fit";
  for (Eigen::Index k = 0; k < n_tau; ++k) {
    if (x[k + 1] > 0.0) out.series.arms.push_back({x[k + 1], tau_grid[static_cast<std::size_t>(k)]});
  }
  return out;
}

PronySeries parse_material(std::istream& in, const std::string& source_id) {
  PronySeries m;
  m.name = source_id;
  bool have_e0 = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ParseError(source_id, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "E0") {
        m.E0 = std::stod(value);
        have_e0 = true;
      } else if (key == "nu") {
        m.nu = std::stod(value);
      } else if (key == "name") {
        m.name = value;
      } else if (key == "arm") {
        std::replace(value.begin(), value.end(), ',', ' ');
        std::istringstream vs(value);
        MaxwellArm a;
        std::string extra;
        if (!(vs >> a.E >> a.tau) || (vs >> extra)) {
          throw ParseError(source_id, lineno, "arm expects 'E, tau'");
        }
        m.arms.push_back(a);
      } else {
        throw ParseError(source_id, lineno, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError(source_id, lineno, "not a number: '" + value + "'");
    } catch (const std::out_of_range&) {
      throw ParseError(source_id, lineno, "number out of range: '" + value + "'");
    }
  }
  if (!have_e0) throw InputError(source_id + ": material file lacks E0");
  validate(m);
  return m;
}

PronySeries load_material(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open material file '" + path.string() + "'");
  return parse_material(in, path.string());
}

void write_material(std::ostream& out, const PronySeries& m) {
  char buf[128];
  if (!m.name.empty()) out << "name = " << m.name << "\n";
  std::snprintf(buf, sizeof buf, "E0 = %.17g\n", m.E0);
  out << buf;
  std::snprintf(buf, sizeof buf, "nu = %.17g\n", m.nu);
  out << buf;
  for (const auto& a : m.arms) {
    std::snprintf(buf, sizeof buf, "arm = %.17g, %.17g\n", a.E, a.tau);
    out << buf;
  }
}

PronySeries single_arm() {
  return PronySeries{4.17, {{1.72, 0.01134034}}, 0.3, "single-arm"};
}

PronySeries three_arm() {
  return PronySeries{9.77, {{541.0, 1.85e-6}, {1160.0, 8.09e-8}, {1190.0, 4.22e-10}}, 0.3, "three-arm"};
}

PronySeries elastic(double E, double nu) { return PronySeries{E, {}, nu, "elastic"}; }

} // namespace hfric::material
