#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hfric::material {

struct MaxwellArm {
  double E = 0.0;    // MPa
  double tau = 0.0;  // s
};

// Generalized Maxwell solid. E(t) = E0 + sum E_i exp(-t / tau_i).
struct PronySeries {
  double E0 = 0.0;  // MPa, long-term modulus
  std::vector<MaxwellArm> arms;
  double nu = 0.3;
  std::string name;

  double E_inst() const;
  double max_tau() const;
  double min_tau() const;
};

struct ComplexModulusSample {
  double omega = 0.0;    // rad/s
  double storage = 0.0;  // MPa
  double loss = 0.0;     // MPa
};

// Throws InputError when E0 <= 0, an arm is non-positive, or nu is outside [0, 0.5).
void validate(const PronySeries& m);

double relaxation_modulus(const PronySeries& m, double t);
ComplexModulusSample complex_modulus(const PronySeries& m, double omega);

// Phase-I duration balancing the relaxed arm stiffness against the storage
// part excited at omega:
//   sum E_k exp(-T1/tau_k) = sum E_k (omega tau_k)^2 / (1 + (omega tau_k)^2)
// Bisection on [0, 50 max tau]. Throws NoRoot.
double optimal_t1(const PronySeries& m, double omega);
// Left minus right side of the balance above; zero at optimal_t1.
double t1_residual(const PronySeries& m, double omega, double t1);

// v* = lambda / (2 pi tau), mm/s.
double critical_velocity(double tau, double lambda);

struct FitResult {
  PronySeries series;
  double residual = 0.0;  // summed squared relative error, storage + loss
  std::vector<double> tau_grid;
};

// Nonnegative least squares in (E0, E_i) on a fixed relaxation-time grid.
// An empty grid is replaced by n_arms log-spaced times covering 1/omega over
// the sampled range. Arms fitted to zero are dropped from the series.
// Throws InputError (too few samples), RankDeficient.
FitResult fit_prony(const std::vector<ComplexModulusSample>& samples, int n_arms,
                    std::vector<double> tau_grid = {});

// Key-value text: `E0 = ...`, repeated `arm = E, tau`, `nu = ...`, optional
// `name = ...`; '#' starts a comment.
PronySeries parse_material(std::istream& in, const std::string& source_id);
PronySeries load_material(const std::filesystem::path& path);
void write_material(std::ostream& out, const PronySeries& m);

// Reference materials.
PronySeries single_arm();
PronySeries three_arm();
PronySeries elastic(double E, double nu = 0.3);

} // namespace hfric::material
