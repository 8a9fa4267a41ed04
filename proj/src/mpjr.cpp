#include "hfric/mpjr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hfric/errors.hpp"
#include "hfric/quadrature.hpp"

namespace hfric::mpjr {

double SineSurface::z(double x) const {
  return a_ * (1.0 - std::cos(2.0 * std::numbers::pi * x / lambda_));
}

double SineSurface::slope(double x) const {
  const double k = 2.0 * std::numbers::pi / lambda_;
  return a_ * k * std::sin(k * x);
}

double SineSurface::min_over(double x0, double x1) const {
  if (std::floor(x1 / lambda_) * lambda_ >= x0) return 0.0;
  return std::min(z(x0), z(x1));
}

SplineSurface::SplineSurface(profile::SplineTable table, double sign)
    : table_(std::move(table)), sign_(sign) {}

double SplineSurface::z(double x) const { return sign_ * profile::eval_spline(table_, x, &clamp_); }

double SplineSurface::slope(double x) const {
  return sign_ * profile::eval_spline_slope(table_, x, &clamp_);
}

double SplineSurface::min_over(double x0, double x1) const {
  double m = std::min(z(x0), z(x1));
  const auto& k = table_.knots;
  auto it = std::lower_bound(k.begin(), k.end(), x0);
  for (; it != k.end() && *it <= x1; ++it) {
    const std::size_t i = static_cast<std::size_t>(it - k.begin());
    m = std::min(m, sign_ * table_.values[i]);
    if (i + 1 < k.size()) {
      for (int s = 1; s < 4; ++s) {
        const double xs = k[i] + 0.25 * s * (k[i + 1] - k[i]);
        if (xs <= x1) m = std::min(m, z(xs));
      }
    }
  }
  return m;
}

MotionSample motion_law_eval(const MotionLaw& m, double t) {
  MotionSample s;
  s.y2 = m.y2;
  if (t <= m.T1) return s;
  const double tr = t - m.T1;
  if (m.T_ramp > 0.0 && tr < m.T_ramp) {
    const double u = tr / m.T_ramp;
    s.v_inst = m.v * u * u * (3.0 - 2.0 * u);
    s.y1 = m.v * m.T_ramp * (u * u * u - 0.5 * u * u * u * u);
    return s;
  }
  s.v_inst = m.v;
  s.y1 = m.v * (0.5 * m.T_ramp + (tr - m.T_ramp));
  return s;
}

InterfaceLayer make_interface(const fem::Mesh& mesh, const fem::DofMap& dofs,
                              const std::vector<int>& top_dofs) {
  InterfaceLayer L;
  L.b = mesh.b;
  L.rocking = dofs.periodic_pairs.empty();
  L.n_elements = mesh.top_nodes.size() - 1;
  auto local = [&](int node) {
    const int d = dofs.dof(node, 1);
    auto it = std::find(top_dofs.begin(), top_dofs.end(), d);
    if (it == top_dofs.end()) throw InputError("interface node without a free vertical dof");
    return static_cast<int>(it - top_dofs.begin());
  };
  for (std::size_t e = 0; e < L.n_elements; ++e) {
    const int n0 = mesh.top_nodes[e], n1 = mesh.top_nodes[e + 1];
    const double x0 = mesh.nodes[n0].x1, x1 = mesh.nodes[n1].x1;
    const int a = local(n0), b = local(n1);
    for (double xi : {-fem::kGaussPt, fem::kGaussPt}) {
      const double Na = 0.5 * (1.0 - xi), Nb = 0.5 * (1.0 + xi);
      L.x.push_back(Na * x0 + Nb * x1);
      L.weight.push_back(0.5 * (x1 - x0));
      L.la.push_back(a);
      L.lb.push_back(b);
      L.Na.push_back(Na);
      L.Nb.push_back(Nb);
      L.element.push_back(static_cast<int>(e));
    }
  }
  const std::size_t n = L.x.size();
  L.zeta.assign(n, 0.0);
  L.slope.assign(n, 0.0);
  L.gap.assign(n, 0.0);
  L.pressure.assign(n, 0.0);
  L.active.assign(n, 0);
  return L;
}

void evaluate_profile(InterfaceLayer& layer, const RigidSurface& surface, const MotionSample& y,
                      double x_origin) {
  const long n = static_cast<long>(layer.size());
  if (!surface.periodic()) {
    const double lo = layer.x.front() - y.y1 + x_origin;
    const double hi = layer.x.back() - y.y1 + x_origin;
    const double tol = 1e-9 * std::max(1.0, surface.x_max() - surface.x_min());
    if (lo < surface.x_min() - tol || hi > surface.x_max() + tol) {
      throw ProfileExhausted("skid left the profile (local window [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] mm)");
    }
  }
#pragma omp parallel for schedule(static)
  for (long q = 0; q < n; ++q) {
    const double xl = layer.x[q] - y.y1 + x_origin;
    layer.zeta[q] = surface.z(xl) + y.y2;
    layer.slope[q] = surface.slope(xl);
  }
}

void corrected_gap(InterfaceLayer& layer, const Eigen::VectorXd& u_top) {
  const std::size_t n = layer.size();
  for (std::size_t q = 0; q < n; ++q) {
    const double u2 = layer.Na[q] * u_top[layer.la[q]] + layer.Nb[q] * u_top[layer.lb[q]];
    layer.gap[q] = layer.zeta[q] - u2;
  }
}

double penalty_traction(double gap, double eps_n) { return gap < 0.0 ? -eps_n * gap : 0.0; }

void interface_forces(InterfaceLayer& layer, double eps_n, ContactState& state) {
  double P = 0.0, Q = 0.0, pen = 0.0, touched = 0.0, total = 0.0;
  for (std::size_t q = 0; q < layer.size(); ++q) {
    const double p = penalty_traction(layer.gap[q], eps_n);
    layer.pressure[q] = p;
    P += layer.weight[q] * p;
    Q += layer.weight[q] * p * layer.slope[q];
    total += layer.weight[q];
    if (p > 0.0) {
      touched += layer.weight[q];
      pen = std::max(pen, -layer.gap[q]);
    }
  }
  state.P = P;
  state.Q = Q;
  state.max_penetration = pen;
  state.contact_fraction = total > 0.0 ? touched / total : 0.0;
}

std::vector<fem::TopSpring> springs(const InterfaceLayer& layer, const std::vector<std::uint8_t>& active,
                                    double eps_n) {
  std::vector<fem::TopSpring> s;
  for (std::size_t q = 0; q < layer.size(); ++q) {
    if (!active[q]) continue;
    s.push_back({layer.la[q], layer.lb[q], layer.Na[q], layer.Nb[q], eps_n * layer.weight[q],
                 layer.zeta[q]});
  }
  return s;
}

namespace {

std::vector<std::uint8_t> penetrating(const InterfaceLayer& layer) {
  std::vector<std::uint8_t> a(layer.size(), 0);
  if (a.empty()) return a;
  // Keep the closest point of each half (or of the whole top when periodic)
  // so the rigid modes stay supported.
  const int halves = layer.rocking ? 2 : 1;
  for (int h = 0; h < halves; ++h) {
    bool any = false;
    std::size_t lowest = layer.size();
    for (std::size_t q = 0; q < layer.size(); ++q) {
      if (halves == 2 && (layer.x[q] < 0.5 * layer.b) != (h == 0)) continue;
      a[q] = layer.gap[q] < 0.0;
      any = any || a[q];
      if (lowest == layer.size() || layer.gap[q] < layer.gap[lowest]) lowest = q;
    }
    if (!any && lowest < layer.size()) a[lowest] = 1;
  }
  return a;
}

} // namespace

Eigen::VectorXd solve_contact(const fem::TopSolver& solver, fem::StepWorkspace& work,
                              InterfaceLayer& layer, double eps_n, ContactState& state,
                              int max_iter) {
  std::vector<std::uint8_t> A = state.active;
  if (A.size() != layer.size() || std::none_of(A.begin(), A.end(), [](auto v) { return v != 0; })) {
    A = penetrating(layer);
  }
  std::vector<std::vector<std::uint8_t>> seen;
  bool grow_only = false;
  Eigen::VectorXd u_top;
  for (int it = 1; it <= max_iter; ++it) {
    u_top = solver.solve_top(work, springs(layer, A, eps_n));
    corrected_gap(layer, u_top);
    std::vector<std::uint8_t> next = penetrating(layer);
    if (grow_only) {
      for (std::size_t q = 0; q < next.size(); ++q) next[q] = next[q] | A[q];
    }
    if (next == A) {
      state.active = A;
      layer.active = A;
      state.iterations = it;
      interface_forces(layer, eps_n, state);
      return u_top;
    }
    if (std::find(seen.begin(), seen.end(), next) != seen.end()) {
      grow_only = true;
      for (std::size_t q = 0; q < next.size(); ++q) next[q] = next[q] | A[q];
    }
    seen.push_back(A);
    A = std::move(next);
  }
  throw ContactLoopDiverged("contact active set did not settle within " + std::to_string(max_iter) +
                            " iterations");
}

} // namespace hfric::mpjr
