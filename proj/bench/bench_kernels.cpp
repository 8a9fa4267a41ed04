// OpenMP kernels against their serial references on the benchmark mesh.
// Arg(0) is the element count along the top.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>
#include <memory>
#include <numbers>

#include "hfric/kernels.hpp"
#include "hfric/mesh.hpp"
#include "hfric/viscoelastic.hpp"

using namespace hfric;

namespace {

struct Fixture {
  fem::BulkModel model;
  material::PronySeries m = material::three_arm();
  fem::StepCoefficients c;
  fem::ViscoState state;
  Eigen::VectorXd u;

  explicit Fixture(int m_x) {
    const double b = 2 * std::numbers::pi / 320;
    fem::Mesh mesh = fem::build_block_mesh(b, 0.75 * b, m_x, fem::default_levels(m_x));
    const auto sup = fem::skid_supports(mesh);
    model = fem::make_bulk_model(std::move(mesh), fem::Boundary::periodic, sup, m.nu);
    c = fem::step_coefficients(m, 1e-6);
    state = fem::ViscoState(model.n_points(), m.arms.size());
    u = Eigen::VectorXd::Random(model.dofs.n_dofs) * 1e-5;
  }
};

Fixture& fixture(int m_x) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[m_x];
  if (!f) f = std::make_unique<Fixture>(m_x);
  return *f;
}

template <bool Parallel>
void BM_Stiffness(benchmark::State& s) {
  auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) {
    auto k = Parallel ? kernels::element_stiffness_all(f.model)
                      : kernels::reference::element_stiffness_all(f.model);
    benchmark::DoNotOptimize(k.data());
  }
  s.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_HistoryForces(benchmark::State& s) {
  auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) {
    auto r = Parallel ? kernels::history_forces(f.model, f.m, f.c, f.state)
                      : kernels::reference::history_forces(f.model, f.m, f.c, f.state);
    benchmark::DoNotOptimize(r.data());
  }
  s.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_UpdateState(benchmark::State& s) {
  auto& f = fixture(static_cast<int>(s.range(0)));
  fem::ViscoState st = f.state;
  for (auto _ : s) {
    const double d = Parallel ? kernels::update_state(f.model, f.m, f.c, st, f.u)
                              : kernels::reference::update_state(f.model, f.m, f.c, st, f.u);
    benchmark::DoNotOptimize(d);
  }
  s.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_Strains(benchmark::State& s) {
  auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) {
    auto e = Parallel ? kernels::point_strains(f.model, f.u) : kernels::reference::point_strains(f.model, f.u);
    benchmark::DoNotOptimize(e.data());
  }
  s.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

} // namespace

#define HFRIC_PAIR(fn)                                                        \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/reference")->Arg(128)->Arg(256); \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/openmp")->Arg(128)->Arg(256)

HFRIC_PAIR(BM_Stiffness);
HFRIC_PAIR(BM_HistoryForces);
HFRIC_PAIR(BM_UpdateState);
HFRIC_PAIR(BM_Strains);

BENCHMARK_MAIN();
