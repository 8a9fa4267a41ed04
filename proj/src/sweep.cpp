#include "hfric/sweep.hpp"

#include <omp.h>

#include "hfric/errors.hpp"

namespace hfric::sim {

SweepResult run_sweep(const Model& model, const std::vector<double>& velocities, int jobs,
                      bool keep_states, const Progress& progress) {
  SweepResult out;
  out.T1 = resolve_t1(model, velocities);
  out.phase1 = run_phase1(model, out.T1);
  out.runs.resize(velocities.size());

  const int n = static_cast<int>(velocities.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    FrictionResult r;
    try {
      r = run_phase2(model, out.phase1, velocities[i]);
    } catch (const Error& e) {
      r = FrictionResult{};
      r.v = velocities[i];
      r.T1 = out.T1;
      r.error = e.what();
    }
    if (!keep_states) r.final_state = RunState{};
    out.runs[i] = std::move(r);
    if (progress) {
#pragma omp critical(hfric_progress)
      progress(static_cast<std::size_t>(i), out.runs[i]);
    }
  }
  return out;
}

} // namespace hfric::sim
