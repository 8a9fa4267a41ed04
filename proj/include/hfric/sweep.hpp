#pragma once

#include <functional>
#include <vector>

#include "hfric/simulation.hpp"

namespace hfric::sim {

struct SweepResult {
  double T1 = 0.0;
  Phase1Result phase1;
  std::vector<FrictionResult> runs;  // in velocity order
};

using Progress = std::function<void(std::size_t index, const FrictionResult&)>;

// One Phase I (all velocities share T1) followed by independent Phase II runs
// on up to `jobs` threads (0 = all). A run that throws keeps its error text
// in FrictionResult::error and the sweep continues. Results are identical for
// any thread count.
SweepResult run_sweep(const Model& model, const std::vector<double>& velocities, int jobs,
                      bool keep_states = false, const Progress& progress = {});

} // namespace hfric::sim
