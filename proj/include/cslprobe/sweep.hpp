#pragma once

// Parameter sweeps over the conversion scenarios. Each grid point is an
// independent set of master-equation runs, so the grid fans out over workers.

#include <string>
#include <vector>

#include "cslprobe/parallel.hpp"
#include "cslprobe/scenarios.hpp"

namespace cslprobe {

enum class SweepParam { G0OverKappaP, KappaSExOverKappaP };

SweepParam parse_sweep_param(const std::string& name);
std::string sweep_param_name(SweepParam p);

/// base with g0 = x kappa_p, or kappa_s,ex = x kappa_p.
SystemParams apply_sweep(const SystemParams& base, SweepParam p, double x);

struct SweepPoint {
    double x = 0.0;
    double eta_om = 0.0;
    double eta_stokes = 0.0;
    double eta_om2 = 0.0;
};

std::vector<SweepPoint> scenario_sweep(const SystemParams& base, SweepParam p,
                                       const std::vector<double>& values,
                                       const ScenarioOptions& options,
                                       const ScenarioOptions& om2_options,
                                       Execution exec = Execution::OpenMP, int jobs = 0);

}  // namespace cslprobe
