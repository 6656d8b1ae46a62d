#include "cslprobe/sweep.hpp"

#include "cslprobe/errors.hpp"

namespace cslprobe {

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "g0_over_kappa_p") return SweepParam::G0OverKappaP;
    if (name == "kappa_s_ex_over_kappa_p") return SweepParam::KappaSExOverKappaP;
    throw InvalidArgument("unknown sweep parameter \"" + name +
                          "\" (expected g0_over_kappa_p or kappa_s_ex_over_kappa_p)");
}

std::string sweep_param_name(SweepParam p) {
    return p == SweepParam::G0OverKappaP ? "g0_over_kappa_p" : "kappa_s_ex_over_kappa_p";
}

SystemParams apply_sweep(const SystemParams& base, SweepParam p, double x) {
    if (!(x >= 0.0)) throw InvalidArgument("sweep value must be nonnegative");
    SystemParams out = base;
    if (p == SweepParam::G0OverKappaP) {
        out.g0 = x * base.kappa_p();
    } else {
        out.kappa_s_ex = x * base.kappa_p();
    }
    return out;
}

std::vector<SweepPoint> scenario_sweep(const SystemParams& base, SweepParam p,
                                       const std::vector<double>& values,
                                       const ScenarioOptions& options,
                                       const ScenarioOptions& om2_options, Execution exec,
                                       int jobs) {
    base.validate();
    for (double x : values) apply_sweep(base, p, x).validate();
    return parallel_map(
        values.size(),
        [&](std::size_t i) {
            const auto params = apply_sweep(base, p, values[i]);
            SweepPoint pt;
            pt.x = values[i];
            pt.eta_om = eta_om(params, options).value;
            pt.eta_stokes = eta_stokes(params, options).value;
            pt.eta_om2 = eta_om2(params, om2_options).value;
            return pt;
        },
        exec, jobs);
}

}  // namespace cslprobe
