#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "cslprobe/collapse.hpp"
#include "cslprobe/errors.hpp"
#include "cslprobe/output.hpp"
#include "cslprobe/sweep.hpp"
#include "cslprobe/version.hpp"

namespace cslprobe::cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kYear = 365.25 * 86400.0;
constexpr double kDay = 86400.0;
constexpr const char* kUnits =
    "config frequencies in Hz; rates in 1/s; angular frequencies in rad/s; lengths in m; "
    "temperatures in K; masses in kg; times in s";

struct Context {
    RunConfig config;
    std::filesystem::path out_dir;
    int jobs = 0;
    std::string command;

    FileHeader header() const { return {command, to_json(config), kUnits}; }
    void write(const std::string& name, const std::string& content) const {
        write_text(out_dir / name, content);
    }
};

CounterRotatingOptions counterrot_options(const RunConfig& c) {
    CounterRotatingOptions o;
    o.cutoffs = c.numerics.cutoffs;
    o.t0_factor = c.numerics.t0_factor;
    return o;
}

ScenarioOptions scenario_options(const RunConfig& c) {
    ScenarioOptions o;
    o.cutoffs = c.numerics.cutoffs;
    o.check_cutoff = c.numerics.check_cutoff;
    return o;
}

ScenarioOptions om2_options(const RunConfig& c) {
    ScenarioOptions o;
    o.cutoffs = c.numerics.eta_om2_cutoffs;
    o.check_cutoff = c.numerics.check_cutoff;
    return o;
}

double collapse_d(const RunConfig& c) {
    return d_closed_form(c.geometry.to_geometry(), c.collapse.r_c, c.system.x0());
}

json convergence_json(const ConvergenceReport& r) {
    return {{"cutoffs", r.cutoffs},
            {"dt_s", r.dt},
            {"t_final_s", r.t_final},
            {"residual_excitation", r.residual_excitation},
            {"cutoff_checked", r.cutoff_checked},
            {"cutoff_delta", r.cutoff_delta},
            {"step_checked", r.step_checked},
            {"step_delta", r.step_delta}};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json counterrot_json(const CounterRotating& cr) {
    return {{"p_cr1", cr.p_cr1},
            {"p_cr2", cr.p_cr2},
            {"literal1", complex_json(cr.literal1)},
            {"literal2", complex_json(cr.literal2)},
            {"t0_s", cr.t0},
            {"convergence", convergence_json(cr.convergence)}};
}

json pipeline_json(const NoisePipeline& p) {
    return {{"eta_om", p.eta_om},
            {"eta_stokes", p.eta_stokes},
            {"eta_om2", p.eta_om2},
            {"theta", p.direct.theta},
            {"p_direct", p.direct.p_direct},
            {"counterrot", counterrot_json(p.counterrot)},
            {"p1_0", p.p1_0},
            {"p2_0", p.p2_0},
            {"p_om_quadrature", p.p_om.asymptote_quadrature},
            {"p_om_closed_form", p.p_om.asymptote_closed_form}};
}

json budget_json(const NoiseBudget& b) {
    json rows = json::array();
    for (const auto& r : b.rows) {
        rows.push_back({{"channel", r.channel}, {"rate_per_s", r.rate},
                        {"lambda_min_per_s", r.lambda_min}});
    }
    json inputs = json::array();
    for (const auto& i : b.inputs) {
        inputs.push_back({{"name", i.name}, {"value", i.value}, {"source", i.source}});
    }
    return {{"rows", rows},
            {"total_rate_per_s", b.total_rate},
            {"total_lambda_min_per_s", b.total_lambda_min},
            {"eta", b.eta},
            {"D", b.D},
            {"inputs", inputs}};
}

// ---------------------------------------------------------------------------

int cmd_budget(const Context& ctx, std::ostream& out) {
    const auto run = compute_budget(ctx.config);
    const auto& b = run.budget;

    Table t;
    t.columns = {"channel", "rate_per_s", "lambda_min_per_s"};
    for (const auto& r : b.rows) {
        t.add({r.channel, format_number(r.rate), format_number(r.lambda_min)});
    }
    t.add({"total", format_number(b.total_rate), format_number(b.total_lambda_min)});
    ctx.write("budget.csv", render_csv(ctx.header(), t));

    const double lc = ctx.config.collapse.lambda_c;
    const double n = ctx.config.multiplex_n;
    const double tm = measurement_time(lc, b.D, b.eta, n);
    json body = budget_json(b);
    body["signal_rate_per_s"] = signal_rate(lc, b.D, b.eta);
    body["signal_rate_per_lambda"] = b.D * b.eta;
    body["measurement_time"] = {{"lambda_c_per_s", lc},
                                {"multiplex_n", n},
                                {"seconds", tm},
                                {"years", tm / kYear},
                                {"days", tm / kDay}};
    if (run.pipeline) body["pipeline"] = pipeline_json(*run.pipeline);
    ctx.write("budget.json", render_json(ctx.header(), body));

    for (const auto& r : b.rows) {
        out << r.channel << " rate=" << format_number(r.rate)
            << " lambda_min=" << format_number(r.lambda_min) << "\n";
    }
    out << "total rate=" << format_number(b.total_rate)
        << " lambda_min=" << format_number(b.total_lambda_min) << "\n";
    out << "eta=" << format_number(b.eta) << " D=" << format_number(b.D)
        << " t_meas_years=" << format_number(tm / kYear) << "\n";
    return 0;
}

int cmd_simulate(const Context& ctx, const std::string& scenario, std::ostream& out) {
    const auto& c = ctx.config;
    SystemParams params = c.system.to_params();
    const std::string stem = [&] {
        std::string s = scenario;
        std::replace(s.begin(), s.end(), '-', '_');
        return s;
    }();

    json body;
    if (scenario == "eta-om" || scenario == "eta-stokes" || scenario == "eta-om2") {
        params.rwa = true;
        ScenarioResult r;
        if (scenario == "eta-om") {
            r = eta_om(params, scenario_options(c));
        } else if (scenario == "eta-stokes") {
            r = eta_stokes(params, scenario_options(c));
        } else {
            r = eta_om2(params, om2_options(c));
        }
        ctx.write(stem + ".csv", render_csv(ctx.header(), timeseries_table(r.series)));
        body = {{"scenario", r.name}, {"value", r.value},
                {"convergence", convergence_json(r.convergence)}};
        out << r.name << "=" << format_number(r.value) << "\n";
    } else if (scenario == "counterrot") {
        const auto cr = counterrot_populations(params, counterrot_options(c));
        ctx.write(stem + ".csv", render_csv(ctx.header(), timeseries_table(cr.series)));
        body = counterrot_json(cr);
        out << "p_cr1=" << format_number(cr.p_cr1) << "\n"
            << "p_cr2=" << format_number(cr.p_cr2) << "\n";
    } else if (scenario == "p-om") {
        const auto p = run_noise_pipeline(params, c.eta_p, counterrot_options(c), scenario_options(c),
                                          om2_options(c));
        ctx.write(stem + ".csv", render_csv(ctx.header(), timeseries_table(p.p_om.curve)));
        body = pipeline_json(p);
        out << "p_om=" << format_number(p.p_om.asymptote_closed_form) << "\n";
    } else {
        throw InvalidArgument("unknown scenario \"" + scenario + "\"");
    }
    ctx.write(stem + ".json", render_json(ctx.header(), body));
    return 0;
}

int run_one_sweep(const Context& ctx, const std::string& name, const GridSpec& grid,
                  std::ostream& out) {
    const auto& c = ctx.config;
    const auto param = parse_sweep_param(name);
    SystemParams base = c.system.to_params();
    base.rwa = true;
    const auto points = scenario_sweep(base, param, grid.values(), scenario_options(c),
                                       om2_options(c), Execution::OpenMP, ctx.jobs);
    Table t;
    t.columns = {name, "eta_om", "eta_stokes", "eta_om2"};
    for (const auto& p : points) t.add(std::vector<double>{p.x, p.eta_om, p.eta_stokes, p.eta_om2});
    ctx.write("sweep_" + name + ".csv", render_csv(ctx.header(), t));
    out << "sweep " << name << ": " << points.size() << " points\n";
    return 0;
}

int cmd_sweep(const Context& ctx, const std::string& param, const std::string& grid,
              std::ostream& out) {
    if (!param.empty()) {
        if (grid.empty()) throw ConfigError("grid", "--grid is required with --param");
        return run_one_sweep(ctx, param, parse_grid(grid, "grid"), out);
    }
    if (ctx.config.sweeps.empty()) {
        throw ConfigError("sweeps", "no --param given and the config lists no sweeps");
    }
    for (const auto& s : ctx.config.sweeps) run_one_sweep(ctx, s.name, s.grid, out);
    return 0;
}

int cmd_exclude(const Context& ctx, const std::string& rc_grid, std::ostream& out) {
    const auto& c = ctx.config;
    if (c.geometry.shape != "cuboid") {
        throw ConfigError("geometry.shape", "exclusion curves are computed for cuboid resonators");
    }
    const auto grid = parse_grid(rc_grid, "rc-grid");
    if (grid.values().front() <= 0.0) throw ConfigError("rc-grid", "r_c values must be positive");
    const auto run = compute_budget(c);
    const auto& g = c.geometry;
    const auto curve = exclusion_curve(grid.values(), Cuboid{g.L1, g.L2, g.L3, g.density},
                                       c.system.x0(), run.budget.total_rate, run.budget.eta,
                                       Execution::OpenMP, ctx.jobs);
    Table t;
    t.columns = {"r_c_m", "D", "lambda_min_per_s"};
    for (const auto& p : curve) t.add(std::vector<double>{p.r_c, p.D, p.lambda_min});
    ctx.write("exclusion.csv", render_csv(ctx.header(), t));
    const auto best = std::min_element(curve.begin(), curve.end(), [](auto& a, auto& b) {
        return a.lambda_min < b.lambda_min;
    });
    out << "exclusion: " << curve.size() << " points, min lambda_min="
        << format_number(best->lambda_min) << " at r_c=" << format_number(best->r_c) << "\n";
    return 0;
}

int cmd_heatmap(const Context& ctx, std::ostream& out) {
    const auto& h = ctx.config.heatmap;
    HeatingMapSpec spec;
    spec.diameters = h.diameters.values();
    spec.temperatures = h.temperatures;
    spec.Q = h.Q;
    spec.c_sound = h.c_sound;
    spec.density = h.density;
    spec.r_c = ctx.config.collapse.r_c;
    spec.bounds = default_collapse_bounds();
    spec.lambda_grw = ctx.config.collapse.lambda_grw;
    const auto rows = heating_map(spec, Execution::OpenMP, ctx.jobs);

    Table t;
    t.columns = {"diameter_m", "omega_rad_s", "gamma_rad_s", "mass_kg", "x0_m", "D_sphere"};
    for (double T : spec.temperatures) t.columns.push_back("thermal_" + format_number(T) + "K");
    for (const auto& b : spec.bounds) t.columns.push_back("csl_" + b.name);
    t.columns.push_back("grw");
    for (const auto& r : rows) {
        std::vector<double> v{r.diameter, r.omega, r.gamma, r.mass, r.x0, r.d_sphere};
        v.insert(v.end(), r.thermal.begin(), r.thermal.end());
        v.insert(v.end(), r.csl.begin(), r.csl.end());
        v.push_back(r.grw);
        t.add(v);
    }
    ctx.write("heatmap.csv", render_csv(ctx.header(), t));
    out << "heatmap: " << rows.size() << " diameters x " << spec.temperatures.size()
        << " temperatures\n";
    return 0;
}

int cmd_dp(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto run = compute_budget(c);
    const double x0 = c.system.x0();
    const double density = c.geometry.density;
    // Phonon flux that would produce the same coincidence rate as the total noise.
    const double flux = run.budget.total_lambda_min * run.budget.D;
    const double r_dp = dp_cutoff_from_noise(flux, x0, c.collapse.lattice_a, c.system.m_eff, density);
    json body{{"noise_flux_per_s", flux},
              {"r_dp_m", r_dp},
              {"r_dp_quoted_m", 3.9e-15},
              {"lattice_a_m", c.collapse.lattice_a},
              {"mass_kg", c.system.m_eff},
              {"density_kg_m3", density}};
    if (c.collapse.r_dp > 0.0) {
        body["d_dp_at_config_r_dp_per_s"] =
            d_dp(x0, c.collapse.lattice_a, c.collapse.r_dp, c.system.m_eff, density);
    }
    ctx.write("dp.json", render_json(ctx.header(), body));
    out << "r_dp=" << format_number(r_dp) << "\n";
    return 0;
}

int cmd_quadratic(const Context& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const double d = c.paper_values ? ReferenceValues::D : collapse_d(c);
    const auto r = quadratic_feasibility(c.quadratic.to_params(), c.collapse.lambda_c, d,
                                         c.absorption.n_abs_base);
    json body{{"N", r.N},
              {"sigma_rad_s", r.sigma},
              {"shift_rad_s", r.shift},
              {"tail_probability", r.tail_probability},
              {"spurious_rate_per_s", r.spurious_rate},
              {"threshold_printed_rad_s", r.threshold_printed},
              {"threshold_printed_hz", r.threshold_printed / kTwoPi},
              {"threshold_derived_rad_s", r.threshold_derived},
              {"threshold_derived_hz", r.threshold_derived / kTwoPi},
              {"backaction_flux_per_s", r.backaction_flux},
              {"g_max_rad_s", r.g_max},
              {"g_max_hz", r.g_max / kTwoPi},
              {"D", d},
              {"n_abs_cube_root_law", r.n_abs_law},
              {"n_abs_quoted", r.n_abs_quoted}};
    ctx.write("quadratic.json", render_json(ctx.header(), body));
    out << "threshold_printed_hz=" << format_number(r.threshold_printed / kTwoPi) << "\n"
        << "threshold_derived_hz=" << format_number(r.threshold_derived / kTwoPi) << "\n"
        << "g_max_hz=" << format_number(r.g_max / kTwoPi) << "\n";
    return 0;
}

int exit_code(const Error& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
    return 2;
}

void report(std::ostream& err, const std::string& kind, const std::string& message,
            const std::string& field = "") {
    json j{{"error", {{"kind", kind}, {"message", message}}}};
    if (!field.empty()) j["error"]["field"] = field;
    err << j.dump() << "\n";
}

}  // namespace

BudgetRun compute_budget(const RunConfig& c) {
    BudgetInputs in;
    in.system = c.system.to_params();
    in.temperature = c.system.temperature;
    in.eta_p = c.eta_p;
    in.filter = c.filter.to_params();
    in.detection = c.detection;
    in.absorption = c.absorption.to_params();
    in.multiplex_n = c.multiplex_n;

    BudgetRun run;
    if (c.paper_values) {
        in.eta_om = ReferenceValues::eta_om;
        in.p_om = ReferenceValues::p_om;
        in.p_f = ReferenceValues::p_f;
        in.D = ReferenceValues::D;
        in.upstream_source = "paper_values";
    } else {
        auto pipeline = run_noise_pipeline(in.system, c.eta_p, counterrot_options(c),
                                           scenario_options(c), om2_options(c));
        in.eta_om = pipeline.eta_om;
        in.p_om = pipeline.p_om.asymptote_closed_form;
        in.D = collapse_d(c);
        in.upstream_source = "live";
        run.pipeline = std::move(pipeline);
    }
    run.budget = build_table(in);
    return run;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cslprobe: collapse-model phonon-counting noise budget toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int jobs = 0;
    bool paper_values = false;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (default: $CSLPROBE_OUT or .)");
    app.add_option("--jobs", jobs, "worker count for grid commands (default: all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--paper-values", paper_values,
                 "inject the published intermediate values instead of simulating them");

    auto* budget = app.add_subcommand("budget", "noise budget table");
    std::string scenario;
    auto* simulate = app.add_subcommand("simulate", "run one master-equation scenario");
    simulate->add_option("--scenario", scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember({"eta-om", "eta-stokes", "eta-om2", "counterrot", "p-om"}));
    std::string sweep_param;
    std::string sweep_grid;
    auto* sweep = app.add_subcommand("sweep", "scenario sweep over one parameter");
    sweep->add_option("--param", sweep_param, "g0_over_kappa_p or kappa_s_ex_over_kappa_p");
    sweep->add_option("--grid", sweep_grid, "start:stop:count[:log]");
    std::string rc_grid = "1e-9:1e-5:41:log";
    auto* exclude = app.add_subcommand("exclude", "minimum testable lambda_c versus r_c");
    exclude->add_option("--rc-grid", rc_grid, "r_c grid in m, start:stop:count[:log]");
    auto* heatmap = app.add_subcommand("heatmap", "thermal and collapse heating of silica spheres");
    auto* dp = app.add_subcommand("dp", "Diosi-Penrose cutoff testable with the noise budget");
    auto* quadratic = app.add_subcommand("quadratic", "quadratic-coupling feasibility numbers");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, "usage", e.what());
        return 2;
    }

    try {
        Context ctx;
        ctx.config = config_path.empty() ? parse_config("") : load_config(config_path);
        if (paper_values) ctx.config.paper_values = true;
        ctx.out_dir = resolve_output_dir(out_dir.empty() ? ctx.config.output.dir : out_dir);
        ctx.jobs = jobs;
        ctx.command = app.get_subcommands().front()->get_name();

        if (budget->parsed()) return cmd_budget(ctx, out);
        if (simulate->parsed()) {
            ctx.command += " --scenario " + scenario;
            return cmd_simulate(ctx, scenario, out);
        }
        if (sweep->parsed()) {
            if (!sweep_param.empty()) ctx.command += " --param " + sweep_param;
            if (!sweep_grid.empty()) ctx.command += " --grid " + sweep_grid;
            return cmd_sweep(ctx, sweep_param, sweep_grid, out);
        }
        if (exclude->parsed()) {
            ctx.command += " --rc-grid " + rc_grid;
            return cmd_exclude(ctx, rc_grid, out);
        }
        if (heatmap->parsed()) return cmd_heatmap(ctx, out);
        if (dp->parsed()) return cmd_dp(ctx, out);
        if (quadratic->parsed()) return cmd_quadratic(ctx, out);
    } catch (const ConfigError& e) {
        report(err, e.kind(), e.what(), e.field());
        return exit_code(e);
    } catch (const Error& e) {
        report(err, e.kind(), e.what());
        return exit_code(e);
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return 1;
    }
    return 1;
}

}  // namespace cslprobe::cli
