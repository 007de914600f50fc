// exclusion-bounds: command-line front end for the bound library.
//
// Subcommands: bounds (single-state report), sweep (parameter grids to CSV),
// verify (randomized soundness suite), compare (per-point bound ranking).
// Exit codes: 0 clean, 1 inequality violation / failed verification, 2 usage
// or input errors.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exbounds/io.hpp"

namespace {

using namespace exbounds;

int env_threads() {
    const char* raw = std::getenv("EXCLUSION_BOUNDS_THREADS");
    if (raw == nullptr) return 1;
    const int v = std::atoi(raw);
    return v >= 1 ? v : 1;
}

BOrdering to_ordering(const std::string& s) {
    return s == "descending" ? BOrdering::descending : BOrdering::ascending;
}

// grid override syntax: key=value or key=start:step:stop, keys joined by ','
std::vector<double> parse_grid_values(const std::string& text) {
    const auto colon1 = text.find(':');
    if (colon1 == std::string::npos) return {std::stod(text)};
    const auto colon2 = text.find(':', colon1 + 1);
    if (colon2 == std::string::npos)
        throw std::invalid_argument("grid range must be start:step:stop, got '" + text + "'");
    const double start = std::stod(text.substr(0, colon1));
    const double step = std::stod(text.substr(colon1 + 1, colon2 - colon1 - 1));
    const double stop = std::stod(text.substr(colon2 + 1));
    if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
    if (stop < start) throw std::invalid_argument("grid stop must be >= start");
    const int count = static_cast<int>(std::llround((stop - start) / step)) + 1;
    std::vector<double> values(static_cast<std::size_t>(std::max(count, 1)));
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = start + static_cast<double>(i) * step;
    return values;
}

void apply_grid_overrides(Scenario& s, const std::vector<std::string>& overrides) {
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("grid override must be key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == s.parameter) {
            s.grid = parse_grid_values(value);
        } else if (key == "phi") {
            const std::vector<double> v = parse_grid_values(value);
            if (v.size() != 1)
                throw std::invalid_argument("phi takes a single value, not a range");
            s.phi = v[0];
        } else {
            throw std::invalid_argument("unknown grid parameter '" + key + "' (scenario uses '" +
                                        s.parameter + "' and phi)");
        }
    }
}

std::vector<std::pair<std::string, std::string>> parse_diffs(
    const std::vector<std::string>& specs) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& s : specs) {
        const auto dash = s.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == s.size())
            throw std::invalid_argument("difference column must be minuend-subtrahend, got '" +
                                        s + "'");
        out.emplace_back(s.substr(0, dash), s.substr(dash + 1));
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct OracleFlags {
    int restarts = OracleOptions{}.restarts;
    int iterations = OracleOptions{}.iterations;
    std::uint64_t seed = OracleOptions{}.seed;
    int threads = env_threads();

    void attach(CLI::App* cmd) {
        cmd->add_option("--restarts", restarts, "oracle restarts per Omega_k")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--iterations", iterations, "oracle ascent iterations per restart")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--oracle-seed", seed, "seed for the majorization oracle restarts");
        cmd->add_option("--threads", threads,
                        "worker threads (default: EXCLUSION_BOUNDS_THREADS or 1)")
            ->check(CLI::PositiveNumber);
    }

    OracleOptions options() const {
        OracleOptions o;
        o.restarts = restarts;
        o.iterations = iterations;
        o.seed = seed;
        o.threads = threads;
        return o;
    }
};

void check_bound_selection(const std::vector<std::string>& names, int n) {
    const std::vector<std::string>& known = known_bound_names();
    for (const std::string& name : names) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw std::invalid_argument("unknown bound '" + name + "'");
        if (!bound_applicable(name, n))
            throw std::invalid_argument("inapplicable bound '" + name + "' for " +
                                        std::to_string(n) + " measurements");
    }
}

int cmd_bounds(const std::string& state_path, const std::string& ensemble_path,
               const std::vector<std::string>& selection, const std::string& out_path,
               const std::string& ordering, const OracleFlags& oracle) {
    const Ensemble e = load_ensemble(ensemble_path);
    const DensityMatrix rho = load_state(state_path);
    check_bound_selection(selection, e.n());

    const EnsembleContext ctx = prepare_ensemble(e, oracle.options());
    if (ctx.omega.inflation_count > 0)
        std::cerr << "note: dominance validation enlarged " << ctx.omega.inflation_count
                  << " majorization coefficient(s)\n";

    BoundReport rep = full_report(rho, ctx, to_ordering(ordering));
    if (!selection.empty()) {
        std::vector<BoundEntry> kept;
        for (const std::string& name : selection)
            if (const BoundEntry* b = rep.find(name)) kept.push_back(*b);
        rep.bounds = std::move(kept);
    }

    emit(serialize_report(rep), out_path);
    return rep.worst_slack() < -tol::tau_verify ? 1 : 0;
}

SweepSpec build_spec(const std::string& preset, const std::string& scenario_name,
                     const std::vector<std::string>& grid_overrides,
                     const std::vector<std::string>& bound_names,
                     const std::vector<std::string>& diff_specs, const std::string& state_path,
                     const std::string& ordering, const OracleFlags& oracle) {
    SweepSpec spec;
    if (!preset.empty()) {
        spec = preset_sweep(preset);
    } else {
        spec.scenario = make_scenario(scenario_name);
        if (bound_names.empty())
            throw std::invalid_argument("--bounds is required with --scenario");
        spec.bounds = bound_names;
    }
    apply_grid_overrides(spec.scenario, grid_overrides);
    if (!preset.empty() && !bound_names.empty()) spec.bounds = bound_names;
    for (auto& d : parse_diffs(diff_specs)) spec.diffs.push_back(std::move(d));
    spec.ordering = to_ordering(ordering);
    spec.oracle = oracle.options();
    if (!state_path.empty()) spec.state = load_state(state_path);
    return spec;
}

int cmd_sweep(const SweepSpec& spec, const std::string& out_path) {
    emit(to_csv(run_sweep(spec)), out_path);
    return 0;
}

int cmd_compare(const SweepSpec& spec, const std::string& out_path) {
    const CompareTable table = run_compare(spec);
    emit(to_csv(table), out_path);
    for (const auto& [name, wins] : table.win_counts)
        std::cerr << "wins " << name << "=" << wins << "\n";
    return 0;
}

int cmd_verify(int trials, std::uint64_t seed, const std::vector<int>& dims,
               const std::vector<std::string>& ensemble_paths, int dominance_states,
               double omega_scale, double tolerance, const std::string& ordering,
               const OracleFlags& oracle) {
    VerifyOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    opt.dims = dims;
    opt.dominance_states = dominance_states;
    opt.omega_scale = omega_scale;
    opt.tolerance = tolerance;
    opt.ordering = to_ordering(ordering);
    opt.oracle = oracle.options();
    for (const std::string& path : ensemble_paths) {
        if (path == "presets") continue;  // keyword for the built-in family grid
        opt.ensembles.push_back(load_ensemble(path));
    }

    const std::vector<VerifyCheck> checks = run_verification(opt);
    std::cout << verify_summary(checks);
    for (const VerifyCheck& c : checks)
        if (!c.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-exclusion and uncertainty bounds for multiple measurements"};
    app.require_subcommand(1);

    const std::vector<std::string> orderings = {"ascending", "descending"};

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "full bound report for one state");
    std::string state_path, ensemble_path, out_path;
    std::vector<std::string> selection;
    std::string ordering = "ascending";
    OracleFlags bounds_oracle;
    bounds_cmd->add_option("--state", state_path, "density-matrix file")->required();
    bounds_cmd->add_option("--ensemble", ensemble_path, "measurement-ensemble file")->required();
    bounds_cmd->add_option("--bounds", selection, "comma-separated bound names to report")
        ->delimiter(',');
    bounds_cmd->add_option("--out", out_path, "output path (default: stdout)");
    bounds_cmd->add_option("--ordering", ordering, "product-vector pairing order")
        ->check(CLI::IsMember(orderings));
    bounds_oracle.attach(bounds_cmd);

    // sweep / compare share their configuration surface
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate bounds over a parameter grid");
    auto* compare_cmd = app.add_subcommand("compare", "rank bounds over a parameter grid");
    struct GridArgs {
        std::string preset, scenario, state, out, ordering = "ascending";
        std::vector<std::string> grid, bounds, diffs;
        OracleFlags oracle;
    };
    GridArgs sweep_args, compare_args;
    auto add_grid_options = [&](CLI::App* cmd, GridArgs& a, bool with_preset) {
        auto* scenario_opt =
            cmd->add_option("--scenario", a.scenario, "measurement family name")
                ->check(CLI::IsMember(known_scenarios()));
        if (with_preset) {
            auto* preset_opt = cmd->add_option("--preset", a.preset, "pinned figure sweep")
                                   ->check(CLI::IsMember(known_presets()));
            preset_opt->excludes(scenario_opt);
            scenario_opt->excludes(preset_opt);
        } else {
            scenario_opt->required();
        }
        cmd->add_option("--grid", a.grid, "overrides, e.g. a=0:0.02:1,phi=1.5708")
            ->delimiter(',');
        cmd->add_option("--bounds", a.bounds, "comma-separated bound names")->delimiter(',');
        cmd->add_option("--diff", a.diffs, "difference column minuend-subtrahend")
            ->delimiter(',');
        cmd->add_option("--state", a.state, "complete bounds with this state's memory terms");
        cmd->add_option("--out", a.out, "output path (default: stdout)");
        cmd->add_option("--ordering", a.ordering, "product-vector pairing order")
            ->check(CLI::IsMember(orderings));
        a.oracle.attach(cmd);
    };
    add_grid_options(sweep_cmd, sweep_args, true);
    add_grid_options(compare_cmd, compare_args, false);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "randomized soundness suite");
    int trials = 1000;
    std::uint64_t seed = 7;
    std::vector<int> dims = {2, 3};
    std::vector<std::string> ensemble_paths;
    int dominance_states = 500;
    double omega_scale = 1.0;
    double tolerance = tol::tau_verify;
    std::string verify_ordering = "ascending";
    OracleFlags verify_oracle;
    verify_cmd->add_option("--trials", trials, "random states across all ensembles")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", seed, "seed for the state sampler");
    verify_cmd->add_option("--dims", dims, "system dimensions, e.g. 2,3")->delimiter(',');
    verify_cmd
        ->add_option("--ensembles", ensemble_paths,
                     "ensemble files to test instead of the built-in families "
                     "('presets' keeps the built-ins)")
        ->delimiter(',');
    verify_cmd->add_option("--dominance-states", dominance_states,
                           "states per ensemble for the majorization dominance check")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--omega-scale", omega_scale,
                           "fault-injection factor on the majorization coefficients")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tolerance", tolerance, "violation tolerance")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--ordering", verify_ordering, "product-vector pairing order")
        ->check(CLI::IsMember(orderings));
    verify_oracle.attach(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bounds_cmd->parsed())
            return cmd_bounds(state_path, ensemble_path, selection, out_path, ordering,
                              bounds_oracle);
        if (sweep_cmd->parsed())
            return cmd_sweep(build_spec(sweep_args.preset, sweep_args.scenario, sweep_args.grid,
                                        sweep_args.bounds, sweep_args.diffs, sweep_args.state,
                                        sweep_args.ordering, sweep_args.oracle),
                             sweep_args.out);
        if (compare_cmd->parsed())
            return cmd_compare(build_spec("", compare_args.scenario, compare_args.grid,
                                          compare_args.bounds, compare_args.diffs,
                                          compare_args.state, compare_args.ordering,
                                          compare_args.oracle),
                               compare_args.out);
        if (verify_cmd->parsed())
            return cmd_verify(trials, seed, dims, ensemble_paths, dominance_states, omega_scale,
                              tolerance, verify_ordering, verify_oracle);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
