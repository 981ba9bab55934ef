// elk: 1-D finite-volume simulation of reactive multicomponent electrolyte
// mixtures with a built-in entropy and conservation auditor.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 solver failure
// (including a scaling regime outside the electrostatic limit), 3 audit
// violation under --strict-audit.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "elk/errors.hpp"
#include "elk/runner.hpp"
#include "elk/scaling.hpp"
#include "elk/scenario.hpp"
#include "elk/version.hpp"

namespace {

int do_run(const std::string& path, const elk::RunOptions& opts) {
    const elk::Scenario sc = elk::load_scenario(path);
    const elk::RunResult result = elk::run_scenario(sc, opts);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << sc.name << ": " << result.steps << " steps to t = " << result.final_time << ", outputs in "
              << result.output_directory << "\n";
    std::cout << "audits: " << result.audit_records << " records, " << result.audit_violations << " violations\n";
    return 0;
}

int do_validate(const std::string& path) {
    const elk::Scenario sc = elk::load_scenario(path);
    // Surface everything `run` would reject or warn about, without running.
    const elk::Problem prob = sc.build_problem();
    const elk::MixtureState state = sc.build_initial_state();
    for (const std::string& w : sc.warnings) std::cerr << "warning: " << w << "\n";
    for (const std::string& w : elk::model_assumption_warnings(prob, state)) std::cerr << "warning: " << w << "\n";
    std::cout << path << ": valid scenario '" << sc.name << "' (" << prob.n_species() << " species, "
              << prob.network.n_reactions << " reactions, " << sc.grid.n_cells << " cells)\n";
    return 0;
}

int do_classify(const std::string& path) {
    const elk::Scenario sc = elk::load_scenario(path);
    if (!sc.scaling) throw elk::ConfigError(path + ": no scaling block to classify");
    const elk::ScalingRegime regime = elk::classify_scaling(*sc.scaling, sc.constants);
    std::cout << "delta_V         = " << regime.deltas.delta_V << "\n"
              << "delta_W         = " << regime.deltas.delta_W << "\n"
              << "delta_rho       = " << regime.deltas.delta_rho << "\n"
              << "delta_i         = " << regime.deltas.delta_i << "\n"
              << "delta_V/delta_W = " << regime.deltas.delta_V / regime.deltas.delta_W << "\n"
              << "alpha           = " << regime.alpha << "\n"
              << "delta_threshold = " << sc.scaling->delta_threshold << "\n"
              << "limit           = " << elk::to_string(regime.limit) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D finite-volume electrolyte transport with an entropy/conservation auditor"};
    app.set_version_flag("--version", std::string("elk ") + elk::version);
    app.require_subcommand(1);

    std::string run_path, out_dir, report_dir, validate_path, classify_path;
    bool strict_audit = false, force = false;
    double end_time = 0.0;

    CLI::App* run = app.add_subcommand("run", "Integrate a scenario and write snapshots plus the audit log");
    run->add_option("scenario", run_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory (default: <scenario name>.out)");
    run->add_flag("--strict-audit", strict_audit, "Exit with code 3 when any entropy audit check fails");
    run->add_flag("--force", force, "Run even when the scaling block classifies outside the electrostatic limit");
    CLI::Option* end_opt = run->add_option("--end-time", end_time, "Override the scenario's end time");

    CLI::App* report = app.add_subcommand("report", "Summarize a completed run directory");
    report->add_option("directory", report_dir, "Run output directory")->required();

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file and list every problem");
    validate->add_option("scenario", validate_path, "Scenario JSON file")->required();

    CLI::App* classify = app.add_subcommand("classify", "Print the scaling deltas and the electromagnetic limit");
    classify->add_option("scenario", classify_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/version (code 0) or the usage error
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            elk::RunOptions opts;
            opts.output_directory = out_dir;
            if (strict_audit) opts.strict_audit = true;
            opts.force = force;
            if (end_opt->count() > 0) opts.end_time = end_time;
            return do_run(run_path, opts);
        }
        if (report->parsed()) {
            std::cout << elk::report_run(report_dir);
            return 0;
        }
        if (validate->parsed()) return do_validate(validate_path);
        if (classify->parsed()) return do_classify(classify_path);
    } catch (const elk::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const elk::AuditError& e) {
        std::cerr << "audit violation: " << e.what() << "\n";
        return 3;
    } catch (const elk::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const elk::StateError& e) {
        std::cerr << "state error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
