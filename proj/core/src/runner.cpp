#include "elk/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "elk/errors.hpp"
#include "elk/scaling.hpp"
#include "elk/version.hpp"

namespace elk {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form; used for every CSV number so that a
// rerun of the same scenario produces byte-identical files.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string snapshot_name(int step) {
    std::ostringstream name;
    name << "snapshot_";
    name.width(6);
    name.fill('0');
    name << step << ".csv";
    return name.str();
}

void write_csv(const std::filesystem::path& path, const Problem& prob, const MixtureState& s) {
    const int L = prob.n_species();
    const DerivedFields d = derived_fields(s, prob.species, prob.constants);
    std::ofstream f(path);
    if (!f) throw SolverError("cannot write " + path.string());
    f << "x,rho";
    for (int l = 1; l <= L; ++l) f << ",y_" << l;
    f << ",phi,v,T,p,rho_E\n";
    for (int k = 0; k < s.grid.n_cells; ++k) {
        f << format_double(s.grid.center(k)) << ',' << format_double(s.rho[k]);
        for (int l = 0; l < L; ++l) f << ',' << format_double(s.y_at(k, l));
        f << ',' << format_double(s.phi[k]) << ',' << format_double(s.v[k]) << ',' << format_double(s.T[k]) << ','
          << format_double(s.p[k]) << ',' << format_double(d.rho_E[k]) << '\n';
    }
}

json violations_to_json(const std::vector<EntropyViolation>& violations) {
    json arr = json::array();
    for (const EntropyViolation& v : violations)
        arr.push_back({{"check", v.check}, {"cell", v.cell}, {"value", v.value}, {"tolerance", v.tolerance}});
    return arr;
}

json audit_record(int step, const MixtureState& s, const EntropyBudget& budget, const ConservationReport& cons,
                  const AdvanceReport& adv, bool per_cell) {
    json rec;
    rec["step"] = step;
    rec["time"] = s.time;
    rec["entropy"] = {{"total", budget.integral_total_ec},
                      {"total_chemical_form", budget.integral_total_chem},
                      {"fourier", budget.integral_fourier},
                      {"diffusion", budget.integral_diffusion},
                      {"viscous", budget.integral_viscous},
                      {"mix_reaction", budget.integral_mix_reaction},
                      {"joule", budget.integral_joule},
                      {"min_cell", budget.min_total_ec},
                      {"counter_thermal_cells", budget.counter_thermal_cells}};
    rec["violations"] = violations_to_json(budget.violations);
    rec["conservation"] = {{"closed", cons.closed},
                           {"mass_drift", cons.mass_drift},
                           {"charge_drift", cons.charge_drift},
                           {"species_drift", cons.species_drift}};
    rec["solver"] = {{"gummel_iterations", adv.gummel_iterations},
                     {"poisson_residual", adv.poisson_residual},
                     {"dt_halvings", adv.dt_halvings}};
    if (per_cell) {
        const EntropyCellTerms& c = budget.cells;
        json cells;
        cells["electrothermal"] = c.electrothermal;
        cells["viscous"] = c.viscous;
        cells["thermo_mixing"] = c.thermo_mixing;
        cells["ec_reaction"] = c.ec_reaction;
        cells["total"] = c.total_ec;
        cells["heat"] = c.heat;
        cells["chemical_mixing"] = c.chemical_mixing;
        cells["chemical_reaction"] = c.chemical_reaction;
        cells["joule"] = c.joule;
        cells["total_chemical_form"] = c.total_chem;
        cells["diss_pure"] = c.diss_pure;
        cells["diss_mix_ec"] = c.diss_mix_ec;
        cells["diss_mix_chem"] = c.diss_mix_chem;
        cells["total_split"] = c.total_split;
        cells["total_entropic"] = c.total_entropic;
        cells["fourier"] = c.fourier;
        cells["diffusion"] = c.diffusion;
        cells["mix_reaction"] = c.mix_reaction;
        cells["pure_reaction"] = c.pure_reaction;
        cells["pure_diffusion"] = c.pure_diffusion;
        cells["flux"] = c.flux_ec;
        cells["flux_chemical_form"] = c.flux_chem;
        cells["flux_pure"] = c.flux_pure;
        cells["flux_mix"] = c.flux_mix_ec;
        cells["flux_mix_chemical_form"] = c.flux_mix_chem;
        cells["heat_flux"] = c.heat_flux;
        cells["current"] = c.current;
        cells["tolerance"] = c.tolerance;
        json flags = json::array();
        for (std::uint8_t f : c.counter_thermal_flux) flags.push_back(static_cast<int>(f));
        cells["counter_thermal_flux"] = std::move(flags);
        rec["per_cell"] = std::move(cells);
    }
    return rec;
}

std::string model_name(ModelKind m) {
    switch (m) {
    case ModelKind::General: return "general";
    case ModelKind::PNP: return "pnp";
    case ModelKind::DPNP: return "dpnp";
    }
    return "pnp";
}

} // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& opts) {
    Scenario scen = sc;
    if (opts.end_time) scen.numerics.end_time = *opts.end_time;
    if (opts.strict_audit) scen.audit.strict = *opts.strict_audit;

    const Problem prob = scen.build_problem();
    MixtureState s = scen.build_initial_state();

    RunResult result;
    result.warnings = scen.warnings;

    // Refuse dynamics outside the quasi-electrostatic limit this solver models.
    std::optional<ScalingRegime> regime;
    if (scen.scaling) {
        regime = classify_scaling(*scen.scaling, prob.constants);
        if (regime->limit != LimitRegime::Electrostatic) {
            if (!opts.force)
                throw SolverError("scaling classifies the dynamics as '" + to_string(regime->limit) +
                                  "'; this solver only integrates the electrostatic limit (delta_V = " +
                                  format_double(regime->deltas.delta_V) + ", threshold " +
                                  format_double(scen.scaling->delta_threshold) + "). Use --force to run anyway.");
            result.warnings.push_back("scaling: regime '" + to_string(regime->limit) +
                                      "' forced past the electrostatic gate");
        }
    }

    for (std::string& w : model_assumption_warnings(prob, s)) result.warnings.push_back(std::move(w));

    const std::filesystem::path dir = !opts.output_directory.empty()
                                          ? std::filesystem::path(opts.output_directory)
                                          : (!scen.output.directory.empty() ? std::filesystem::path(scen.output.directory)
                                                                            : std::filesystem::path(scen.name + ".out"));
    std::filesystem::create_directories(dir);
    result.output_directory = dir.string();

    std::ofstream audit_log(dir / "audit_log.jsonl");
    if (!audit_log) throw SolverError("cannot write " + (dir / "audit_log.jsonl").string());

    const auto wall_start = std::chrono::steady_clock::now();

    ConservationTracker tracker(prob);
    tracker.record(s);

    AdvanceReport last_adv;
    int last_audited = -1;

    auto do_audit = [&](int step) {
        if (!scen.audit.enabled || step == last_audited) return;
        last_audited = step;
        const EntropyBudget budget = entropy_production(prob, s);
        const ConservationReport cons = tracker.report();
        audit_log << audit_record(step, s, budget, cons, last_adv, scen.audit.per_cell).dump() << "\n";
        ++result.audit_records;
        result.audit_violations += static_cast<int>(budget.violations.size());
        if (scen.audit.strict && !budget.pass()) {
            audit_log.flush();
            const EntropyViolation& v = budget.violations.front();
            std::ostringstream msg;
            msg << "entropy audit failed at step " << step << " (t = " << s.time << "): " << budget.violations.size()
                << (budget.violations.size() == 1 ? " violation" : " violations") << "; first: check '" << v.check
                << "' at cell " << v.cell << ", value " << v.value << " against tolerance " << v.tolerance;
            throw AuditError(msg.str());
        }
    };

    do_audit(0);

    if (scen.steady_mode) {
        result.steady = steady_state(prob, s);
        result.steps = result.steady.steps;
        tracker.record(s);
        do_audit(result.steps);
        if (scen.output.final_snapshot) write_csv(dir / "final.csv", prob, s);
        if (!result.steady.converged) {
            std::ostringstream msg;
            msg << "steady march did not converge within " << result.steady.steps
                << " steps (residual " << result.steady.residual << ", tolerance " << scen.numerics.steady_tol << ")";
            throw SolverError(msg.str());
        }
    } else {
        const double end = scen.numerics.end_time;
        const double dt = scen.numerics.dt;
        const double tiny = 1e-12 * std::max(dt, end);
        int step = 0;
        while (s.time < end - tiny) {
            if (step >= scen.numerics.max_steps)
                throw SolverError("reached max_steps = " + std::to_string(scen.numerics.max_steps) +
                                  " before end_time; the run stops at t = " + format_double(s.time));
            const double step_dt = std::min(dt, end - s.time);
            last_adv = advance(prob, s, step_dt);
            ++step;
            tracker.record(s);
            if (scen.output.snapshot_every > 0 && step % scen.output.snapshot_every == 0)
                write_csv(dir / snapshot_name(step), prob, s);
            if (step % scen.audit.every == 0) do_audit(step);
        }
        result.steps = step;
        do_audit(step);
        if (scen.output.final_snapshot) write_csv(dir / "final.csv", prob, s);
    }

    result.final_time = s.time;
    result.conservation = tracker.report();
    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    json meta;
    meta["name"] = scen.name;
    meta["model"] = model_name(scen.model);
    meta["version"] = version;
    meta["grid"] = {{"cells", scen.grid.n_cells},
                    {"length", scen.grid.length},
                    {"dx", scen.grid.dx()},
                    {"periodic", scen.periodic}};
    json names = json::array();
    for (const SpeciesSpec& spec : scen.species) names.push_back(spec.species.name);
    meta["species"] = std::move(names);
    json columns = json::array();
    columns.push_back("x");
    columns.push_back("rho");
    for (size_t l = 1; l <= scen.species.size(); ++l) columns.push_back("y_" + std::to_string(l));
    for (const char* c : {"phi", "v", "T", "p", "rho_E"}) columns.push_back(c);
    meta["columns"] = std::move(columns);
    meta["warnings"] = result.warnings;
    meta["steps"] = result.steps;
    meta["final_time"] = result.final_time;
    meta["wall_time_seconds"] = wall_seconds;
    if (regime) {
        meta["scaling_regime"] = {{"delta_V", regime->deltas.delta_V},
                                  {"delta_W", regime->deltas.delta_W},
                                  {"delta_rho", regime->deltas.delta_rho},
                                  {"delta_i", regime->deltas.delta_i},
                                  {"ratio_V_W", regime->deltas.delta_V / regime->deltas.delta_W},
                                  {"alpha", regime->alpha},
                                  {"limit", to_string(regime->limit)},
                                  {"delta_threshold", scen.scaling->delta_threshold},
                                  {"forced", regime->limit != LimitRegime::Electrostatic}};
    }
    if (scen.steady_mode)
        meta["steady"] = {{"converged", result.steady.converged}, {"residual", result.steady.residual}};
    meta["conservation"] = {{"closed", result.conservation.closed},
                            {"mass_drift", result.conservation.mass_drift},
                            {"charge_drift", result.conservation.charge_drift},
                            {"species_drift", result.conservation.species_drift}};
    meta["scenario"] = json::parse(serialize_scenario(scen));
    std::ofstream meta_file(dir / "metadata.json");
    if (!meta_file) throw SolverError("cannot write " + (dir / "metadata.json").string());
    meta_file << meta.dump(2) << "\n";

    result.final_state = std::move(s);
    return result;
}

} // namespace elk
