#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elk/audit.hpp"
#include "elk/scenario.hpp"
#include "elk/solvers.hpp"
#include "elk/state.hpp"

namespace elk {

// Command-line overrides applied on top of a scenario's own settings.
struct RunOptions {
    std::string output_directory;       // overrides output.directory when nonempty
    std::optional<bool> strict_audit;   // overrides audit.strict
    std::optional<double> end_time;     // overrides numerics.end_time (transient mode)
    bool force = false;                 // run even when scaling classifies outside the electrostatic limit
};

struct RunResult {
    std::vector<std::string> warnings;  // load-time + model-assumption warnings
    int steps = 0;
    double final_time = 0.0;
    std::string output_directory;
    int audit_records = 0;
    int audit_violations = 0;           // summed over all audit records
    SteadyReport steady;                // steady mode only
    ConservationReport conservation;
    MixtureState final_state;           // also written to <dir>/final.csv
};

// Drive a scenario end to end and write its outputs:
//   final.csv            cell-centered fields, one row per cell
//   snapshot_<step>.csv  at output.snapshot_every cadence (when > 0)
//   audit_log.jsonl      one JSON object per audited step
//   metadata.json        run identity, column layout, warnings, the scenario
// Snapshot columns are x,rho,y_1..y_L,phi,v,T,p,rho_E with shortest
// round-trip number formatting, so reruns are byte-identical.
//
// Throws ConfigError for inconsistent setups, SolverError when the march
// fails (or the scaling block classifies outside the electrostatic limit),
// and AuditError when audit.strict is set and a budget check fails -- the
// offending audit record is written out first.
RunResult run_scenario(const Scenario& sc, const RunOptions& opts = {});

// Summarize a completed run directory (metadata.json, audit_log.jsonl,
// final.csv) as human-readable text.
std::string report_run(const std::string& directory);

} // namespace elk
