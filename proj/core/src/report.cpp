#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "elk/errors.hpp"
#include "elk/runner.hpp"

namespace elk {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": not valid JSON: " + e.what());
    }
}

struct CsvTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;

    int column(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    CsvTable table;
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) table.names.push_back(cell);
    }
    table.cols.resize(table.names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t pos = 0;
        for (size_t i = 0; i < table.cols.size(); ++i) {
            const size_t next = line.find(',', pos);
            const std::string_view tok(line.data() + pos, (next == std::string::npos ? line.size() : next) - pos);
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc())
                throw ConfigError(path.string() + ": malformed number '" + std::string(tok) + "'");
            table.cols[i].push_back(v);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    }
    return table;
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// Least-squares fit of log |phi - phi_bulk| against x over the declared
// window; the fitted decay length is -1/slope. The bulk level is the mean
// potential over the central fifth of the domain: in a closed cell the far
// field floats to whatever value global neutrality demands, and only the
// deviation from it is screened.
void append_debye_fit(std::ostringstream& out, const json& oracle, const CsvTable& table) {
    const int xi = table.column("x");
    const int pi = table.column("phi");
    if (xi < 0 || pi < 0) {
        out << "oracle (debye): final.csv lacks x/phi columns\n";
        return;
    }
    const double lo = oracle.at("window").at(0).get<double>();
    const double hi = oracle.at("window").at(1).get<double>();

    double x_min = 0.0, x_max = 0.0;
    bool have_x = false;
    for (double x : table.cols[xi]) {
        if (!std::isfinite(x)) continue;
        x_min = have_x ? std::min(x_min, x) : x;
        x_max = have_x ? std::max(x_max, x) : x;
        have_x = true;
    }
    double bulk = 0.0;
    int bulk_cells = 0;
    if (have_x) {
        const double b_lo = x_min + 0.4 * (x_max - x_min);
        const double b_hi = x_min + 0.6 * (x_max - x_min);
        for (size_t k = 0; k < table.cols[xi].size(); ++k) {
            const double x = table.cols[xi][k];
            const double phi = table.cols[pi][k];
            if (x < b_lo || x > b_hi || !std::isfinite(phi)) continue;
            bulk += phi;
            ++bulk_cells;
        }
        bulk = bulk_cells >= 3 ? bulk / bulk_cells : 0.0;
    }

    std::vector<double> xs, ls;
    for (size_t k = 0; k < table.cols[xi].size(); ++k) {
        const double x = table.cols[xi][k];
        const double dphi = table.cols[pi][k] - bulk;
        if (x < lo || x > hi || dphi == 0.0 || !std::isfinite(dphi)) continue;
        xs.push_back(x);
        ls.push_back(std::log(std::fabs(dphi)));
    }
    if (xs.size() < 3) {
        out << "oracle (debye): fewer than three usable cells in window [" << num(lo) << ", " << num(hi) << "]\n";
        return;
    }
    double sx = 0, sl = 0, sxx = 0, sxl = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sl += ls[i];
        sxx += xs[i] * xs[i];
        sxl += xs[i] * ls[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxl - sx * sl) / (n * sxx - sx * sx);
    if (!(slope < 0.0)) {
        out << "oracle (debye): potential does not decay over the window (slope " << num(slope) << ")\n";
        return;
    }
    const double fitted = -1.0 / slope;
    out << "oracle (debye): fitted decay length " << num(fitted) << " from " << xs.size() << " cells in ["
        << num(lo) << ", " << num(hi) << "] above bulk level " << num(bulk);
    if (oracle.contains("decay_length")) {
        const double expected = oracle.at("decay_length").get<double>();
        out << "; expected " << num(expected) << ", relative error " << num(std::fabs(fitted - expected) / expected);
    }
    out << "\n";
}

} // namespace

std::string report_run(const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    if (!fs::exists(dir / "metadata.json"))
        throw ConfigError(directory + ": not a completed run directory (metadata.json missing)");
    const json meta = read_json_file(dir / "metadata.json");

    std::ostringstream out;
    out << "run:      " << meta.value("name", std::string("?")) << "  (model " << meta.value("model", std::string("?"))
        << ", " << meta.value("version", std::string("?")) << ")\n";
    if (meta.contains("grid")) {
        const json& g = meta.at("grid");
        out << "grid:     " << g.value("cells", 0) << " cells over length " << num(g.value("length", 0.0))
            << (g.value("periodic", false) ? ", periodic" : "") << "\n";
    }
    out << "march:    " << meta.value("steps", 0) << " steps to t = " << num(meta.value("final_time", 0.0));
    if (meta.contains("wall_time_seconds")) out << "  (" << num(meta.value("wall_time_seconds", 0.0)) << " s)";
    if (meta.contains("steady")) {
        const json& st = meta.at("steady");
        out << "  [steady: " << (st.value("converged", false) ? "converged" : "NOT converged") << ", residual "
            << num(st.value("residual", 0.0)) << "]";
    }
    out << "\n";

    if (meta.contains("scaling_regime")) {
        const json& r = meta.at("scaling_regime");
        out << "regime:   " << r.value("limit", std::string("?")) << "  (delta_V " << num(r.value("delta_V", 0.0))
            << ", delta_W " << num(r.value("delta_W", 0.0)) << ", delta_V/delta_W " << num(r.value("ratio_V_W", 0.0))
            << ", alpha " << num(r.value("alpha", 0.0)) << ", threshold " << num(r.value("delta_threshold", 0.0))
            << ")\n";
    }

    const std::vector<std::string> warnings = meta.value("warnings", std::vector<std::string>{});
    out << "warnings: " << warnings.size() << "\n";
    for (const std::string& w : warnings) out << "  - " << w << "\n";

    if (meta.contains("conservation")) {
        const json& c = meta.at("conservation");
        out << "conservation: " << (c.value("closed", false) ? "closed system" : "open system") << "; mass drift "
            << num(c.value("mass_drift", 0.0)) << ", charge drift " << num(c.value("charge_drift", 0.0)) << "\n";
        const std::vector<double> drift = c.value("species_drift", std::vector<double>{});
        const std::vector<std::string> names = meta.value("species", std::vector<std::string>{});
        if (!drift.empty()) {
            out << "  species drift:";
            for (size_t l = 0; l < drift.size(); ++l)
                out << " " << (l < names.size() ? names[l] : "y_" + std::to_string(l + 1)) << " " << num(drift[l]);
            out << "\n";
        }
    }

    // audit log: count records and violations, show the final record; track
    // extremes of the per-step entropy production across the whole run
    int records = 0;
    int violations = 0;
    bool any_entropy = false;
    double min_total = 0.0, max_total = 0.0, min_cell_worst = 0.0;
    json last;
    if (fs::exists(dir / "audit_log.jsonl")) {
        std::ifstream log(dir / "audit_log.jsonl");
        std::string line;
        while (std::getline(log, line)) {
            if (line.empty()) continue;
            try {
                last = json::parse(line);
            } catch (const json::exception& e) {
                throw ConfigError((dir / "audit_log.jsonl").string() + ": not valid JSONL: " + e.what());
            }
            ++records;
            if (last.contains("violations")) violations += static_cast<int>(last.at("violations").size());
            if (last.contains("entropy")) {
                const json& e = last.at("entropy");
                const double total = e.value("total", 0.0);
                const double min_cell = e.value("min_cell", 0.0);
                if (!any_entropy) {
                    min_total = max_total = total;
                    min_cell_worst = min_cell;
                    any_entropy = true;
                } else {
                    min_total = std::min(min_total, total);
                    max_total = std::max(max_total, total);
                    min_cell_worst = std::min(min_cell_worst, min_cell);
                }
            }
        }
    }
    out << "audits:   " << records << (records == 1 ? " record, " : " records, ") << violations
        << (violations == 1 ? " violation" : " violations") << "\n";
    if (any_entropy)
        out << "  entropy production over the run: min " << num(min_total) << ", max " << num(max_total)
            << "; worst cell " << num(min_cell_worst) << "\n";
    if (!last.is_null() && last.contains("entropy")) {
        const json& e = last.at("entropy");
        out << "entropy (step " << last.value("step", 0) << ", t = " << num(last.value("time", 0.0)) << "):\n";
        out << "  total " << num(e.value("total", 0.0)) << "  (chemical form "
            << num(e.value("total_chemical_form", 0.0)) << ")\n";
        out << "  fourier " << num(e.value("fourier", 0.0)) << ", diffusion " << num(e.value("diffusion", 0.0))
            << ", viscous " << num(e.value("viscous", 0.0)) << ", mix_reaction " << num(e.value("mix_reaction", 0.0))
            << ", joule " << num(e.value("joule", 0.0)) << "\n";
        out << "  min cell " << num(e.value("min_cell", 0.0)) << ", counter-thermal cells "
            << e.value("counter_thermal_cells", 0) << "\n";
        if (last.contains("violations") && !last.at("violations").empty()) {
            out << "  final-record violations:\n";
            for (const json& v : last.at("violations"))
                out << "    - " << v.value("check", std::string("?")) << " at cell " << v.value("cell", -1)
                    << ": value " << num(v.value("value", 0.0)) << " vs tolerance " << num(v.value("tolerance", 0.0))
                    << "\n";
        }
    }

    if (fs::exists(dir / "final.csv")) {
        const CsvTable table = read_csv(dir / "final.csv");
        const std::vector<std::string> names = meta.value("species", std::vector<std::string>{});
        out << "fields (final.csv):\n";
        for (size_t i = 0; i < table.names.size(); ++i) {
            if (table.names[i] == "x" || table.cols[i].empty()) continue;
            double lo = table.cols[i][0], hi = table.cols[i][0];
            for (double v : table.cols[i]) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            std::string label = table.names[i];
            if (label.rfind("y_", 0) == 0) {
                const size_t idx = std::stoul(label.substr(2));
                if (idx >= 1 && idx <= names.size()) label += " (" + names[idx - 1] + ")";
            }
            out << "  " << std::left << std::setw(12) << label << " min " << num(lo) << "   max " << num(hi) << "\n";
        }
        if (meta.contains("scenario") && meta.at("scenario").contains("oracle")) {
            const json& oracle = meta.at("scenario").at("oracle");
            if (oracle.value("kind", std::string()) == "debye") append_debye_fit(out, oracle, table);
        }
    }
    return out.str();
}

} // namespace elk
