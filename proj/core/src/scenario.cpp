#include "elk/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"

#include "elk/errors.hpp"

namespace elk {

// ---------------------------------------------------------------------------
// Profile evaluation
// ---------------------------------------------------------------------------

double ProfileSpec::eval(double x, double length) const {
    switch (kind) {
    case Kind::Constant:
        return value;
    case Kind::Gaussian: {
        const double d = x - center;
        return baseline + amplitude * std::exp(-0.5 * d * d / (width * width));
    }
    case Kind::Linear:
        return left + (right - left) * (length > 0.0 ? x / length : 0.0);
    case Kind::Sinusoidal:
        return mean + amplitude * std::sin(2.0 * std::numbers::pi * periods * (length > 0.0 ? x / length : 0.0) + phase);
    case Kind::Tabulated: {
        if (xs.empty()) return 0.0;
        if (x <= xs.front()) return values.front();
        if (x >= xs.back()) return values.back();
        size_t hi = 1;
        while (hi + 1 < xs.size() && xs[hi] < x) ++hi;
        const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return values[hi - 1] + w * (values[hi] - values[hi - 1]);
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Strict JSON schema
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

struct ParseContext {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    void error(const std::string& where, const std::string& what) { errors.push_back(where + ": " + what); }
};

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(ParseContext& ctx, const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) known = true;
        if (!known) ctx.error(sub(path, it.key()), "unknown key");
    }
}

bool has(const json& obj, const char* key) { return obj.is_object() && obj.contains(key); }

double get_number(ParseContext& ctx, const json& obj, const std::string& path, const char* key, bool required,
                  double fallback) {
    if (!has(obj, key)) {
        if (required) ctx.error(sub(path, key), "required number is missing");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        ctx.error(sub(path, key), "expected a number");
        return fallback;
    }
    return v.get<double>();
}

int get_int(ParseContext& ctx, const json& obj, const std::string& path, const char* key, bool required,
            int fallback) {
    if (!has(obj, key)) {
        if (required) ctx.error(sub(path, key), "required integer is missing");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        ctx.error(sub(path, key), "expected an integer");
        return fallback;
    }
    return v.get<int>();
}

bool get_bool(ParseContext& ctx, const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!has(obj, key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        ctx.error(sub(path, key), "expected true or false");
        return fallback;
    }
    return v.get<bool>();
}

std::string get_string(ParseContext& ctx, const json& obj, const std::string& path, const char* key, bool required,
                       const std::string& fallback) {
    if (!has(obj, key)) {
        if (required) ctx.error(sub(path, key), "required string is missing");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
        ctx.error(sub(path, key), "expected a string");
        return fallback;
    }
    return v.get<std::string>();
}

std::vector<double> get_number_array(ParseContext& ctx, const json& obj, const std::string& path, const char* key) {
    std::vector<double> out;
    if (!has(obj, key)) {
        ctx.error(sub(path, key), "required array is missing");
        return out;
    }
    const json& v = obj.at(key);
    if (!v.is_array()) {
        ctx.error(sub(path, key), "expected an array of numbers");
        return out;
    }
    for (const json& e : v) {
        if (!e.is_number()) {
            ctx.error(sub(path, key), "expected an array of numbers");
            return {};
        }
        out.push_back(e.get<double>());
    }
    return out;
}

ProfileSpec parse_profile(ParseContext& ctx, const json& j, const std::string& path) {
    ProfileSpec p;
    if (!j.is_object()) {
        ctx.error(path, "expected a profile object with a 'kind'");
        return p;
    }
    const std::string kind = get_string(ctx, j, path, "kind", true, "constant");
    if (kind == "constant") {
        check_keys(ctx, j, path, {"kind", "value"});
        p.kind = ProfileSpec::Kind::Constant;
        p.value = get_number(ctx, j, path, "value", true, 0.0);
    } else if (kind == "gaussian") {
        check_keys(ctx, j, path, {"kind", "center", "width", "amplitude", "baseline"});
        p.kind = ProfileSpec::Kind::Gaussian;
        p.center = get_number(ctx, j, path, "center", true, 0.0);
        p.width = get_number(ctx, j, path, "width", true, 1.0);
        p.amplitude = get_number(ctx, j, path, "amplitude", true, 0.0);
        p.baseline = get_number(ctx, j, path, "baseline", false, 0.0);
        if (!(p.width > 0.0)) ctx.error(sub(path, "width"), "must be positive");
    } else if (kind == "linear") {
        check_keys(ctx, j, path, {"kind", "left", "right"});
        p.kind = ProfileSpec::Kind::Linear;
        p.left = get_number(ctx, j, path, "left", true, 0.0);
        p.right = get_number(ctx, j, path, "right", true, 0.0);
    } else if (kind == "sinusoidal") {
        check_keys(ctx, j, path, {"kind", "mean", "amplitude", "periods", "phase"});
        p.kind = ProfileSpec::Kind::Sinusoidal;
        p.mean = get_number(ctx, j, path, "mean", true, 0.0);
        p.amplitude = get_number(ctx, j, path, "amplitude", true, 0.0);
        p.periods = get_number(ctx, j, path, "periods", false, 1.0);
        p.phase = get_number(ctx, j, path, "phase", false, 0.0);
    } else if (kind == "tabulated") {
        check_keys(ctx, j, path, {"kind", "x", "values"});
        p.kind = ProfileSpec::Kind::Tabulated;
        p.xs = get_number_array(ctx, j, path, "x");
        p.values = get_number_array(ctx, j, path, "values");
        if (p.xs.size() != p.values.size() || p.xs.size() < 2)
            ctx.error(path, "'x' and 'values' must have equal length of at least two");
        for (size_t i = 0; i + 1 < p.xs.size(); ++i)
            if (!(p.xs[i] < p.xs[i + 1])) {
                ctx.error(sub(path, "x"), "must be strictly increasing");
                break;
            }
    } else {
        ctx.error(sub(path, "kind"),
                  "unknown profile kind '" + kind + "' (constant, gaussian, linear, sinusoidal, tabulated)");
    }
    return p;
}

BoundaryCondition parse_bc_side(ParseContext& ctx, const json& j, const std::string& path) {
    BoundaryCondition bc;
    if (!j.is_object()) {
        ctx.error(path, "expected an object with a 'type'");
        return bc;
    }
    check_keys(ctx, j, path, {"type", "value"});
    const std::string type = get_string(ctx, j, path, "type", true, "no_flux");
    if (type == "dirichlet") {
        bc.type = BCType::Dirichlet;
        bc.value = get_number(ctx, j, path, "value", true, 0.0);
    } else if (type == "no_flux") {
        bc.type = BCType::NoFlux;
        if (has(j, "value")) ctx.error(sub(path, "value"), "no_flux carries no value");
    } else {
        ctx.error(sub(path, "type"), "unknown boundary type '" + type + "' (dirichlet, no_flux)");
    }
    return bc;
}

FieldBC parse_field_bc(ParseContext& ctx, const json& j, const std::string& path) {
    FieldBC bc;
    if (!j.is_object()) {
        ctx.error(path, "expected an object with 'left' and 'right'");
        return bc;
    }
    check_keys(ctx, j, path, {"left", "right"});
    if (has(j, "left")) bc.left = parse_bc_side(ctx, j.at("left"), sub(path, "left"));
    if (has(j, "right")) bc.right = parse_bc_side(ctx, j.at("right"), sub(path, "right"));
    return bc;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

} // namespace

Scenario parse_scenario_text(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": not valid JSON: " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": the top level must be a JSON object");

    ParseContext ctx;
    Scenario sc;

    check_keys(ctx, root, "",
               {"name", "model", "domain", "constants", "material", "species", "reactions", "velocity", "initial",
                "potential_boundary", "numerics", "scaling", "oracle", "audit", "output"});

    sc.name = get_string(ctx, root, "", "name", true, "scenario");
    if (!valid_name(sc.name))
        ctx.error("name", "must be nonempty and use only letters, digits, '_' or '-' (it names the output directory)");

    const std::string model = get_string(ctx, root, "", "model", false, "pnp");
    if (model == "general")
        sc.model = ModelKind::General;
    else if (model == "pnp")
        sc.model = ModelKind::PNP;
    else if (model == "dpnp")
        sc.model = ModelKind::DPNP;
    else
        ctx.error("model", "unknown model '" + model + "' (general, pnp, dpnp)");

    // domain
    if (has(root, "domain")) {
        const json& d = root.at("domain");
        check_keys(ctx, d, "domain", {"length", "cells", "periodic"});
        sc.grid.length = get_number(ctx, d, "domain", "length", true, 1.0);
        sc.grid.n_cells = get_int(ctx, d, "domain", "cells", true, 4);
        sc.periodic = get_bool(ctx, d, "domain", "periodic", false);
        if (!(sc.grid.length > 0.0)) ctx.error("domain.length", "must be positive");
        if (sc.grid.n_cells < 4) ctx.error("domain.cells", "at least four cells are required");
    } else {
        ctx.error("domain", "required object is missing");
    }

    // constants (optional overrides)
    if (has(root, "constants")) {
        const json& c = root.at("constants");
        check_keys(ctx, c, "constants", {"elementary_charge", "boltzmann", "vacuum_permittivity", "speed_of_light"});
        sc.constants.elementary_charge =
            get_number(ctx, c, "constants", "elementary_charge", false, sc.constants.elementary_charge);
        sc.constants.boltzmann = get_number(ctx, c, "constants", "boltzmann", false, sc.constants.boltzmann);
        sc.constants.vacuum_permittivity =
            get_number(ctx, c, "constants", "vacuum_permittivity", false, sc.constants.vacuum_permittivity);
        sc.constants.speed_of_light =
            get_number(ctx, c, "constants", "speed_of_light", false, sc.constants.speed_of_light);
        if (!(sc.constants.elementary_charge > 0.0)) ctx.error("constants.elementary_charge", "must be positive");
        if (!(sc.constants.boltzmann > 0.0)) ctx.error("constants.boltzmann", "must be positive");
        if (!(sc.constants.vacuum_permittivity > 0.0)) ctx.error("constants.vacuum_permittivity", "must be positive");
        if (!(sc.constants.speed_of_light > 0.0)) ctx.error("constants.speed_of_light", "must be positive");
    }

    // material
    if (has(root, "material")) {
        const json& m = root.at("material");
        check_keys(ctx, m, "material",
                   {"shear_viscosity", "bulk_viscosity", "thermal_conductivity", "relative_permittivity",
                    "reference_temperature", "reference_mass", "porosity", "permeability", "darcy_viscosity"});
        MaterialParams& mat = sc.material;
        mat.shear_viscosity = get_number(ctx, m, "material", "shear_viscosity", false, mat.shear_viscosity);
        mat.bulk_viscosity = get_number(ctx, m, "material", "bulk_viscosity", false, mat.bulk_viscosity);
        mat.thermal_conductivity =
            get_number(ctx, m, "material", "thermal_conductivity", false, mat.thermal_conductivity);
        mat.relative_permittivity =
            get_number(ctx, m, "material", "relative_permittivity", false, mat.relative_permittivity);
        mat.reference_temperature =
            get_number(ctx, m, "material", "reference_temperature", false, mat.reference_temperature);
        mat.reference_mass = get_number(ctx, m, "material", "reference_mass", false, mat.reference_mass);
        mat.porosity = get_number(ctx, m, "material", "porosity", false, mat.porosity);
        mat.permeability = get_number(ctx, m, "material", "permeability", false, mat.permeability);
        mat.darcy_viscosity = get_number(ctx, m, "material", "darcy_viscosity", false, mat.darcy_viscosity);
        if (mat.shear_viscosity < 0.0) ctx.error("material.shear_viscosity", "must be nonnegative");
        if (mat.thermal_conductivity < 0.0) ctx.error("material.thermal_conductivity", "must be nonnegative");
        if (!(mat.relative_permittivity > 0.0)) ctx.error("material.relative_permittivity", "must be positive");
        if (!(mat.reference_temperature > 0.0)) ctx.error("material.reference_temperature", "must be positive");
        if (!(mat.reference_mass > 0.0)) ctx.error("material.reference_mass", "must be positive");
        if (!(mat.porosity > 0.0 && mat.porosity <= 1.0)) ctx.error("material.porosity", "must lie in (0, 1]");
        if (mat.permeability < 0.0) ctx.error("material.permeability", "must be nonnegative");
        if (!(mat.darcy_viscosity > 0.0)) ctx.error("material.darcy_viscosity", "must be positive");
    }

    // species
    int solvent_count = 0;
    if (has(root, "species") && root.at("species").is_array()) {
        const json& arr = root.at("species");
        for (size_t idx = 0; idx < arr.size(); ++idx) {
            const std::string path = "species[" + std::to_string(idx) + "]";
            const json& e = arr.at(idx);
            if (!e.is_object()) {
                ctx.error(path, "expected a species object");
                continue;
            }
            check_keys(ctx, e, path,
                       {"name", "mass", "valency", "diffusivity", "solvent", "initial_fraction", "boundary"});
            SpeciesSpec spec;
            spec.species.name = get_string(ctx, e, path, "name", true, "");
            spec.species.mass = get_number(ctx, e, path, "mass", true, 1.0);
            spec.species.valency = get_int(ctx, e, path, "valency", false, 0);
            spec.species.diffusivity = get_number(ctx, e, path, "diffusivity", false, 0.0);
            spec.species.solvent = get_bool(ctx, e, path, "solvent", false);
            if (!(spec.species.mass > 0.0)) ctx.error(sub(path, "mass"), "must be positive");
            if (spec.species.diffusivity < 0.0) ctx.error(sub(path, "diffusivity"), "must be nonnegative");
            if (spec.species.solvent) {
                ++solvent_count;
                if (has(e, "initial_fraction"))
                    ctx.error(sub(path, "initial_fraction"), "the solvent fraction closes the sum to one");
                if (has(e, "boundary")) ctx.error(sub(path, "boundary"), "the solvent carries no transport equation");
            } else {
                if (has(e, "initial_fraction"))
                    spec.initial_fraction = parse_profile(ctx, e.at("initial_fraction"), sub(path, "initial_fraction"));
                else
                    ctx.error(sub(path, "initial_fraction"), "required profile is missing");
                if (has(e, "boundary")) {
                    if (sc.periodic)
                        ctx.error(sub(path, "boundary"), "a periodic domain admits no boundary conditions");
                    else
                        spec.boundary = parse_field_bc(ctx, e.at("boundary"), sub(path, "boundary"));
                }
            }
            sc.species.push_back(std::move(spec));
        }
        if (sc.species.size() < 2) ctx.error("species", "at least one solute plus the solvent are required");
        if (solvent_count != 1)
            ctx.error("species", "exactly one species must be marked as the solvent");
        else if (!sc.species.empty() && !sc.species.back().species.solvent)
            ctx.error("species", "the solvent must be listed last");
        for (size_t a = 0; a < sc.species.size(); ++a)
            for (size_t b = a + 1; b < sc.species.size(); ++b)
                if (sc.species[a].species.name == sc.species[b].species.name && !sc.species[a].species.name.empty())
                    ctx.error("species", "duplicate species name '" + sc.species[a].species.name + "'");
    } else {
        ctx.error("species", "required array is missing");
    }

    // reactions
    const int L = static_cast<int>(sc.species.size());
    if (has(root, "reactions")) {
        const json& arr = root.at("reactions");
        if (!arr.is_array()) {
            ctx.error("reactions", "expected an array");
        } else {
            const int J = static_cast<int>(arr.size());
            sc.network.n_species = L;
            sc.network.n_reactions = J;
            sc.network.stoich.assign(static_cast<size_t>(L) * static_cast<size_t>(J), 0);
            sc.network.k_forward.assign(static_cast<size_t>(J), 0.0);
            sc.network.k_backward.assign(static_cast<size_t>(J), 0.0);
            for (int j = 0; j < J; ++j) {
                const std::string path = "reactions[" + std::to_string(j) + "]";
                const json& e = arr.at(static_cast<size_t>(j));
                if (!e.is_object()) {
                    ctx.error(path, "expected a reaction object");
                    continue;
                }
                check_keys(ctx, e, path, {"stoichiometry", "forward", "backward"});
                sc.network.k_forward[j] = get_number(ctx, e, path, "forward", true, 0.0);
                sc.network.k_backward[j] = get_number(ctx, e, path, "backward", true, 0.0);
                if (!has(e, "stoichiometry") || !e.at("stoichiometry").is_array()) {
                    ctx.error(sub(path, "stoichiometry"), "required integer array is missing");
                    continue;
                }
                const json& st = e.at("stoichiometry");
                if (static_cast<int>(st.size()) != L) {
                    ctx.error(sub(path, "stoichiometry"),
                              "length must equal the species count (" + std::to_string(L) + ")");
                    continue;
                }
                for (int l = 0; l < L; ++l) {
                    const json& v = st.at(static_cast<size_t>(l));
                    if (!v.is_number_integer()) {
                        ctx.error(sub(path, "stoichiometry"), "entries must be integers");
                        break;
                    }
                    sc.network.stoich[static_cast<size_t>(l * J + j)] = v.get<int>();
                }
            }
        }
    } else {
        sc.network = ReactionNetwork::none(L);
    }

    // velocity closure
    if (has(root, "velocity")) {
        const json& v = root.at("velocity");
        check_keys(ctx, v, "velocity", {"closure", "profile"});
        const std::string closure = get_string(ctx, v, "velocity", "closure", true, "rest");
        if (closure == "rest") {
            sc.velocity_kind = VelocityClosure::Kind::Rest;
            if (has(v, "profile")) ctx.error("velocity.profile", "the rest closure carries no profile");
        } else if (closure == "prescribed") {
            sc.velocity_kind = VelocityClosure::Kind::Prescribed;
            if (has(v, "profile"))
                sc.velocity_profile = parse_profile(ctx, v.at("profile"), "velocity.profile");
            else
                ctx.error("velocity.profile", "the prescribed closure requires a profile");
        } else if (closure == "darcy") {
            sc.velocity_kind = VelocityClosure::Kind::Darcy;
            if (has(v, "profile")) ctx.error("velocity.profile", "the Darcy closure derives its own velocity");
            if (sc.material.permeability == 0.0)
                ctx.warnings.push_back("velocity: Darcy closure with zero permeability always yields v = 0");
        } else {
            ctx.error("velocity.closure", "unknown closure '" + closure + "' (rest, prescribed, darcy)");
        }
    }

    // initial fields
    sc.init_temperature = ProfileSpec::constant(sc.material.reference_temperature);
    if (has(root, "initial")) {
        const json& ini = root.at("initial");
        check_keys(ctx, ini, "initial", {"density", "temperature", "pressure", "potential"});
        if (has(ini, "density")) sc.init_density = parse_profile(ctx, ini.at("density"), "initial.density");
        if (has(ini, "temperature"))
            sc.init_temperature = parse_profile(ctx, ini.at("temperature"), "initial.temperature");
        if (has(ini, "pressure")) sc.init_pressure = parse_profile(ctx, ini.at("pressure"), "initial.pressure");
        if (has(ini, "potential")) sc.init_potential = parse_profile(ctx, ini.at("potential"), "initial.potential");
    }

    // potential boundary
    if (has(root, "potential_boundary")) {
        if (sc.periodic)
            ctx.error("potential_boundary", "a periodic domain admits no boundary conditions");
        else
            sc.potential_boundary = parse_field_bc(ctx, root.at("potential_boundary"), "potential_boundary");
    }
    if (sc.periodic) {
        sc.potential_boundary.left.type = BCType::Periodic;
        sc.potential_boundary.right.type = BCType::Periodic;
        for (SpeciesSpec& spec : sc.species) {
            spec.boundary.left.type = BCType::Periodic;
            spec.boundary.right.type = BCType::Periodic;
        }
    }

    // numerics
    if (has(root, "numerics")) {
        const json& nu = root.at("numerics");
        check_keys(ctx, nu, "numerics",
                   {"dt", "end_time", "mode", "gummel_tol", "gummel_max_iter", "scheme", "reaction_substeps",
                    "steady_tol", "max_steps", "max_dt_halvings"});
        NumericsConfig& num = sc.numerics;
        num.dt = get_number(ctx, nu, "numerics", "dt", true, num.dt);
        num.end_time = get_number(ctx, nu, "numerics", "end_time", false, num.end_time);
        num.gummel_tol = get_number(ctx, nu, "numerics", "gummel_tol", false, num.gummel_tol);
        num.gummel_max_iter = get_int(ctx, nu, "numerics", "gummel_max_iter", false, num.gummel_max_iter);
        num.reaction_substeps = get_int(ctx, nu, "numerics", "reaction_substeps", false, num.reaction_substeps);
        num.steady_tol = get_number(ctx, nu, "numerics", "steady_tol", false, num.steady_tol);
        num.max_steps = get_int(ctx, nu, "numerics", "max_steps", false, num.max_steps);
        num.max_dt_halvings = get_int(ctx, nu, "numerics", "max_dt_halvings", false, num.max_dt_halvings);
        const std::string mode = get_string(ctx, nu, "numerics", "mode", false, "transient");
        if (mode == "steady")
            sc.steady_mode = true;
        else if (mode != "transient")
            ctx.error("numerics.mode", "unknown mode '" + mode + "' (transient, steady)");
        const std::string scheme = get_string(ctx, nu, "numerics", "scheme", false, "exponential_fitted");
        if (scheme == "central")
            num.scheme = FluxScheme::Central;
        else if (scheme != "exponential_fitted")
            ctx.error("numerics.scheme", "unknown scheme '" + scheme + "' (exponential_fitted, central)");
        if (!(num.dt > 0.0)) ctx.error("numerics.dt", "must be positive");
        if (num.end_time < 0.0) ctx.error("numerics.end_time", "must be nonnegative");
        if (!(num.gummel_tol > 0.0)) ctx.error("numerics.gummel_tol", "must be positive");
        if (num.gummel_max_iter < 1) ctx.error("numerics.gummel_max_iter", "must be at least one");
        if (num.reaction_substeps < 1) ctx.error("numerics.reaction_substeps", "must be at least one");
        if (!(num.steady_tol > 0.0)) ctx.error("numerics.steady_tol", "must be positive");
        if (num.max_steps < 1) ctx.error("numerics.max_steps", "must be at least one");
        if (num.max_dt_halvings < 0) ctx.error("numerics.max_dt_halvings", "must be nonnegative");
    } else {
        ctx.error("numerics", "required object is missing (at least 'dt')");
    }

    // scaling (optional)
    if (has(root, "scaling")) {
        const json& s = root.at("scaling");
        check_keys(ctx, s, "scaling",
                   {"field_scale", "induction_scale", "length_scale", "time_scale", "charge_scale", "current_scale",
                    "alpha", "delta_threshold"});
        ScalingInput in;
        in.field_scale = get_number(ctx, s, "scaling", "field_scale", true, 0.0);
        in.induction_scale = get_number(ctx, s, "scaling", "induction_scale", true, 0.0);
        in.length_scale = get_number(ctx, s, "scaling", "length_scale", true, 0.0);
        in.time_scale = get_number(ctx, s, "scaling", "time_scale", true, 0.0);
        if (has(s, "charge_scale")) in.charge_scale = get_number(ctx, s, "scaling", "charge_scale", false, 0.0);
        if (has(s, "current_scale")) in.current_scale = get_number(ctx, s, "scaling", "current_scale", false, 0.0);
        if (has(s, "alpha")) in.alpha = get_number(ctx, s, "scaling", "alpha", false, 0.0);
        in.delta_threshold = get_number(ctx, s, "scaling", "delta_threshold", false, in.delta_threshold);
        if (!(in.delta_threshold > 0.0)) ctx.error("scaling.delta_threshold", "must be positive");
        sc.scaling = in;
    }

    // oracle (optional declared analytic reference)
    if (has(root, "oracle")) {
        const json& o = root.at("oracle");
        check_keys(ctx, o, "oracle", {"kind", "window", "decay_length"});
        OracleSpec spec;
        spec.kind = get_string(ctx, o, "oracle", "kind", true, "");
        if (spec.kind != "debye")
            ctx.error("oracle.kind", "unknown oracle '" + spec.kind + "' (debye)");
        const std::vector<double> window = get_number_array(ctx, o, "oracle", "window");
        if (window.size() == 2 && window[0] < window[1]) {
            spec.window_lo = window[0];
            spec.window_hi = window[1];
        } else {
            ctx.error("oracle.window", "expected [lo, hi] with lo < hi");
        }
        if (has(o, "decay_length")) {
            const double lam = get_number(ctx, o, "oracle", "decay_length", false, 0.0);
            if (!(lam > 0.0))
                ctx.error("oracle.decay_length", "must be positive");
            else
                spec.decay_length = lam;
        }
        sc.oracle = std::move(spec);
    }

    // audit
    if (has(root, "audit")) {
        const json& a = root.at("audit");
        check_keys(ctx, a, "audit", {"enabled", "per_cell", "strict", "every"});
        sc.audit.enabled = get_bool(ctx, a, "audit", "enabled", sc.audit.enabled);
        sc.audit.per_cell = get_bool(ctx, a, "audit", "per_cell", sc.audit.per_cell);
        sc.audit.strict = get_bool(ctx, a, "audit", "strict", sc.audit.strict);
        sc.audit.every = get_int(ctx, a, "audit", "every", false, sc.audit.every);
        if (sc.audit.every < 1) ctx.error("audit.every", "must be at least one");
    }

    // output
    if (has(root, "output")) {
        const json& o = root.at("output");
        check_keys(ctx, o, "output", {"directory", "snapshot_every", "final_snapshot"});
        sc.output.directory = get_string(ctx, o, "output", "directory", false, "");
        sc.output.snapshot_every = get_int(ctx, o, "output", "snapshot_every", false, 0);
        sc.output.final_snapshot = get_bool(ctx, o, "output", "final_snapshot", sc.output.final_snapshot);
        if (sc.output.snapshot_every < 0) ctx.error("output.snapshot_every", "must be nonnegative");
    }

    if (!ctx.errors.empty()) {
        std::ostringstream msg;
        msg << origin << ": " << ctx.errors.size() << (ctx.errors.size() == 1 ? " error" : " errors") << "\n";
        for (const std::string& e : ctx.errors) msg << "  - " << e << "\n";
        throw ConfigError(msg.str());
    }

    // load-time warnings
    if (!sc.material.viscous_pair_admissible(1)) {
        std::ostringstream w;
        w << "viscous-consistency: 2*shear + bulk viscosity = "
          << 2.0 * sc.material.shear_viscosity + sc.material.bulk_viscosity
          << " is negative, so the viscous entropy channel can turn dissipation into a sink";
        ctx.warnings.push_back(w.str());
    }
    sc.warnings = std::move(ctx.warnings);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

Problem Scenario::build_problem() const {
    Problem p;
    p.grid = grid;
    for (const SpeciesSpec& spec : species) p.species.push_back(spec.species);
    p.network = network.empty() && network.n_species == 0 ? ReactionNetwork::none(p.n_species()) : network;
    validate_network(p.species, p.network);
    p.betas = solve_betas(p.network);
    p.material = material;
    p.constants = constants;
    p.model = model;
    p.phi_bc = potential_boundary;
    for (const SpeciesSpec& spec : species) p.species_bcs.push_back(spec.boundary);
    p.velocity.kind = velocity_kind;
    if (velocity_kind == VelocityClosure::Kind::Prescribed) {
        p.velocity.prescribed.resize(static_cast<size_t>(grid.n_cells));
        for (int k = 0; k < grid.n_cells; ++k)
            p.velocity.prescribed[k] = velocity_profile.eval(grid.center(k), grid.length);
    }
    p.eps_r.assign(static_cast<size_t>(grid.n_cells), material.relative_permittivity);
    p.numerics = numerics;
    return p;
}

MixtureState Scenario::build_initial_state() const {
    const int L = static_cast<int>(species.size());
    MixtureState s = make_state(grid, L);
    for (int k = 0; k < grid.n_cells; ++k) {
        const double x = grid.center(k);
        s.rho[k] = init_density.eval(x, grid.length);
        s.T[k] = init_temperature.eval(x, grid.length);
        s.p[k] = init_pressure.eval(x, grid.length);
        s.phi[k] = init_potential.eval(x, grid.length);
        double sum = 0.0;
        for (int l = 0; l + 1 < L; ++l) {
            const double y = species[l].initial_fraction.eval(x, grid.length);
            if (y < 0.0)
                throw ConfigError("initial fraction of '" + species[l].species.name + "' is negative at x = " +
                                  std::to_string(x));
            s.y_at(k, l) = y;
            sum += y;
        }
        if (sum > 1.0)
            throw ConfigError("initial solute fractions sum to " + std::to_string(sum) + " at x = " +
                              std::to_string(x) + "; the solvent closure would be negative");
        s.y_at(k, L - 1) = 1.0 - sum;
    }
    if (velocity_kind == VelocityClosure::Kind::Prescribed)
        for (int k = 0; k < grid.n_cells; ++k) s.v[k] = velocity_profile.eval(grid.center(k), grid.length);
    try {
        validate_state(s);
    } catch (const StateError& e) {
        throw ConfigError(std::string("initial state is not admissible: ") + e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json profile_to_json(const ProfileSpec& p) {
    json j;
    switch (p.kind) {
    case ProfileSpec::Kind::Constant:
        j["kind"] = "constant";
        j["value"] = p.value;
        break;
    case ProfileSpec::Kind::Gaussian:
        j["kind"] = "gaussian";
        j["center"] = p.center;
        j["width"] = p.width;
        j["amplitude"] = p.amplitude;
        j["baseline"] = p.baseline;
        break;
    case ProfileSpec::Kind::Linear:
        j["kind"] = "linear";
        j["left"] = p.left;
        j["right"] = p.right;
        break;
    case ProfileSpec::Kind::Sinusoidal:
        j["kind"] = "sinusoidal";
        j["mean"] = p.mean;
        j["amplitude"] = p.amplitude;
        j["periods"] = p.periods;
        j["phase"] = p.phase;
        break;
    case ProfileSpec::Kind::Tabulated:
        j["kind"] = "tabulated";
        j["x"] = p.xs;
        j["values"] = p.values;
        break;
    }
    return j;
}

json bc_side_to_json(const BoundaryCondition& bc) {
    json j;
    if (bc.type == BCType::Dirichlet) {
        j["type"] = "dirichlet";
        j["value"] = bc.value;
    } else {
        j["type"] = "no_flux";
    }
    return j;
}

json bc_to_json(const FieldBC& bc) {
    json j;
    j["left"] = bc_side_to_json(bc.left);
    j["right"] = bc_side_to_json(bc.right);
    return j;
}

} // namespace

std::string serialize_scenario(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["model"] = sc.model == ModelKind::General ? "general" : (sc.model == ModelKind::PNP ? "pnp" : "dpnp");
    j["domain"] = {{"length", sc.grid.length}, {"cells", sc.grid.n_cells}, {"periodic", sc.periodic}};
    j["constants"] = {{"elementary_charge", sc.constants.elementary_charge},
                      {"boltzmann", sc.constants.boltzmann},
                      {"vacuum_permittivity", sc.constants.vacuum_permittivity},
                      {"speed_of_light", sc.constants.speed_of_light}};
    j["material"] = {{"shear_viscosity", sc.material.shear_viscosity},
                     {"bulk_viscosity", sc.material.bulk_viscosity},
                     {"thermal_conductivity", sc.material.thermal_conductivity},
                     {"relative_permittivity", sc.material.relative_permittivity},
                     {"reference_temperature", sc.material.reference_temperature},
                     {"reference_mass", sc.material.reference_mass},
                     {"porosity", sc.material.porosity},
                     {"permeability", sc.material.permeability},
                     {"darcy_viscosity", sc.material.darcy_viscosity}};
    j["species"] = json::array();
    for (const SpeciesSpec& spec : sc.species) {
        json e;
        e["name"] = spec.species.name;
        e["mass"] = spec.species.mass;
        e["valency"] = spec.species.valency;
        e["diffusivity"] = spec.species.diffusivity;
        if (spec.species.solvent) {
            e["solvent"] = true;
        } else {
            e["initial_fraction"] = profile_to_json(spec.initial_fraction);
            if (!sc.periodic) e["boundary"] = bc_to_json(spec.boundary);
        }
        j["species"].push_back(std::move(e));
    }
    if (!sc.network.empty()) {
        j["reactions"] = json::array();
        for (int r = 0; r < sc.network.n_reactions; ++r) {
            json e;
            std::vector<int> st(static_cast<size_t>(sc.network.n_species));
            for (int l = 0; l < sc.network.n_species; ++l) st[l] = sc.network.s(l, r);
            e["stoichiometry"] = st;
            e["forward"] = sc.network.k_forward[r];
            e["backward"] = sc.network.k_backward[r];
            j["reactions"].push_back(std::move(e));
        }
    }
    json vel;
    switch (sc.velocity_kind) {
    case VelocityClosure::Kind::Rest:
        vel["closure"] = "rest";
        break;
    case VelocityClosure::Kind::Prescribed:
        vel["closure"] = "prescribed";
        vel["profile"] = profile_to_json(sc.velocity_profile);
        break;
    case VelocityClosure::Kind::Darcy:
        vel["closure"] = "darcy";
        break;
    }
    j["velocity"] = std::move(vel);
    j["initial"] = {{"density", profile_to_json(sc.init_density)},
                    {"temperature", profile_to_json(sc.init_temperature)},
                    {"pressure", profile_to_json(sc.init_pressure)},
                    {"potential", profile_to_json(sc.init_potential)}};
    if (!sc.periodic) j["potential_boundary"] = bc_to_json(sc.potential_boundary);
    json num;
    num["dt"] = sc.numerics.dt;
    num["end_time"] = sc.numerics.end_time;
    num["mode"] = sc.steady_mode ? "steady" : "transient";
    num["gummel_tol"] = sc.numerics.gummel_tol;
    num["gummel_max_iter"] = sc.numerics.gummel_max_iter;
    num["scheme"] = sc.numerics.scheme == FluxScheme::Central ? "central" : "exponential_fitted";
    num["reaction_substeps"] = sc.numerics.reaction_substeps;
    num["steady_tol"] = sc.numerics.steady_tol;
    num["max_steps"] = sc.numerics.max_steps;
    num["max_dt_halvings"] = sc.numerics.max_dt_halvings;
    j["numerics"] = std::move(num);
    if (sc.scaling) {
        json s;
        s["field_scale"] = sc.scaling->field_scale;
        s["induction_scale"] = sc.scaling->induction_scale;
        s["length_scale"] = sc.scaling->length_scale;
        s["time_scale"] = sc.scaling->time_scale;
        if (sc.scaling->charge_scale) s["charge_scale"] = *sc.scaling->charge_scale;
        if (sc.scaling->current_scale) s["current_scale"] = *sc.scaling->current_scale;
        if (sc.scaling->alpha) s["alpha"] = *sc.scaling->alpha;
        s["delta_threshold"] = sc.scaling->delta_threshold;
        j["scaling"] = std::move(s);
    }
    if (sc.oracle) {
        json o;
        o["kind"] = sc.oracle->kind;
        o["window"] = {sc.oracle->window_lo, sc.oracle->window_hi};
        if (sc.oracle->decay_length) o["decay_length"] = *sc.oracle->decay_length;
        j["oracle"] = std::move(o);
    }
    j["audit"] = {{"enabled", sc.audit.enabled},
                  {"per_cell", sc.audit.per_cell},
                  {"strict", sc.audit.strict},
                  {"every", sc.audit.every}};
    j["output"] = {{"directory", sc.output.directory},
                   {"snapshot_every", sc.output.snapshot_every},
                   {"final_snapshot", sc.output.final_snapshot}};
    return j.dump(2) + "\n";
}

} // namespace elk
