#include "elk/scaling.hpp"

#include <cmath>

#include "elk/errors.hpp"

namespace elk {

std::string to_string(LimitRegime r) {
    switch (r) {
        case LimitRegime::Electrostatic: return "Electrostatic";
        case LimitRegime::MagneticallyCoupled: return "MagneticallyCoupled";
        case LimitRegime::Relativistic: return "Relativistic";
    }
    return "?";
}

ScalingDeltas compute_deltas(const ScalingInput& in, const PhysicalConstants& c) {
    if (!(in.field_scale > 0.0) || !(in.induction_scale > 0.0) || !(in.length_scale > 0.0) ||
        !(in.time_scale > 0.0))
        throw ConfigError("scaling: characteristic scales must be positive");
    ScalingDeltas d;
    d.delta_V = in.length_scale / in.time_scale / c.speed_of_light;
    d.delta_W = in.field_scale / in.induction_scale / c.speed_of_light;
    if (in.charge_scale)
        d.delta_rho = *in.charge_scale * in.length_scale / (c.vacuum_permittivity * in.field_scale);
    if (in.current_scale)
        d.delta_i = *in.current_scale * in.length_scale * c.vacuum_permeability() / in.induction_scale;
    return d;
}

LimitRegime classify_limit(double delta_V, double alpha, double delta_threshold) {
    if (!(delta_V > 0.0)) throw ConfigError("scaling: delta_V must be positive");
    if (alpha > 1.0)
        throw ConfigError("scaling: families with alpha > 1 are not part of the supported model hierarchy");
    if (alpha == 1.0) return LimitRegime::MagneticallyCoupled;
    return delta_V <= delta_threshold ? LimitRegime::Electrostatic : LimitRegime::Relativistic;
}

ScalingRegime classify_scaling(const ScalingInput& in, const PhysicalConstants& c) {
    ScalingRegime r;
    r.deltas = compute_deltas(in, c);
    if (in.alpha) {
        r.alpha = *in.alpha;
    } else {
        // derive the family exponent from delta_W = delta_V^alpha
        if (r.deltas.delta_V == 1.0 || r.deltas.delta_W <= 0.0)
            throw ConfigError("scaling: cannot derive alpha from the given scales; declare it explicitly");
        r.alpha = std::log(r.deltas.delta_W) / std::log(r.deltas.delta_V);
    }
    r.limit = classify_limit(r.deltas.delta_V, r.alpha, in.delta_threshold);
    return r;
}

} // namespace elk
