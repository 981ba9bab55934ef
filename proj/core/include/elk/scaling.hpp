#pragma once

#include <optional>
#include <string>

#include "elk/thermo.hpp"

namespace elk {

// Dimensionless groups that decide which electromagnetic limit the transport
// model is allowed to assume, from the characteristic scales of a scenario.
struct ScalingInput {
    double field_scale = 0.0;    // E0 [V/m]
    double induction_scale = 0.0;  // B0 [T]
    double length_scale = 0.0;   // l [m]
    double time_scale = 0.0;     // tau [s]
    std::optional<double> charge_scale;   // rho0 [C/m^3]
    std::optional<double> current_scale;  // i0 [A/m^2]
    std::optional<double> alpha;          // exponent in delta_W = delta_V^alpha
    double delta_threshold = 1e-3;        // quasistatic acceptance bound on delta_V
};

struct ScalingDeltas {
    double delta_V = 0.0;   // (l / tau) / c0
    double delta_W = 0.0;   // (E0 / B0) / c0
    double delta_rho = 1.0; // rho0 l / (eps0 E0)
    double delta_i = 1.0;   // i0 l mu0 / B0
};

enum class LimitRegime { Electrostatic, MagneticallyCoupled, Relativistic };

std::string to_string(LimitRegime r);

struct ScalingRegime {
    ScalingDeltas deltas;
    double alpha = 0.0;
    LimitRegime limit = LimitRegime::Electrostatic;
};

// Form the dimensionless groups. Scales must be positive; missing optional
// scales leave their delta at 1.
ScalingDeltas compute_deltas(const ScalingInput& in, const PhysicalConstants& c);

// Classification:
//   alpha > 1            -> unsupported family (ConfigError)
//   alpha == 1           -> MagneticallyCoupled (regardless of delta_V)
//   delta_V <= threshold -> Electrostatic
//   otherwise            -> Relativistic
LimitRegime classify_limit(double delta_V, double alpha, double delta_threshold);

// Deltas + alpha (declared, or derived from delta_W = delta_V^alpha) + limit.
ScalingRegime classify_scaling(const ScalingInput& in, const PhysicalConstants& c);

} // namespace elk
