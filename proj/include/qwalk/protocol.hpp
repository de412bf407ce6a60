#pragma once
// Step-protocol descriptions. A protocol names the coin content of one full
// evolution step; the walk engine composes it with the conditional translation.
//
// Operator-order convention used throughout: in operator products the
// rightmost factor acts first. One step of each protocol, reading left to
// right in time:
//   Standard(axis, theta):      R_axis(theta), then T
//   SplitStep(theta1, theta2):  R_y(theta2), T, R_y(theta1), T
//   NonCommuting(theta, phi):   R_y(theta), R_x(phi), then T
//   Balanced (hadamard coin):   H, then T

#include <string>
#include <variant>

#include "qwalk/core.hpp"

namespace qwalk {

struct StandardProtocol {
    std::array<double, 3> axis{0.0, 1.0, 0.0};
    double theta = 0.0;
};

struct SplitStepProtocol {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct NonCommutingProtocol {
    double theta = 0.0;
    double phi = 0.0;
};

// Walk driven by the balanced (Hadamard) coin. Not an SU(2) rotation
// (determinant -1), so band-structure analysis does not apply to it; the walk
// engine and preparation pipeline treat it as a first-class protocol.
struct HadamardProtocol {};

using Protocol = std::variant<StandardProtocol, SplitStepProtocol, NonCommutingProtocol,
                              HadamardProtocol>;

inline void validate(const Protocol& p) {
    if (const auto* s = std::get_if<StandardProtocol>(&p)) {
        detail::require_finite(s->theta, "Standard theta");
        const double len = std::sqrt(s->axis[0] * s->axis[0] + s->axis[1] * s->axis[1] +
                                     s->axis[2] * s->axis[2]);
        if (std::abs(len - 1.0) > 1e-9)
            throw std::invalid_argument("Standard protocol axis must be unit length");
    } else if (const auto* s = std::get_if<SplitStepProtocol>(&p)) {
        detail::require_finite(s->theta1, "SplitStep theta1");
        detail::require_finite(s->theta2, "SplitStep theta2");
    } else if (const auto* s = std::get_if<NonCommutingProtocol>(&p)) {
        detail::require_finite(s->theta, "NonCommuting theta");
        detail::require_finite(s->phi, "NonCommuting phi");
    }
}

inline std::string protocol_name(const Protocol& p) {
    switch (p.index()) {
        case 0: return "standard";
        case 1: return "splitstep";
        case 2: return "noncommuting";
        default: return "hadamard";
    }
}

}  // namespace qwalk
