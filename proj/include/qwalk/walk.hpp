#pragma once
// Walk engine: compose the substeps of core.hpp into full protocol steps and
// evolve initial conditions n steps.

#include <cstdlib>

#include "qwalk/core.hpp"
#include "qwalk/protocol.hpp"

namespace qwalk {

struct InitialCondition {
    int site = 0;
    CoinSpinor coin{1.0, 0.0};

    WalkerCoinState embed() const { return WalkerCoinState::localized(site, coin); }
};

// Chirality-balanced start (|H> + i|V>)/sqrt2: walks symmetrically under j -> -j.
inline CoinSpinor symmetric_coin() {
    const double r = 1.0 / std::sqrt(2.0);
    return {Complex(r, 0.0), Complex(0.0, r)};
}

// One full protocol step. Amplitudes below 1e-15 are pruned afterwards so the
// support stays exactly on the reachable parity class.
inline WalkerCoinState step(const WalkerCoinState& state, const Protocol& p) {
    WalkerCoinState out;
    if (const auto* s = std::get_if<StandardProtocol>(&p)) {
        out = translate(apply_coin(state, rotation_axis(s->axis, s->theta)));
    } else if (const auto* s = std::get_if<SplitStepProtocol>(&p)) {
        out = translate(apply_coin(translate(apply_coin(state, rotation_y(s->theta2))),
                                   rotation_y(s->theta1)));
    } else if (const auto* s = std::get_if<NonCommutingProtocol>(&p)) {
        out = translate(apply_coin(apply_coin(state, rotation_y(s->theta)), rotation_x(s->phi)));
    } else {
        out = translate(apply_coin(state, hadamard_coin()));
    }
    out.prune();
    return out;
}

inline WalkerCoinState evolve(const InitialCondition& init, const Protocol& p, int n) {
    if (n < 0) throw std::invalid_argument("step count must be >= 0");
    validate(p);
    WalkerCoinState s = init.embed();
    for (int i = 0; i < n; ++i) s = step(s, p);
    return s;
}

// Alias of evolve with explicit intent: the returned state is the preparation
// target for the mask-synthesis pipeline and the one-step composition test.
inline WalkerCoinState prepare_step_state(int n, const InitialCondition& init, const Protocol& p) {
    return evolve(init, p, n);
}

struct StepEquivalenceReport {
    bool pass = false;
    double fidelity_deficit = 0.0;  // 1 - |<psi_{n+1} | step(psi_n)>|
};

// Checks step(prepare_step_state(n)) == prepare_step_state(n+1).
inline StepEquivalenceReport one_step_equivalence(int n, const Protocol& p,
                                                  const InitialCondition& init = {},
                                                  double tol = 1e-12) {
    const WalkerCoinState a = step(prepare_step_state(n, init, p), p);
    const WalkerCoinState b = prepare_step_state(n + 1, init, p);
    const double deficit = 1.0 - fidelity(a, b);
    return {std::abs(deficit) <= tol, deficit};
}

}  // namespace qwalk
