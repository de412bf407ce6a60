#pragma once
// Non-local coin scheme on a hybrid two-photon state: photon 1 carries the
// polarization (coin) qubit, photon 2 carries the spatial mode (walker)
// register. A walk step is "dismembered" — rotations act on photon 1 alone,
// the conditional translation moves photon 2's mode conditioned on photon 1's
// polarization — yet the coincidence statistics reproduce the ordinary local
// walk step for step. Photon-2 polarization is projected at 45 degrees at the
// source and traced out; only its mode index survives into this model.

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "qwalk/protocol.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct HybridState {
    // mode-resolved amplitudes per photon-1 polarization slice:
    // |state> = sum_j h[j] |H>_1 |j>_2 + v[j] |V>_1 |j>_2
    std::map<int, Complex> h, v;
    Protocol protocol = HadamardProtocol{};  // step applied by nonlocal_step
    // norm^2 the polarizer projection left before renormalization (source bookkeeping)
    double projection_probability = 1.0;

    double norm2() const {
        double s = 0;
        for (const auto& [j, c] : h) s += std::norm(c);
        for (const auto& [j, c] : v) s += std::norm(c);
        return s;
    }
    void prune(double eps = 1e-15) {
        for (auto* slice : {&h, &v})
            for (auto it = slice->begin(); it != slice->end();)
                it = std::norm(it->second) < eps * eps ? slice->erase(it) : std::next(it);
    }
};

inline Complex overlap(const HybridState& a, const HybridState& b) {
    Complex s = 0;
    for (const auto& [j, c] : a.h) {
        auto it = b.h.find(j);
        if (it != b.h.end()) s += std::conj(c) * it->second;
    }
    for (const auto& [j, c] : a.v) {
        auto it = b.v.find(j);
        if (it != b.v.end()) s += std::conj(c) * it->second;
    }
    return s;
}

struct SourceConfig {
    Complex a{1.0, 0.0};  // initial photon-1 coin amplitudes
    Complex b{0.0, 0.0};
    int n = 0;  // source emits the n-step evolved state
    Protocol protocol = HadamardProtocol{};
};

// Source model: SPDC pair, photon-2 polarizer at 45 degrees (succeeding with
// probability 1/2), then n dismembered steps — equivalently, the hybrid
// recast of the n-step single-photon walk. The H- and V-polarization slices
// of the result equal the H- and V-coin slices of the walk state.
inline HybridState make_hybrid_state(const SourceConfig& cfg) {
    const double nrm = std::sqrt(std::norm(cfg.a) + std::norm(cfg.b));
    if (nrm < 1e-12) throw std::invalid_argument("initial coin must be non-zero");
    if (cfg.n < 0) throw std::invalid_argument("step count must be >= 0");
    validate(cfg.protocol);
    InitialCondition init;
    init.coin = {cfg.a / nrm, cfg.b / nrm};
    const WalkerCoinState walked = evolve(init, cfg.protocol, cfg.n);
    HybridState out;
    out.protocol = cfg.protocol;
    // polarizer bookkeeping: the 45-degree projection halves the norm, then
    // the state is renormalized
    out.projection_probability = 0.5;
    for (const auto& [site, spinor] : walked.amplitudes) {
        if (std::norm(spinor.h) > 0) out.h[site] = spinor.h;
        if (std::norm(spinor.v) > 0) out.v[site] = spinor.v;
    }
    return out;
}

namespace detail {

// Coin rotation on the photon-1 polarization index alone.
inline void hybrid_coin(HybridState& s, const CoinOperator& u) {
    std::map<int, Complex> nh, nv;
    auto get = [](const std::map<int, Complex>& m, int j) {
        auto it = m.find(j);
        return it == m.end() ? Complex{} : it->second;
    };
    for (const auto* slice : {&s.h, &s.v})
        for (const auto& [j, unused] : *slice) {
            if (nh.count(j)) continue;
            const Complex hj = get(s.h, j), vj = get(s.v, j);
            nh[j] = u.m00 * hj + u.m01 * vj;
            nv[j] = u.m10 * hj + u.m11 * vj;
        }
    s.h = std::move(nh);
    s.v = std::move(nv);
}

// Conditional translation on the photon-2 mode index: H-correlated modes move
// up, V-correlated modes move down.
inline void hybrid_translate(HybridState& s) {
    std::map<int, Complex> nh, nv;
    for (const auto& [j, c] : s.h) nh[j + 1] = c;
    for (const auto& [j, c] : s.v) nv[j - 1] = c;
    s.h = std::move(nh);
    s.v = std::move(nv);
}

}  // namespace detail

// One dismembered walk step of the state's protocol. Mirrors the temporal
// order of the local step (rightmost factor first) without ever forming a
// walker x coin product state.
inline HybridState nonlocal_step(const HybridState& s) {
    validate(s.protocol);
    HybridState out = s;
    if (const auto* p = std::get_if<StandardProtocol>(&s.protocol)) {
        detail::hybrid_coin(out, rotation_axis(p->axis, p->theta));
        detail::hybrid_translate(out);
    } else if (const auto* p = std::get_if<SplitStepProtocol>(&s.protocol)) {
        detail::hybrid_coin(out, rotation_y(p->theta2));
        detail::hybrid_translate(out);
        detail::hybrid_coin(out, rotation_y(p->theta1));
        detail::hybrid_translate(out);
    } else if (const auto* p = std::get_if<NonCommutingProtocol>(&s.protocol)) {
        detail::hybrid_coin(out, rotation_y(p->theta));
        detail::hybrid_coin(out, rotation_x(p->phi));
        detail::hybrid_translate(out);
    } else {
        detail::hybrid_coin(out, hadamard_coin());
        detail::hybrid_translate(out);
    }
    out.prune();
    return out;
}

struct CoincidenceDistribution {
    std::map<int, double> marginal;                       // mode -> probability
    std::map<int, double> conditional_h, conditional_v;  // per photon-1 outcome
};

// Coincidence-basis readout: joint detector statistics per (polarization,
// mode), plus the mode marginal.
inline CoincidenceDistribution coincidence_distribution(const HybridState& s) {
    CoincidenceDistribution d;
    for (const auto& [j, c] : s.h) {
        const double p = std::norm(c);
        if (p > 0) {
            d.conditional_h[j] = p;
            d.marginal[j] += p;
        }
    }
    for (const auto& [j, c] : s.v) {
        const double p = std::norm(c);
        if (p > 0) {
            d.conditional_v[j] = p;
            d.marginal[j] += p;
        }
    }
    return d;
}

// Von Neumann entropy of photon 1's reduced state, in bits (photon 1 is a
// qubit, so the value lies in [0, 1]). The optional interference visibility
// scales the off-diagonal coherence only — a single-scalar stand-in for an
// imperfect source. Closed form via the 2x2 Gram matrix of the mode slices.
inline double entanglement_entropy(const HybridState& s, double visibility = 1.0) {
    if (visibility < 0.0 || visibility > 1.0 + 1e-12)
        throw std::invalid_argument("visibility must lie in [0, 1]");
    const double n2 = s.norm2();
    if (std::abs(n2 - 1.0) > 1e-10) throw std::invalid_argument("state must be normalized");
    double phh = 0, pvv = 0;
    Complex cross = 0;  // <phi|xi> between the H and V mode slices
    for (const auto& [j, c] : s.h) phh += std::norm(c);
    for (const auto& [j, c] : s.v) pvv += std::norm(c);
    for (const auto& [j, c] : s.h) {
        auto it = s.v.find(j);
        if (it != s.v.end()) cross += std::conj(c) * it->second;
    }
    const double det = phh * pvv - std::norm(visibility * cross);
    const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * std::clamp(det, 0.0, 0.25)));
    const double lp = 0.5 * (1.0 + disc), lm = 0.5 * (1.0 - disc);
    auto term = [](double l) { return l > 1e-15 ? -l * std::log2(l) : 0.0; };
    return term(lp) + term(lm);
}

}  // namespace qwalk
