#pragma once
// Resource and loss model contrasting the two multiplexing strategies for a
// photonic walk: a spatial cascade (one optical plane per step, mode count
// linear in n) versus a time-multiplexed fiber loop (one set of optics reused
// every round trip, time-bin count exponential in n, but compounding loop
// losses).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

struct TemporalLoopParams {
    double eta = 0.50;         // round-trip survival probability
    double outcoupling = 0.05; // per-step detection probability
    double rep_rate = 111e3;   // source pulses per second
    double mean_photon = 0.003;
    // The loop's loss and outcoupler commute in expectation up to one factor;
    // default applies the round-trip loss first (detection samples the bin
    // *after* it survived the loop).
    bool outcouple_before_loss = false;
};

struct SpatialCascadeParams {
    double per_step_transmission = 1.0;
    int max_steps_reference = 10;  // typical reach of cascaded bulk setups
};

enum class Architecture { spatial, temporal };

namespace detail {
inline void validate_unit_interval(double x, const char* what) {
    if (!(x > 0.0) || x > 1.0)
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
}
}  // namespace detail

inline void validate(const TemporalLoopParams& p) {
    detail::validate_unit_interval(p.eta, "eta");
    detail::validate_unit_interval(p.outcoupling, "outcoupling");
    detail::validate_unit_interval(p.mean_photon, "mean_photon");
    if (!(p.rep_rate > 0)) throw std::invalid_argument("rep_rate must be positive");
}

inline void validate(const SpatialCascadeParams& p) {
    detail::validate_unit_interval(p.per_step_transmission, "per_step_transmission");
}

// Modes needed for an n-step walk: 2n+1 spatial paths, or 2^n time bins.
inline unsigned long long mode_count(Architecture arch, int n) {
    if (n < 0) throw std::invalid_argument("step count must be >= 0");
    if (arch == Architecture::spatial) return 2ull * n + 1;
    if (n > 62) throw std::invalid_argument("temporal mode count overflows 64 bits beyond n=62");
    return 1ull << n;
}

// Expected detected events per second for an n-step time-multiplexed walk:
// the photon must survive the loop n times and exit the outcoupler exactly at
// step n, having stayed inside at the n-1 earlier chances. Evaluated as a
// geometric recurrence — each extra step is one multiplication by
// eta*(1-outcoupling) — so consecutive rates telescope exactly in floating
// point, not just in real arithmetic.
inline double expected_click_rate(const TemporalLoopParams& p, int n) {
    validate(p);
    if (n < 1) throw std::invalid_argument("click rate defined for n >= 1");
    double rate = p.rep_rate * p.mean_photon * (p.outcouple_before_loss ? 1.0 : p.eta) *
                  p.outcoupling;
    const double per_step = p.eta * (1.0 - p.outcoupling);
    for (int k = 1; k < n; ++k) rate *= per_step;
    return rate;
}

// Conditional probability that a detected pulse carried more than one photon,
// for a Poisson source: P(>=2)/P(>=1) = (e^mu - 1 - mu)/(e^mu - 1). Written
// with expm1 so the small-mu limit (~mu/2) keeps its leading digits instead
// of losing them to cancellation against 1.
inline double multiphoton_fraction(double mean_photon) {
    if (!(mean_photon > 0)) throw std::invalid_argument("mean photon number must be positive");
    const double em1 = std::expm1(mean_photon);
    return (em1 - mean_photon) / em1;
}

struct FeasibilityRow {
    int n = 0;
    unsigned long long modes_spatial = 0, modes_temporal = 0;
    double rate_spatial = 0.0, rate_temporal = 0.0;  // events/second
    bool feasible_spatial = false, feasible_temporal = false;
};

// Per-step comparison table up to target_n. The spatial cascade detects every
// photon that survives its n planes; the loop rate follows
// expected_click_rate. Feasibility = rate at or above min_rate.
inline std::vector<FeasibilityRow> feasibility_report(const TemporalLoopParams& loop,
                                                      const SpatialCascadeParams& cascade,
                                                      int target_n, double min_rate) {
    validate(loop);
    validate(cascade);
    if (target_n < 1) throw std::invalid_argument("target step count must be >= 1");
    if (!(min_rate >= 0)) throw std::invalid_argument("min_rate must be non-negative");
    std::vector<FeasibilityRow> rows;
    rows.reserve(target_n);
    for (int n = 1; n <= target_n; ++n) {
        FeasibilityRow r;
        r.n = n;
        r.modes_spatial = mode_count(Architecture::spatial, n);
        r.modes_temporal = mode_count(Architecture::temporal, n);
        r.rate_spatial =
            loop.rep_rate * loop.mean_photon * std::pow(cascade.per_step_transmission, n);
        r.rate_temporal = expected_click_rate(loop, n);
        r.feasible_spatial = r.rate_spatial >= min_rate;
        r.feasible_temporal = r.rate_temporal >= min_rate;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace qwalk
