#pragma once
// Spatial-light-modulator preparation pipeline: synthesize a blazed-grating
// phase mask that encodes a target superposition of transverse modes, verify
// it by far-field diffraction, filter the +1 order back into mode
// coefficients, and finish with site-conditional polarization rotations.
//
// Model: one transverse mode per slit row block (rows_per_mode pixel rows),
// separated by equally tall empty guard blocks. Each occupied mode carries a
// horizontal sawtooth grating of period `grating_period` pixels whose
// modulation depth m in [0, 2*pi] sets the +1-order amplitude via the ideal
// blaze curve |sinc(1 - m/2*pi)| and whose constant offset sets the phase.
// The far field is the row-wise discrete Fourier transform; diffraction
// orders live at column-frequency multiples of cols/period.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

struct SlitSuperposition {
    std::map<int, Complex> coefficients;  // transverse mode index -> amplitude

    double norm2() const {
        double s = 0;
        for (const auto& [j, c] : coefficients) s += std::norm(c);
        return s;
    }
    void normalize() {
        const double n = std::sqrt(norm2());
        if (n < 1e-300) throw std::invalid_argument("cannot normalize an empty superposition");
        for (auto& [j, c] : coefficients) c /= n;
    }
};

struct SlitRegion {
    int mode = 0;
    int row_begin = 0, row_end = 0;  // half-open pixel-row span
    double depth = 0.0;              // modulation depth m in [0, 2*pi]
    double offset = 0.0;             // target coefficient phase arg(beta) in [0, 2*pi)
};

struct PhaseMask {
    int rows = 0, cols = 0;
    int grating_period = 0;
    int rows_per_mode = 1;
    std::vector<double> pixels;  // row-major phases in [0, 2*pi)
    std::vector<SlitRegion> slit_layout;

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * cols + c]; }
};

struct RotationSchedule {
    std::map<int, double> angles;  // site -> rotation angle (radians)
};

struct ComplexField {
    int rows = 0, cols = 0;
    std::vector<Complex> a;

    Complex at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    Complex& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// First-order diffraction amplitude of an ideal sawtooth phase grating of
// depth m: |sinc(1 - m/2*pi)|, normalized sinc. Full depth m = 2*pi gives 1.
inline double blaze_first_order_amplitude(double m) {
    if (m < -1e-12 || m > 2.0 * kPi + 1e-12)
        throw std::invalid_argument("blaze depth outside [0, 2*pi]");
    const double x = 1.0 - m / (2.0 * kPi);
    if (std::abs(x) < 1e-15) return 1.0;
    return std::abs(std::sin(kPi * x) / (kPi * x));
}

// Inverts the blaze curve on its monotone branch m in [0, 2*pi] by bisection.
inline double inverse_blaze_depth(double amplitude) {
    if (amplitude < -1e-12 || amplitude > 1.0 + 1e-12)
        throw std::invalid_argument("target first-order amplitude outside [0, 1]");
    amplitude = std::clamp(amplitude, 0.0, 1.0);
    double lo = 0.0, hi = 2.0 * kPi;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (blaze_first_order_amplitude(mid) < amplitude ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Walker capacity of a modulator with the given number of pixel rows: modes
// span -n..n, one slit row plus one guard row each, giving n = rows/4.
inline int max_step_for_resolution(int pixel_rows) {
    if (pixel_rows < 2) throw std::invalid_argument("need at least 2 pixel rows");
    return pixel_rows / 4;
}

namespace detail {

inline double canonical_angle(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    if (r < 0) r += 2.0 * kPi;
    return r;
}

// Phase of the +1-order Fourier coefficient of the *pixelated* sawtooth
// (period L samples, depth m): arg c1 = (m - 2*pi)(L - 1)/(2L). The rendered
// gratings subtract this so the +1 order comes out carrying exactly the
// stored offset; for uniform depths it is a global phase, for mixed depths
// skipping it would scramble the relative mode phases.
inline double pixelated_blaze_phase(double m, int period) {
    return (m - 2.0 * kPi) * (period - 1) / (2.0 * period);
}

}  // namespace detail

// Builds the phase mask for a target superposition. Modes occupy every
// integer slot in [-n, n] (n = largest occupied |mode|), empty modes staying
// blank; the block ladder is centered when it fits with its trailing guard,
// and at exact capacity (rows = 4 n rows_per_mode) the final guard row is
// dropped — slits stay disjoint, and row spacing does not enter the row-wise
// diffraction model.
inline PhaseMask synthesize_mask(const SlitSuperposition& target, int rows_per_mode, int cols,
                                 int grating_period, int rows = 1920) {
    if (grating_period < 2) throw std::invalid_argument("grating period must be >= 2 pixels");
    if (rows_per_mode < 1) throw std::invalid_argument("rows_per_mode must be >= 1");
    if (cols < grating_period || cols % grating_period != 0)
        throw std::invalid_argument("cols must be a positive multiple of the grating period");
    SlitSuperposition t = target;
    t.normalize();
    int half = 0;
    double max_mod = 0.0;
    for (const auto& [j, c] : t.coefficients)
        if (std::abs(c) > 1e-15) {
            half = std::max(half, std::abs(j));
            max_mod = std::max(max_mod, std::abs(c));
        }
    if (max_mod == 0.0) throw std::invalid_argument("cannot synthesize an empty superposition");

    const int slots = 2 * half + 1;
    const long need_centered = static_cast<long>(rows_per_mode) * (2 * slots - 1);
    const long need_tight = static_cast<long>(rows_per_mode) * (2 * slots - 2);
    int start = 0;
    bool tight = false;
    if (need_centered <= rows) {
        start = static_cast<int>((rows - need_centered) / 2);
    } else if (need_tight <= rows) {
        tight = true;  // final slit moves to the bottom edge, its guard dropped
    } else {
        throw std::domain_error("resolution exceeded: mode ladder does not fit the pixel rows");
    }

    PhaseMask mask;
    mask.rows = rows;
    mask.cols = cols;
    mask.grating_period = grating_period;
    mask.rows_per_mode = rows_per_mode;
    mask.pixels.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    for (const auto& [j, c] : t.coefficients) {
        if (std::abs(c) <= 1e-15) continue;
        const int slot = j + half;
        int row0 = start + slot * 2 * rows_per_mode;
        if (tight && slot == slots - 1) row0 = rows - rows_per_mode;
        SlitRegion region;
        region.mode = j;
        region.row_begin = row0;
        region.row_end = row0 + rows_per_mode;
        region.depth = inverse_blaze_depth(std::abs(c) / max_mod);
        region.offset = detail::canonical_angle(std::arg(c));
        const double delta =
            region.offset - detail::pixelated_blaze_phase(region.depth, grating_period);
        for (int r = region.row_begin; r < region.row_end; ++r)
            for (int y = 0; y < cols; ++y)
                mask.at(r, y) = detail::canonical_angle(
                    region.depth * (y % grating_period) / grating_period + delta);
        mask.slit_layout.push_back(region);
    }
    std::sort(mask.slit_layout.begin(), mask.slit_layout.end(),
              [](const SlitRegion& a, const SlitRegion& b) { return a.mode < b.mode; });
    return mask;
}

// Row-wise discrete Fourier transform of the uniformly illuminated mask,
// normalized by 1/sqrt(cols) so the transform conserves energy exactly.
inline ComplexField far_field(const PhaseMask& mask, double input_amplitude = 1.0) {
    if (mask.rows <= 0 || mask.cols <= 0) throw std::invalid_argument("empty mask");
    ComplexField f;
    f.rows = mask.rows;
    f.cols = mask.cols;
    f.a.assign(static_cast<std::size_t>(f.rows) * f.cols, Complex{});
    const double scale = input_amplitude / std::sqrt(double(mask.cols));
    std::vector<Complex> row(mask.cols);
    for (int r = 0; r < mask.rows; ++r) {
        bool flat = true;
        for (int y = 0; y < mask.cols; ++y) {
            row[y] = std::polar(scale, mask.at(r, y));
            if (mask.at(r, y) != mask.at(r, 0)) flat = false;
        }
        if (flat) {  // blank/constant rows transform to a pure zeroth order
            f.at(r, 0) = row[0] * double(mask.cols);
            continue;
        }
        for (int v = 0; v < mask.cols; ++v) {
            Complex acc = 0;
            for (int y = 0; y < mask.cols; ++y)
                acc += row[y] * std::polar(1.0, -2.0 * kPi * v * y / mask.cols);
            f.at(r, v) = acc;
        }
    }
    return f;
}

// Filters the +1 diffraction order back into per-mode complex amplitudes:
// reads the +1-order column frequency (cols/period) across each slit's rows
// and renormalizes. Periods below 4 pixels leave the +-1 and 0 orders
// unseparable on the discrete frequency grid.
inline SlitSuperposition extract_order(const ComplexField& field, int order,
                                       const PhaseMask& mask) {
    if (order != 1)
        throw std::invalid_argument("only the +1 diffraction order is extracted here");
    if (mask.grating_period < 4)
        throw std::domain_error("aliasing: +1 order is not separable below period 4");
    if (field.rows != mask.rows || field.cols != mask.cols)
        throw std::invalid_argument("field/mask geometry mismatch");
    const int v1 = mask.cols / mask.grating_period;
    SlitSuperposition out;
    for (const SlitRegion& region : mask.slit_layout) {
        Complex acc = 0;
        for (int r = region.row_begin; r < region.row_end; ++r) acc += field.at(r, v1);
        out.coefficients[region.mode] = acc;
    }
    if (out.norm2() < 1e-24)
        throw std::domain_error("no optical power in the +1 order (all depths zero?)");
    out.normalize();
    return out;
}

// Embeds a slit superposition as a walker state with every mode's coin
// pointing along |H> (the pre-rotation polarization).
inline WalkerCoinState superposition_state(const SlitSuperposition& s) {
    WalkerCoinState st;
    for (const auto& [j, c] : s.coefficients)
        if (std::abs(c) > 1e-15) st.amplitudes[j] = {c, 0.0};
    const double n = st.norm();
    if (n < 1e-300) throw std::invalid_argument("empty superposition");
    for (auto& [j, a] : st.amplitudes) a = {a.h / n, a.v / n};
    return st;
}

// Site-conditional polarization rotation: each occupied site's spinor is
// multiplied by the y-rotation at that site's scheduled angle.
inline WalkerCoinState conditional_rotation(const WalkerCoinState& state,
                                            const RotationSchedule& sched) {
    WalkerCoinState out;
    for (const auto& [site, spinor] : state.amplitudes) {
        if (spinor.norm2() <= 1e-18) continue;
        auto it = sched.angles.find(site);
        if (it == sched.angles.end())
            throw std::invalid_argument("rotation schedule does not cover site " +
                                        std::to_string(site));
        detail::require_finite(it->second, "rotation angle");
        out.amplitudes[site] = rotation_y(it->second).apply(spinor);
    }
    return out;
}

struct PreparationPlan {
    SlitSuperposition target;   // per-site complex weights (modulus and phase)
    RotationSchedule schedule;  // per-site polarization rotation angles
};

// Factors a walker state into (slit superposition, rotation schedule):
// site spinor = beta_j * R(theta_j)|H>. Possible exactly when each site's
// coin, after factoring out one overall site phase, is a real 2-vector;
// states outside that class have no such plan.
inline PreparationPlan decompose_step_state(const WalkerCoinState& state, double tol = 1e-9) {
    PreparationPlan plan;
    for (const auto& [site, spinor] : state.amplitudes) {
        const double mag = std::sqrt(spinor.norm2());
        if (mag <= 1e-12) continue;
        const Complex dominant = std::abs(spinor.h) >= std::abs(spinor.v) ? spinor.h : spinor.v;
        const Complex dephase = std::conj(dominant) / std::abs(dominant);
        const Complex x = spinor.h * dephase, y = spinor.v * dephase;
        if (std::max(std::abs(x.imag()), std::abs(y.imag())) > tol * mag)
            throw std::domain_error(
                "state is not expressible as per-site amplitudes times real rotations");
        plan.schedule.angles[site] = std::atan2(y.real(), x.real());
        plan.target.coefficients[site] = mag * std::conj(dephase);
    }
    if (plan.target.coefficients.empty())
        throw std::invalid_argument("cannot decompose the zero state");
    return plan;
}

}  // namespace qwalk
