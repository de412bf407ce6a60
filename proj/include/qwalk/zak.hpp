#pragma once
// Geometric (Zak) phase per band, computed three ways:
//   1. discrete Wilson line (closed overlap product) — the primary, manifestly
//      gauge-robust method;
//   2. numerical integration of the Berry connection in a fixed anchored
//      gauge — secondary cross-check, agrees with (1) on gapped windows;
//   3. the closed-form integrand of the non-commuting family — secondary
//      cross-check with pinned fixtures.
// Plus the split-step closed-form ratio, the gauge-invariant two-state phase
// difference, and parameter-plane landscapes with an explicit undefined mask.
//
// Window conventions: the default window spans the full momentum period
// [-pi, pi] of the momentum unitary (for the split-step protocol this k is
// already the two-site-cell momentum, i.e. the halved effective Brillouin
// zone of the one-site lattice). The closed-form integrand is tied to the
// half window [-pi/2, pi/2] by its derivation and defaults to it.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qwalk/band.hpp"

namespace qwalk {

enum class Band { plus, minus };

inline constexpr std::array<double, 2> kFullWindow{-kPi, kPi};
inline constexpr std::array<double, 2> kHalfWindow{-kPi / 2, kPi / 2};

struct ZakResult {
    Band band = Band::plus;
    double phase = 0.0;  // canonical in [0, 2*pi)
    std::array<double, 2> k_window{-kPi, kPi};
    int samples = 0;
    bool converged = false;
};

namespace detail {

inline double canonical_phase(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    if (r < 0) r += 2.0 * kPi;
    if (2.0 * kPi - r < 1e-12) r = 0.0;
    return r;
}

// Shortest signed distance between two phases (for convergence deltas).
inline double circular_delta(double a, double b) {
    double d = std::fmod(a - b, 2.0 * kPi);
    if (d > kPi) d -= 2.0 * kPi;
    if (d < -kPi) d += 2.0 * kPi;
    return d;
}

// Band eigenvector in the anchored gauge: component 0 is taken from the
// (n_x - i n_y) closed form and phase-fixed real-positive, which is smooth in
// k wherever the transverse part of n(k) stays away from zero. Wilson-line
// results do not depend on this choice; the connection integral does, and its
// agreement with the Wilson line is asserted on gapped windows.
inline CoinSpinor anchored_eigenvector(const Protocol& p, Band band, double k) {
    const BlochVector b = bloch_vector(p, k);
    const Complex nxy(b.n[0], -b.n[1]);
    CoinSpinor v;
    if (band == Band::plus)
        v = {nxy, Complex(1.0 - b.n[2], 0.0)};
    else
        v = {nxy, Complex(-(1.0 + b.n[2]), 0.0)};
    const double nn = std::sqrt(v.norm2());
    if (nn < 1e-9) {
        // transverse part vanished: fall back to the pole-stable branch
        auto [vp, vm] = band_eigenvectors(b.n);
        v = band == Band::plus ? vp : vm;
    } else {
        v = {v.h / nn, v.v / nn};
    }
    const double mag0 = std::abs(v.h);
    const Complex anchor = mag0 > 1e-12 ? std::conj(v.h) / mag0 : std::conj(v.v) / std::abs(v.v);
    return {v.h * anchor, v.v * anchor};
}

inline double wilson_phase_once(const Protocol& p, Band band, const std::array<double, 2>& w,
                                int n) {
    const double span = w[1] - w[0];
    std::vector<CoinSpinor> vs(n);
    for (int m = 0; m < n; ++m) vs[m] = anchored_eigenvector(p, band, w[0] + (m + 0.5) * span / n);
    Complex prod = 1.0;
    for (int m = 0; m < n; ++m) {
        const Complex ov = inner(vs[m], vs[(m + 1) % n]);
        // Adjacent samples must overlap strongly or the window is badly
        // under-resolved. The closing chord (last sample back to the first)
        // is different: on a sub-window it may be legitimately small — e.g.
        // nearly antipodal endpoint eigenvectors — while its argument stays
        // perfectly well-defined. Only an exact collapse is refused there.
        const double floor_mag = m + 1 == n ? 1e-9 : 0.1;
        if (std::abs(ov) < floor_mag)
            throw std::domain_error(m + 1 == n
                                        ? "wilson line: closing chord collapsed (orthogonal "
                                          "endpoint eigenvectors)"
                                        : "wilson line: adjacent eigenvector overlap collapsed "
                                          "(grid far too coarse)");
        prod *= ov;
    }
    return canonical_phase(-std::arg(prod));
}

}  // namespace detail

// Discrete Wilson-line Zak phase: -arg of the closed product of neighboring
// eigenvector overlaps on a midpoint grid over the window. The product closes
// on itself (last sample chords back to the first), which makes the result
// exactly invariant under any per-sample phase redefinition. Refines by
// doubling N until the phase moves by < 1e-8, up to four doublings.
inline ZakResult zak_phase_wilson(const Protocol& p, Band band,
                                  const std::array<double, 2>& k_window = kFullWindow,
                                  int n_samples = 512) {
    if (n_samples < 16) throw std::invalid_argument("zak_phase_wilson needs N >= 16");
    if (!(k_window[1] > k_window[0]))
        throw std::invalid_argument("zak_phase_wilson: empty momentum window");
    ZakResult out;
    out.band = band;
    out.k_window = k_window;
    int n = n_samples;
    double z = detail::wilson_phase_once(p, band, k_window, n);
    for (int r = 0; r < 4; ++r) {
        const double z2 = detail::wilson_phase_once(p, band, k_window, 2 * n);
        const bool ok = std::abs(detail::circular_delta(z2, z)) < 1e-8;
        n *= 2;
        z = z2;
        if (ok) {
            out.converged = true;
            break;
        }
    }
    out.samples = n;
    out.phase = z;
    return out;
}

// Berry connection A(k) = i <V | d/dk V> in the anchored gauge, by central
// differences. The real-part contract (|imaginary residue| < 1e-8) holds
// because the eigenvectors are normalized at every sample.
inline double berry_connection(const Protocol& p, Band band, double k, double h = 1e-5) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("berry_connection: bad step");
    const CoinSpinor v0 = detail::anchored_eigenvector(p, band, k);
    const CoinSpinor vp = detail::anchored_eigenvector(p, band, k + h);
    const CoinSpinor vm = detail::anchored_eigenvector(p, band, k - h);
    const CoinSpinor dv{(vp.h - vm.h) / (2.0 * h), (vp.v - vm.v) / (2.0 * h)};
    const Complex c = inner(v0, dv);  // i*c = A; Re(c) ~ norm drift, should vanish
    if (std::abs(c.real()) > 1e-8)
        throw std::domain_error("berry_connection: non-real connection (gauge degenerated)");
    return -c.imag();
}

// Trapezoidal integral of the Berry connection over the window (secondary
// method; equals the Wilson-line phase within 1e-6 on gapped windows).
inline ZakResult zak_phase_connection(const Protocol& p, Band band,
                                      const std::array<double, 2>& k_window = kFullWindow,
                                      int n_samples = 512, double h = 1e-5) {
    if (n_samples < 16) throw std::invalid_argument("zak_phase_connection needs N >= 16");
    auto integral = [&](int n) {
        const double dk = (k_window[1] - k_window[0]) / n;
        double acc = 0.5 * (berry_connection(p, band, k_window[0], h) +
                            berry_connection(p, band, k_window[1], h));
        for (int m = 1; m < n; ++m) acc += berry_connection(p, band, k_window[0] + m * dk, h);
        return acc * dk;
    };
    ZakResult out;
    out.band = band;
    out.k_window = k_window;
    const double z1 = detail::canonical_phase(integral(n_samples));
    const double z2 = detail::canonical_phase(integral(2 * n_samples));
    out.samples = 2 * n_samples;
    out.phase = z2;
    out.converged = std::abs(detail::circular_delta(z2, z1)) < 1e-6;
    return out;
}

// Closed-form Zak integrand of the non-commuting family. In the shorthand
//   a = sin(phi) cos(theta),  b = cos(phi) sin(theta),
//   c = sin(phi) sin(theta),  d = cos(phi) cos(theta),
// the integrand is (a^2 + b^2) / D^2 with
//   D_{+-}^2 = base -+ (c cos k - d sin k) sqrt(base),
//   base     = a^2 + b^2 + c^2 cos^2 k + d^2 sin^2 k - sin(2k) c d.
// When the axis stays in the equatorial plane (c = d = 0) the integrand is
// identically 1 and the half-window integral gives the trivial phase pi.
inline double zak_integrand_noncommuting(double theta, double phi, Band band, double k) {
    detail::require_finite(theta, "theta");
    detail::require_finite(phi, "phi");
    detail::require_finite(k, "momentum");
    const double a = std::sin(phi) * std::cos(theta);
    const double b = std::cos(phi) * std::sin(theta);
    const double c = std::sin(phi) * std::sin(theta);
    const double d = std::cos(phi) * std::cos(theta);
    const double ck = std::cos(k), sk = std::sin(k);
    const double base =
        a * a + b * b + c * c * ck * ck + d * d * sk * sk - 2.0 * sk * ck * c * d;
    const double root = std::sqrt(std::max(0.0, base));
    const double dd =
        band == Band::plus ? base - (c * ck - d * sk) * root : base + (c * ck - d * sk) * root;
    if (dd < 1e-18) throw std::domain_error("zak integrand: D underflow (gapless point)");
    return (a * a + b * b) / dd;
}

// Simpson integral of the closed-form integrand; window defaults to the half
// zone the formula is derived on.
inline ZakResult zak_phase_integrand(double theta, double phi, Band band,
                                     const std::array<double, 2>& k_window = kHalfWindow,
                                     int n_samples = 2048) {
    if (n_samples < 16) throw std::invalid_argument("zak_phase_integrand needs N >= 16");
    auto simpson = [&](int n) {
        n += n % 2;  // even interval count
        const double dk = (k_window[1] - k_window[0]) / n;
        double acc = zak_integrand_noncommuting(theta, phi, band, k_window[0]) +
                     zak_integrand_noncommuting(theta, phi, band, k_window[1]);
        for (int m = 1; m < n; ++m)
            acc += (m % 2 ? 4.0 : 2.0) *
                   zak_integrand_noncommuting(theta, phi, band, k_window[0] + m * dk);
        return acc * dk / 3.0;
    };
    ZakResult out;
    out.band = band;
    out.k_window = k_window;
    const double z1 = detail::canonical_phase(simpson(n_samples));
    const double z2 = detail::canonical_phase(simpson(2 * n_samples));
    out.samples = 2 * n_samples;
    out.phase = z2;
    out.converged = std::abs(detail::circular_delta(z2, z1)) < 1e-8;
    return out;
}

// Split-step closed-form result, implemented verbatim as the ratio
// tan(theta2)/tan(theta1). This is a real number, not a phase; it is reported
// side by side with the Wilson-line value and no agreement is asserted.
inline double zak_split_step_analytic(double theta1, double theta2) {
    detail::require_finite(theta1, "theta1");
    detail::require_finite(theta2, "theta2");
    const double t1 = std::tan(theta1);
    if (std::abs(t1) < 1e-12)
        throw std::domain_error("zak_split_step_analytic: tan(theta1) vanishes");
    return std::tan(theta2) / t1;
}

// Gauge-invariant phase difference |Z(pA) - Z(pB)| mod 2*pi on a common grid.
inline double zak_difference(const Protocol& pa, const Protocol& pb, Band band,
                             const std::array<double, 2>& k_window = kFullWindow,
                             int n_samples = 512) {
    const ZakResult za = zak_phase_wilson(pa, band, k_window, n_samples);
    const ZakResult zb = zak_phase_wilson(pb, band, k_window, n_samples);
    return detail::canonical_phase(std::abs(za.phase - zb.phase));
}

// ---------------------------------------------------------------------------
// Parameter-plane landscape with an explicit undefined mask.

enum class ZakMethod { wilson, connection, integrand, analytic };

struct LandscapeCell {
    double p1 = 0.0, p2 = 0.0;
    double z_plus = 0.0, z_minus = 0.0;
    bool defined = false;
};

// Both bands' Zak phases over an inclusive resolution x resolution grid of
// [-pi, pi]^2. Cells whose minimum gap (to either gap point, over an inclusive
// 257-point momentum grid) falls below 1e-6 are masked undefined rather than
// evaluated: at a gap closing the phase does not exist, and the momentum scan
// — unlike the midpoint Wilson grid — hits the closure momenta
// {0, +-pi/2, +-pi} exactly. Any residual per-cell numerical failure also
// becomes a mask entry, never a silent 0 or NaN. The analytic method (the
// split-step closed-form ratio) has no band dependence and is masked only on
// its own domain (tan(theta1) = 0).
inline std::vector<LandscapeCell> zak_landscape(Family family, int resolution,
                                                ZakMethod method = ZakMethod::wilson,
                                                int n_samples = 256, int threads = 1) {
    if (resolution < 2) throw std::invalid_argument("zak_landscape resolution must be >= 2");
    if (family == Family::standard)
        throw std::invalid_argument("zak_landscape expects a two-parameter family");
    if (method == ZakMethod::integrand && family != Family::non_commuting)
        throw std::invalid_argument("integrand method is specific to the non-commuting family");
    if (method == ZakMethod::analytic && family != Family::split_step)
        throw std::invalid_argument("analytic method is specific to the split-step family");
    std::vector<LandscapeCell> cells(static_cast<std::size_t>(resolution) * resolution);
    auto coord = [&](int i) { return -kPi + 2.0 * kPi * i / (resolution - 1); };
    detail::parallel_for(resolution, threads, [&](int i) {
        for (int j = 0; j < resolution; ++j) {
            LandscapeCell cell{coord(i), coord(j), 0.0, 0.0, false};
            const Protocol p = make_protocol(family, cell.p1, cell.p2);
            try {
                if (method == ZakMethod::analytic) {
                    cell.z_plus = cell.z_minus = zak_split_step_analytic(cell.p1, cell.p2);
                    cell.defined = true;
                } else {
                    double gmin = 4.0;
                    for (int m = 0; m < 257; ++m) {
                        const auto [g0, gp] = gap(p, -kPi + 2.0 * kPi * m / 256);
                        gmin = std::min(gmin, std::min(g0, gp));
                    }
                    if (gmin >= 1e-6) {
                        auto phase = [&](Band b) {
                            switch (method) {
                                case ZakMethod::wilson:
                                    return zak_phase_wilson(p, b, kFullWindow, n_samples).phase;
                                case ZakMethod::connection:
                                    return zak_phase_connection(p, b, kFullWindow, n_samples)
                                        .phase;
                                default:
                                    return zak_phase_integrand(cell.p1, cell.p2, b, kHalfWindow,
                                                               n_samples)
                                        .phase;
                            }
                        };
                        cell.z_plus = phase(Band::plus);
                        cell.z_minus = phase(Band::minus);
                        cell.defined = true;
                    }
                }
            } catch (const std::domain_error&) {
                cell = {coord(i), coord(j), 0.0, 0.0, false};
            }
            cells[static_cast<std::size_t>(i) * resolution + j] = cell;
        }
    });
    return cells;
}

}  // namespace qwalk
