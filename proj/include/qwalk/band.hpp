#pragma once
// Momentum-space analysis of the walk protocols: one-step unitary at fixed
// momentum, quasi-energy dispersion, Bloch decomposition, gap maps, gapless
// (Dirac) point location, and the split-step winding number.
//
// Momentum conventions. Fourier pair psi_hat(k) = sum_j psi(j) e^{-ikj}, under
// which the conditional translation acts as T_k = diag(e^{-ik}, e^{+ik}).
// The split-step protocol translates twice per step, so its natural momentum
// is the two-site-cell momentum: momentum_unitary(SplitStep, k) equals the
// lattice-momentum step operator at q = k/2, and k in (-pi, pi] spans the
// halved effective Brillouin zone exactly once. Closed-form dispersions:
//   Standard(axis n, theta):  cos E = cos theta cos k - n_z sin theta sin k
//   SplitStep(t1, t2):        cos E = cos k cos t1 cos t2 - sin t1 sin t2
//   NonCommuting(theta, phi): cos E = cos k cos theta cos phi + sin k sin theta sin phi
// E_plus = arccos(rhs) on the principal branch [0, pi]; bands are e^{-+ iE}.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/detail/linalg.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct MomentumUnitary {
    double k = 0.0;
    CoinOperator u;
};

// Conditional translation at momentum k: diag(e^{-ik}, e^{+ik}).
inline CoinOperator translation_momentum(double k) {
    return {std::polar(1.0, -k), 0.0, 0.0, std::polar(1.0, k)};
}

inline MomentumUnitary momentum_unitary(const Protocol& p, double k) {
    detail::require_finite(k, "momentum");
    validate(p);
    CoinOperator u;
    if (const auto* s = std::get_if<StandardProtocol>(&p)) {
        u = translation_momentum(k) * rotation_axis(s->axis, s->theta);
    } else if (const auto* s = std::get_if<SplitStepProtocol>(&p)) {
        const CoinOperator th = translation_momentum(k / 2.0);
        u = th * rotation_y(s->theta1) * th * rotation_y(s->theta2);
    } else if (const auto* s = std::get_if<NonCommutingProtocol>(&p)) {
        u = translation_momentum(k) * rotation_x(s->phi) * rotation_y(s->theta);
    } else {
        u = translation_momentum(k) * hadamard_coin();
    }
    return {k, u};
}

struct BandPair {
    double plus = 0.0;   // E in [0, pi]
    double minus = 0.0;  // -E
};

namespace detail {
inline double dispersion_rhs(const Protocol& p, double k) {
    if (const auto* s = std::get_if<StandardProtocol>(&p)) {
        return std::cos(s->theta) * std::cos(k) - s->axis[2] * std::sin(s->theta) * std::sin(k);
    }
    if (const auto* s = std::get_if<SplitStepProtocol>(&p)) {
        return std::cos(k) * std::cos(s->theta1) * std::cos(s->theta2) -
               std::sin(s->theta1) * std::sin(s->theta2);
    }
    if (const auto* s = std::get_if<NonCommutingProtocol>(&p)) {
        return std::cos(k) * std::cos(s->theta) * std::cos(s->phi) +
               std::sin(k) * std::sin(s->theta) * std::sin(s->phi);
    }
    throw std::invalid_argument(
        "quasi-energy dispersion undefined for the hadamard protocol (coin is not an SU(2) "
        "rotation)");
}
}  // namespace detail

inline BandPair quasienergy(const Protocol& p, double k) {
    detail::require_finite(k, "momentum");
    validate(p);
    double rhs = detail::dispersion_rhs(p, k);
    if (std::abs(rhs) > 1.0 + 1e-12)
        throw std::domain_error("dispersion |cos E| > 1: formula/implementation inconsistency");
    rhs = std::clamp(rhs, -1.0, 1.0);
    const double e = std::acos(rhs);
    return {e, -e};
}

// Distance of the band phases to the gap points 0 and pi.
inline std::pair<double, double> gap(const Protocol& p, double k) {
    const BandPair e = quasienergy(p, k);
    return {e.plus, kPi - e.plus};
}

struct BlochVector {
    double k = 0.0;
    std::array<double, 3> n{};  // unit length
    double E = 0.0;             // quasi-energy in [0, pi]
};

// Exact SU(2) logarithm of the momentum unitary: U = cos E - i sin E (n . sigma),
// so n_j = i tr(sigma_j U) / (2 sin E). Undefined at gap closings.
inline BlochVector bloch_vector(const Protocol& p, double k) {
    if (std::holds_alternative<HadamardProtocol>(p))
        throw std::invalid_argument("bloch_vector undefined for the hadamard protocol");
    const CoinOperator u = momentum_unitary(p, k).u;
    const double cos_e = std::clamp(0.5 * (u.m00 + u.m11).real(), -1.0, 1.0);
    const double e = std::acos(cos_e);
    const double sin_e = std::sin(e);
    if (sin_e < 1e-9) throw std::domain_error("bloch_vector undefined at a gapless point");
    const Complex w01 = Complex(0, 1) * u.m01 / sin_e;  // n_x - i n_y
    const Complex w10 = Complex(0, 1) * u.m10 / sin_e;  // n_x + i n_y
    std::array<double, 3> n{0.5 * (w01 + w10).real(), 0.5 * (w10 - w01).imag(),
                            -u.m00.imag() / sin_e};
    const double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(r - 1.0) > 1e-6)
        throw std::domain_error("bloch_vector: non-unit decomposition (unexpected)");
    for (double& c : n) c /= r;
    return {k, n, e};
}

// Eigenvectors of (n . sigma) for a not-necessarily-normalized n, picking
// between the two algebraically equivalent closed forms by denominator size so
// neither Bloch-sphere pole degrades accuracy. Output is invariant (up to
// global phase) under n -> lambda n, lambda > 0.
inline std::pair<CoinSpinor, CoinSpinor> band_eigenvectors(const std::array<double, 3>& n) {
    const double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (!(r > 1e-300)) throw std::invalid_argument("band_eigenvectors: zero vector");
    const Complex nxy_m(n[0], -n[1]);  // n_x - i n_y
    const Complex nxy_p(n[0], n[1]);
    CoinSpinor plus;
    if (n[2] < 0.0) {
        const double d = std::sqrt(2.0 * r * (r - n[2]));
        plus = {nxy_m / d, Complex(r - n[2], 0.0) / d};
    } else {
        const double d = std::sqrt(2.0 * r * (r + n[2]));
        plus = {Complex(r + n[2], 0.0) / d, nxy_p / d};
    }
    const CoinSpinor minus{-std::conj(plus.v), std::conj(plus.h)};
    return {plus, minus};
}

// ---------------------------------------------------------------------------
// Gap maps and gapless-point location over the protocol parameter planes.

enum class Family { standard, split_step, non_commuting };

inline Protocol make_protocol(Family f, double p1, double p2) {
    switch (f) {
        case Family::standard: return StandardProtocol{{0.0, 1.0, 0.0}, p1};
        case Family::split_step: return SplitStepProtocol{p1, p2};
        default: return NonCommutingProtocol{p1, p2};
    }
}

struct GapMapRow {
    double p1 = 0.0, p2 = 0.0;
    double k_at_min = 0.0;  // sampled momentum of the closest gap approach
    double gap0 = 0.0, gap_pi = 0.0;
};

namespace detail {
template <class Fn>
inline void parallel_for(int count, int threads, Fn&& fn);
}

// Dense grid of min-over-k gap distances; rows ordered p1-major.
inline std::vector<GapMapRow> phase_diagram(Family family, int resolution, int k_resolution = 257,
                                            int threads = 1) {
    if (resolution < 2) throw std::invalid_argument("phase_diagram resolution must be >= 2");
    const bool two_param = family != Family::standard;
    const int n2 = two_param ? resolution : 1;
    std::vector<GapMapRow> rows(static_cast<std::size_t>(resolution) * n2);
    auto coord = [&](int i) { return -kPi + 2.0 * kPi * i / (resolution - 1); };
    detail::parallel_for(resolution, threads, [&](int i) {
        const double a = coord(i);
        for (int j = 0; j < n2; ++j) {
            const double b = two_param ? coord(j) : 0.0;
            const Protocol p = make_protocol(family, a, b);
            GapMapRow row{a, b, 0.0, 4.0, 4.0};
            double best = 8.0;
            for (int m = 0; m < k_resolution; ++m) {
                const double k = -kPi + 2.0 * kPi * m / (k_resolution - 1);
                const auto [g0, gp] = gap(p, k);
                row.gap0 = std::min(row.gap0, g0);
                row.gap_pi = std::min(row.gap_pi, gp);
                if (std::min(g0, gp) < best) {
                    best = std::min(g0, gp);
                    row.k_at_min = k;
                }
            }
            rows[static_cast<std::size_t>(i) * n2 + j] = row;
        }
    });
    return rows;
}

struct DiracPoint {
    double theta = 0.0;
    double phi = 0.0;
    std::string k_class;  // "0", "pi", "+pi/2", "-pi/2"
    double k = 0.0;       // representative closure momentum
    double residual = 0.0;
};

struct DiracScan {
    std::vector<DiracPoint> points;  // one entry per closed-square location, k = +-pi merged
    int count_identified = 0;        // size of `points` (the headline count)
    int count_unidentified = 0;      // (theta, phi, k) triples with k = -pi kept separate
    int count_torus = 0;             // locations after also identifying theta/phi mod 2pi
    std::map<std::string, int> partition;
};

namespace detail {

// Compass (pattern) search minimizing f over the closed box [-pi, pi]^2.
inline std::array<double, 3> compass_min2(const std::function<double(double, double)>& f,
                                          double x, double y, double h0) {
    double fx = f(x, y);
    for (double h = h0; h > 1e-13;) {
        bool moved = false;
        const double cand[4][2] = {{x + h, y}, {x - h, y}, {x, y + h}, {x, y - h}};
        for (const auto& c : cand) {
            if (std::abs(c[0]) > kPi || std::abs(c[1]) > kPi) continue;
            const double fc = f(c[0], c[1]);
            if (fc < fx) {
                fx = fc;
                x = c[0];
                y = c[1];
                moved = true;
                break;
            }
        }
        if (!moved) h *= 0.5;
    }
    return {x, y, fx};
}

}  // namespace detail

// Locates the zero-quasi-energy closures E(theta, phi, k) = 0 of the
// non-commuting family at the candidate momenta {0, +-pi/2, +-pi}: coarse grid
// scan of 1 - cos E per momentum, local pattern-search refinement, then
// deduplication. Every closure point also closes the pi-gap at a complementary
// momentum; the reported k class is the E = 0 closure, which is what the
// marker taxonomy of the phase diagram distinguishes.
inline DiracScan find_dirac_points(int resolution = 256) {
    if (resolution < 64) throw std::invalid_argument("find_dirac_points resolution must be >= 64");
    struct Hit {
        double theta, phi, k, residual;
    };
    std::vector<Hit> hits;
    const double k_list[5] = {0.0, kPi / 2, -kPi / 2, kPi, -kPi};
    const double step = 2.0 * kPi / (resolution - 1);
    std::vector<double> f(static_cast<std::size_t>(resolution) * resolution);
    for (double k : k_list) {
        auto residual = [&](double th, double ph) {
            return 1.0 - detail::dispersion_rhs(NonCommutingProtocol{th, ph}, k);
        };
        for (int i = 0; i < resolution; ++i)
            for (int j = 0; j < resolution; ++j)
                f[static_cast<std::size_t>(i) * resolution + j] =
                    residual(-kPi + i * step, -kPi + j * step);
        auto at = [&](int i, int j) {
            if (i < 0 || j < 0 || i >= resolution || j >= resolution) return 1e30;
            return f[static_cast<std::size_t>(i) * resolution + j];
        };
        for (int i = 0; i < resolution; ++i) {
            for (int j = 0; j < resolution; ++j) {
                const double v = at(i, j);
                if (v > 5e-3) continue;
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        if (at(i + di, j + dj) < v) {
                            is_min = false;
                            break;
                        }
                    }
                if (!is_min) continue;
                const auto r =
                    detail::compass_min2(residual, -kPi + i * step, -kPi + j * step, step);
                if (r[2] < 1e-10) hits.push_back({r[0], r[1], k, r[2]});
            }
        }
    }
    // Merge refinement duplicates (same momentum, same plane location).
    std::vector<Hit> uniq;
    for (const Hit& h : hits) {
        bool dup = false;
        for (const Hit& u : uniq)
            if (std::abs(u.k - h.k) < 1e-9 && std::hypot(u.theta - h.theta, u.phi - h.phi) < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(h);
    }
    DiracScan scan;
    scan.count_unidentified = static_cast<int>(uniq.size());
    // Identify k = -pi with k = +pi: one point per closed-square location.
    for (const Hit& h : uniq) {
        bool dup = false;
        for (const DiracPoint& p : scan.points)
            if (std::hypot(p.theta - h.theta, p.phi - h.phi) < 1e-6 &&
                std::abs(std::abs(p.k) - std::abs(h.k)) < 1e-9) {
                dup = true;
                break;
            }
        if (dup) continue;
        DiracPoint p;
        p.theta = h.theta;
        p.phi = h.phi;
        p.k = h.k;
        p.residual = h.residual;
        if (std::abs(h.k) < 1e-9)
            p.k_class = "0";
        else if (std::abs(std::abs(h.k) - kPi) < 1e-9)
            p.k_class = "pi";
        else
            p.k_class = h.k > 0 ? "+pi/2" : "-pi/2";
        scan.points.push_back(p);
    }
    scan.count_identified = static_cast<int>(scan.points.size());
    for (const DiracPoint& p : scan.points) scan.partition[p.k_class]++;
    // Torus count: additionally identify theta and phi modulo 2 pi.
    auto torus_dist = [](double a, double b) {
        double d = std::fmod(std::abs(a - b), 2.0 * kPi);
        return std::min(d, 2.0 * kPi - d);
    };
    std::vector<DiracPoint> torus;
    for (const DiracPoint& p : scan.points) {
        bool dup = false;
        for (const DiracPoint& t : torus)
            if (torus_dist(t.theta, p.theta) < 1e-6 && torus_dist(t.phi, p.phi) < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) torus.push_back(p);
    }
    scan.count_torus = static_cast<int>(torus.size());
    return scan;
}

// ---------------------------------------------------------------------------
// Chiral axis and winding number for the split-step family.

struct ChiralAxis {
    std::array<double, 3> axis{};
    double residual = 0.0;  // RMS projection of the sampled n(k) onto the axis
};

// The Bloch curve of a chiral-symmetric walk lies in a fixed plane; its normal
// is recovered as the null direction of the sampled Gram matrix sum n n^T.
inline ChiralAxis chiral_axis(const SplitStepProtocol& p, int k_samples = 256) {
    if (k_samples < 8) throw std::invalid_argument("chiral_axis needs >= 8 samples");
    detail::Mat3 gram{};
    std::vector<std::array<double, 3>> ns;
    ns.reserve(k_samples);
    for (int m = 0; m < k_samples; ++m) {
        const double k = -kPi + (m + 0.5) * 2.0 * kPi / k_samples;
        const auto b = bloch_vector(Protocol{p}, k);
        ns.push_back(b.n);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) gram[r][c] += b.n[r] * b.n[c];
    }
    const auto eig = detail::eigh3(gram);
    ChiralAxis out;
    out.axis = eig.vectors[0];
    out.residual = std::sqrt(std::max(0.0, eig.values[0]) / k_samples);
    return out;
}

// Winding of n(k) in the plane orthogonal to the chiral axis as k traverses
// the (effective) Brillouin zone once. Reported as |W|: the sign follows the
// arbitrary orientation of the fitted axis, so only the magnitude is
// frame-invariant. Throws if the loop hits a gap closing or no common plane
// exists.
inline int winding_number(const SplitStepProtocol& p, int k_samples = 256) {
    const ChiralAxis ax = chiral_axis(p, k_samples);
    if (ax.residual > 1e-6)
        throw std::domain_error("winding_number: no chiral axis (plane fit residual too large)");
    const auto& a = ax.axis;
    auto cross = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return std::array<double, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                     u[0] * v[1] - u[1] * v[0]};
    };
    // in-plane orthonormal frame
    std::array<double, 3> e1 = std::abs(a[2]) < 0.9 ? cross(a, {0.0, 0.0, 1.0})
                                                    : cross(a, {1.0, 0.0, 0.0});
    const double l1 = std::hypot(e1[0], e1[1], e1[2]);
    for (double& c : e1) c /= l1;
    const std::array<double, 3> e2 = cross(a, e1);
    double total = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    for (int m = 0; m <= k_samples; ++m) {
        const double k = -kPi + (m % k_samples + 0.5) * 2.0 * kPi / k_samples;
        const auto b = bloch_vector(Protocol{p}, k);
        const double x = b.n[0] * e1[0] + b.n[1] * e1[1] + b.n[2] * e1[2];
        const double y = b.n[0] * e2[0] + b.n[1] * e2[1] + b.n[2] * e2[2];
        if (std::hypot(x, y) < 1e-9)
            throw std::domain_error("winding_number: Bloch vector leaves the chiral plane");
        const double ang = std::atan2(y, x);
        if (have_prev) {
            double d = ang - prev;
            while (d > kPi) d -= 2.0 * kPi;
            while (d < -kPi) d += 2.0 * kPi;
            total += d;
        }
        prev = ang;
        have_prev = true;
    }
    const double w = total / (2.0 * kPi);
    const long r = std::lround(w);
    if (std::abs(w - r) > 1e-6) throw std::domain_error("winding_number: non-integer winding");
    return static_cast<int>(std::labs(r));
}

// ---------------------------------------------------------------------------
// Momentum-space reconstruction of the position distribution (duality check).

// Evolves the flat momentum amplitude with powers of the lattice-momentum step
// operator and inverse-transforms back to sites. For the split-step protocol
// the lattice-momentum operator at q is momentum_unitary at k = 2q (the cell
// momentum spans the halved zone).
inline std::map<int, double> reconstruct_distribution(const Protocol& p,
                                                      const InitialCondition& init, int n,
                                                      int m_samples = 2048) {
    if (n < 0) throw std::invalid_argument("step count must be >= 0");
    if (m_samples < 16) throw std::invalid_argument("need >= 16 momentum samples");
    const bool split = std::holds_alternative<SplitStepProtocol>(p);
    const int reach = split ? 2 * n : n;
    std::vector<CoinSpinor> phat(m_samples);
    for (int m = 0; m < m_samples; ++m) {
        const double q = -kPi + 2.0 * kPi * m / m_samples;
        const CoinOperator u = momentum_unitary(p, split ? 2.0 * q : q).u;
        CoinSpinor s = init.coin;
        for (int t = 0; t < n; ++t) s = u.apply(s);
        phat[m] = s;
    }
    std::map<int, double> out;
    for (int j = init.site - reach; j <= init.site + reach; ++j) {
        Complex h = 0.0, v = 0.0;
        for (int m = 0; m < m_samples; ++m) {
            const double q = -kPi + 2.0 * kPi * m / m_samples;
            const Complex ph = std::polar(1.0, q * (j - init.site));
            h += ph * phat[m].h;
            v += ph * phat[m].v;
        }
        h /= double(m_samples);
        v /= double(m_samples);
        const double w = std::norm(h) + std::norm(v);
        if (w > 1e-24) out[j] = w;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

template <class Fn>
inline void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace qwalk
