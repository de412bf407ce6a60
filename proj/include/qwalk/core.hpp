#pragma once
// Elementary state representation for a 1D two-component (coin) walker:
// sparse site->spinor amplitudes, 2x2 coin operators, and the two substep
// primitives (sitewise coin application, coin-conditioned translation).

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace qwalk {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Two-component coin amplitude at one lattice site; basis order {H, V}.
struct CoinSpinor {
    Complex h{};
    Complex v{};

    double norm2() const { return std::norm(h) + std::norm(v); }
};

inline Complex inner(const CoinSpinor& a, const CoinSpinor& b) {
    return std::conj(a.h) * b.h + std::conj(a.v) * b.v;
}

// 2x2 complex matrix acting on the coin space, row-major [[m00 m01][m10 m11]].
struct CoinOperator {
    Complex m00{}, m01{}, m10{}, m11{};

    CoinSpinor apply(const CoinSpinor& s) const {
        return {m00 * s.h + m01 * s.v, m10 * s.h + m11 * s.v};
    }
    CoinOperator operator*(const CoinOperator& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    CoinOperator adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }
    Complex trace() const { return m00 + m11; }
    Complex det() const { return m00 * m11 - m01 * m10; }

    static CoinOperator identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

inline bool is_unitary(const CoinOperator& u, double tol = 1e-12) {
    const CoinOperator g = u.adjoint() * u;
    return std::abs(g.m00 - 1.0) <= tol && std::abs(g.m11 - 1.0) <= tol &&
           std::abs(g.m01) <= tol && std::abs(g.m10) <= tol;
}

namespace detail {
inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}
}  // namespace detail

// Rotation about the y-axis: [[cos t, -sin t], [sin t, cos t]].
inline CoinOperator rotation_y(double theta) {
    detail::require_finite(theta, "rotation_y angle");
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

// Rotation about the x-axis: [[cos p, i sin p], [i sin p, cos p]].
inline CoinOperator rotation_x(double phi) {
    detail::require_finite(phi, "rotation_x angle");
    const double c = std::cos(phi), s = std::sin(phi);
    return {c, Complex(0, s), Complex(0, s), c};
}

// Rotation about an arbitrary unit axis n = (nx, ny, nz):
// [[cos t - i nz sin t, (i nx - ny) sin t], [(i nx + ny) sin t, cos t + i nz sin t]].
inline CoinOperator rotation_axis(const std::array<double, 3>& n, double theta) {
    detail::require_finite(theta, "rotation_axis angle");
    const double len2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (std::abs(std::sqrt(len2) - 1.0) > 1e-9)
        throw std::invalid_argument("rotation_axis requires a unit axis");
    const double c = std::cos(theta), s = std::sin(theta);
    return {Complex(c, -n[2] * s), Complex(-n[1] * s, n[0] * s),
            Complex(n[1] * s, n[0] * s), Complex(c, n[2] * s)};
}

// Balanced coin (1/sqrt2)[[1,1],[1,-1]]. Determinant -1: an involution, not a
// rotation -- kept distinct from rotation_y(pi/4), which shares its walk
// statistics but not its per-site coin states.
inline CoinOperator hadamard_coin() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r, r, -r};
}

// Sparse walker-coin state: ordered map from lattice site to coin spinor.
// Sites with (numerically) zero amplitude are absent; prune() enforces that
// after each step so the support stays exactly on the reachable parity class.
struct WalkerCoinState {
    std::map<int, CoinSpinor> amplitudes;

    static WalkerCoinState localized(int site, const CoinSpinor& coin) {
        WalkerCoinState s;
        s.amplitudes[site] = coin;
        return s;
    }

    double norm2() const {
        double t = 0.0;
        for (const auto& [j, a] : amplitudes) t += a.norm2();
        return t;
    }
    double norm() const { return std::sqrt(norm2()); }

    // Drop spinor components below eps in magnitude; erase empty sites.
    void prune(double eps = 1e-15) {
        for (auto it = amplitudes.begin(); it != amplitudes.end();) {
            CoinSpinor& a = it->second;
            if (std::abs(a.h) < eps) a.h = 0.0;
            if (std::abs(a.v) < eps) a.v = 0.0;
            if (a.h == 0.0 && a.v == 0.0)
                it = amplitudes.erase(it);
            else
                ++it;
        }
    }
};

inline Complex overlap(const WalkerCoinState& a, const WalkerCoinState& b) {
    Complex t = 0.0;
    // iterate the smaller support
    const WalkerCoinState& lead = a.amplitudes.size() <= b.amplitudes.size() ? a : b;
    const WalkerCoinState& other = (&lead == &a) ? b : a;
    for (const auto& [j, amp] : lead.amplitudes) {
        auto it = other.amplitudes.find(j);
        if (it == other.amplitudes.end()) continue;
        t += (&lead == &a) ? inner(amp, it->second) : inner(it->second, amp);
    }
    return t;
}

// Global-phase-insensitive state comparison, |<a|b>|.
inline double fidelity(const WalkerCoinState& a, const WalkerCoinState& b) {
    return std::abs(overlap(a, b));
}

// Sitewise left-multiplication by a coin operator; norm-preserving for unitary c.
inline WalkerCoinState apply_coin(const WalkerCoinState& state, const CoinOperator& c) {
    WalkerCoinState out;
    for (const auto& [j, a] : state.amplitudes) out.amplitudes[j] = c.apply(a);
    return out;
}

// Coin-conditioned shift: H-amplitude of site j moves to j+1, V to j-1.
inline WalkerCoinState translate(const WalkerCoinState& state) {
    WalkerCoinState out;
    for (const auto& [j, a] : state.amplitudes) {
        if (a.h != 0.0) out.amplitudes[j + 1].h += a.h;
        if (a.v != 0.0) out.amplitudes[j - 1].v += a.v;
    }
    return out;
}

// P(j) = |aH(j)|^2 + |aV(j)|^2.
inline std::map<int, double> probability_distribution(const WalkerCoinState& state) {
    std::map<int, double> p;
    for (const auto& [j, a] : state.amplitudes) {
        const double w = a.norm2();
        if (w > 0.0) p[j] = w;
    }
    return p;
}

inline double position_mean(const WalkerCoinState& state) {
    double m = 0.0;
    for (const auto& [j, a] : state.amplitudes) m += j * a.norm2();
    return m;
}

inline double position_sigma(const WalkerCoinState& state) {
    const double m = position_mean(state);
    double v = 0.0;
    for (const auto& [j, a] : state.amplitudes) v += (j - m) * (j - m) * a.norm2();
    return std::sqrt(v);
}

}  // namespace qwalk
