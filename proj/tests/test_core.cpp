#include "qwalk/core.hpp"
#include "qwalk/detail/fft.hpp"
#include "qwalk/detail/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qwalk;

namespace {

// Frobenius distance between two coin operators.
double op_dist(const CoinOperator& a, const CoinOperator& b) {
    return std::sqrt(std::norm(a.m00 - b.m00) + std::norm(a.m01 - b.m01) +
                     std::norm(a.m10 - b.m10) + std::norm(a.m11 - b.m11));
}

}  // namespace

// ---------- coin operators ----------

TEST(Rotations, YAxisMatrixEntries) {
    // R_y(theta) = [[cos, -sin], [sin, cos]] on the {H, V} basis.
    const double t = 0.7;
    const CoinOperator r = rotation_y(t);
    EXPECT_NEAR(r.m00.real(), std::cos(t), 1e-15);
    EXPECT_NEAR(r.m01.real(), -std::sin(t), 1e-15);
    EXPECT_NEAR(r.m10.real(), std::sin(t), 1e-15);
    EXPECT_NEAR(r.m11.real(), std::cos(t), 1e-15);
    EXPECT_NEAR(r.m00.imag(), 0.0, 1e-15);
    EXPECT_NEAR(r.m01.imag(), 0.0, 1e-15);
}

TEST(Rotations, XAxisMatrixEntries) {
    // R_x(phi) = [[cos, i sin], [i sin, cos]].
    const double t = -1.3;
    const CoinOperator r = rotation_x(t);
    EXPECT_NEAR(r.m00.real(), std::cos(t), 1e-15);
    EXPECT_NEAR(r.m01.imag(), std::sin(t), 1e-15);
    EXPECT_NEAR(r.m10.imag(), std::sin(t), 1e-15);
    EXPECT_NEAR(r.m01.real(), 0.0, 1e-15);
}

TEST(Rotations, AxisSpecialCasesMatchNamedRotations) {
    for (double t : {0.0, 0.3, 1.1, -2.0, kPi}) {
        EXPECT_LT(op_dist(rotation_axis({0, 1, 0}, t), rotation_y(t)), 1e-14);
        EXPECT_LT(op_dist(rotation_axis({1, 0, 0}, t), rotation_x(t)), 1e-14);
    }
}

TEST(Rotations, UnitaryWithUnitDeterminant) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> a(-1, 1), t(-6, 6);
    for (int i = 0; i < 200; ++i) {
        std::array<double, 3> n{a(rng), a(rng), a(rng)};
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (len < 1e-3) continue;
        for (auto& c : n) c /= len;
        const CoinOperator r = rotation_axis(n, t(rng));
        EXPECT_TRUE(is_unitary(r));
        EXPECT_NEAR(std::abs(r.det() - Complex(1, 0)), 0.0, 1e-12);  // SU(2)
    }
}

TEST(Rotations, AxisRequiresUnitVector) {
    EXPECT_THROW(rotation_axis({0, 0, 0}, 0.5), std::invalid_argument);
    EXPECT_THROW(rotation_axis({1, 1, 0}, 0.5), std::invalid_argument);
}

TEST(Rotations, CompositionAddsAnglesOnFixedAxis) {
    const std::array<double, 3> n{0.6, 0.0, 0.8};
    const CoinOperator ab = rotation_axis(n, 0.4) * rotation_axis(n, 1.1);
    EXPECT_LT(op_dist(ab, rotation_axis(n, 1.5)), 1e-14);
}

TEST(HadamardCoin, BalancedEntriesAndInvolution) {
    const CoinOperator h = hadamard_coin();
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(h.m00.real(), s, 1e-15);
    EXPECT_NEAR(h.m01.real(), s, 1e-15);
    EXPECT_NEAR(h.m10.real(), s, 1e-15);
    EXPECT_NEAR(h.m11.real(), -s, 1e-15);
    EXPECT_TRUE(is_unitary(h));
    // H^2 = I and det H = -1: a reflection, not an SU(2) rotation.
    CoinOperator id{1, 0, 0, 1};
    EXPECT_LT(op_dist(h * h, id), 1e-15);
    EXPECT_NEAR((h.det() + Complex(1, 0)).real(), 0.0, 1e-15);
}

TEST(CoinOperatorAlgebra, AdjointInvertsUnitaries) {
    const CoinOperator r = rotation_axis({0.48, -0.6, 0.64}, 2.2);
    CoinOperator id{1, 0, 0, 1};
    EXPECT_LT(op_dist(r * r.adjoint(), id), 1e-14);
    EXPECT_LT(op_dist(r.adjoint() * r, id), 1e-14);
}

// ---------- states ----------

TEST(StateOps, InnerProductIsConjugateLinear) {
    const CoinSpinor a{Complex(0.3, 0.4), Complex(-0.5, 0.1)};
    const CoinSpinor b{Complex(1.0, -1.0), Complex(0.25, 0.0)};
    const Complex ab = inner(a, b);
    const Complex ba = inner(b, a);
    EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-15);
    EXPECT_NEAR(inner(a, a).real(), a.norm2(), 1e-15);
    EXPECT_NEAR(inner(a, a).imag(), 0.0, 1e-15);
}

TEST(StateOps, LocalizedStateNormAndOverlap) {
    const auto s = WalkerCoinState::localized(3, {Complex(0.6, 0), Complex(0, 0.8)});
    EXPECT_NEAR(s.norm2(), 1.0, 1e-15);
    EXPECT_NEAR(fidelity(s, s), 1.0, 1e-15);
    // States on disjoint sites are orthogonal.
    const auto t = WalkerCoinState::localized(-2, {Complex(1, 0), Complex(0, 0)});
    EXPECT_NEAR(std::abs(overlap(s, t)), 0.0, 1e-15);
}

TEST(StateOps, FidelityIsGlobalPhaseInvariant) {
    auto s = WalkerCoinState::localized(0, {Complex(0.6, 0), Complex(0, 0.8)});
    auto t = s;
    const Complex phase = std::polar(1.0, 1.234);
    for (auto& [j, amp] : t.amplitudes) {
        amp.h *= phase;
        amp.v *= phase;
    }
    EXPECT_NEAR(fidelity(s, t), 1.0, 1e-14);
}

TEST(StateOps, TranslateShiftsComponentsOppositely) {
    // H moves right, V moves left; amplitudes are carried unchanged.
    auto s = WalkerCoinState::localized(0, {Complex(0.6, 0), Complex(0, 0.8)});
    const auto t = translate(s);
    ASSERT_EQ(t.amplitudes.count(1), 1u);
    ASSERT_EQ(t.amplitudes.count(-1), 1u);
    EXPECT_NEAR(std::abs(t.amplitudes.at(1).h - Complex(0.6, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(t.amplitudes.at(1).v), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(t.amplitudes.at(-1).v - Complex(0, 0.8)), 0.0, 1e-15);
    EXPECT_NEAR(t.norm2(), 1.0, 1e-15);
}

TEST(StateOps, ApplyCoinActsSitewise) {
    auto s = WalkerCoinState::localized(5, {Complex(1, 0), Complex(0, 0)});
    const auto t = apply_coin(s, hadamard_coin());
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(t.amplitudes.at(5).h - Complex(r, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(t.amplitudes.at(5).v - Complex(r, 0)), 0.0, 1e-15);
}

TEST(StateOps, MomentsOfHandBuiltDistribution) {
    WalkerCoinState s;
    s.amplitudes[-1] = {Complex(std::sqrt(0.25), 0), Complex(0, 0)};
    s.amplitudes[3] = {Complex(0, 0), Complex(std::sqrt(0.75), 0)};
    const auto dist = probability_distribution(s);
    EXPECT_NEAR(dist.at(-1), 0.25, 1e-15);
    EXPECT_NEAR(dist.at(3), 0.75, 1e-15);
    EXPECT_NEAR(position_mean(s), 2.0, 1e-14);
    // var = E[j^2] - mean^2 = (0.25 + 6.75) - 4 = 3.
    EXPECT_NEAR(position_sigma(s), std::sqrt(3.0), 1e-14);
}

// ---------- numeric helpers ----------

TEST(Linalg, SymmetricEigenSolverRecoversSpectrum) {
    // A = Q diag(5, 2, -1) Q^T for a hand-picked orthogonal Q.
    const double c = std::cos(0.6), s = std::sin(0.6);
    const double q[3][3] = {{c, -s, 0}, {s, c, 0}, {0, 0, 1}};
    const double d[3] = {5, 2, -1};
    detail::Mat3 a{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) a[i][j] += q[i][k] * d[k] * q[j][k];
    const auto eg = detail::eigh3(a);
    EXPECT_NEAR(eg.values[0], -1.0, 1e-12);
    EXPECT_NEAR(eg.values[1], 2.0, 1e-12);
    EXPECT_NEAR(eg.values[2], 5.0, 1e-12);
    // Eigenvector of the smallest eigenvalue is +-e_z here.
    EXPECT_NEAR(std::abs(eg.vectors[0][2]), 1.0, 1e-12);
}

TEST(Fft, MatchesNaiveTransformOnRandomInput) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Complex> x(64);
    for (auto& c : x) c = Complex(u(rng), u(rng));
    auto fast = x;
    auto slow = x;
    detail::fft_radix2(fast);
    detail::dft_naive(slow);
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
    EXPECT_LT(worst, 1e-12);
}
