#include "qwalk/walk.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace qwalk;

// ============================================================================
// Independent oracle: evolve the walk with an explicit dense one-step matrix
// over a bounded lattice. Shares no code with the sparse engine beyond the
// coin-matrix constructors, so agreement cross-checks the translation
// bookkeeping and per-protocol operator ordering.
// ============================================================================

namespace {

struct DenseWalk {
    int L;  // sites run -L..+L
    std::vector<Complex> psi;  // index 2*(j+L) + c, c: 0=H, 1=V

    explicit DenseWalk(int half_width) : L(half_width), psi(2 * (2 * half_width + 1)) {}

    int dim() const { return static_cast<int>(psi.size()); }

    void set(int site, const CoinSpinor& coin) {
        psi.assign(psi.size(), Complex{});
        psi[2 * (site + L) + 0] = coin.h;
        psi[2 * (site + L) + 1] = coin.v;
    }

    // Dense matrix application: out = M * psi.
    void apply(const std::vector<Complex>& m) {
        std::vector<Complex> out(psi.size());
        const int d = dim();
        for (int r = 0; r < d; ++r) {
            Complex acc{};
            for (int c = 0; c < d; ++c) acc += m[static_cast<std::size_t>(r) * d + c] * psi[c];
            out[r] = acc;
        }
        psi = std::move(out);
    }

    std::vector<Complex> coin_matrix(const CoinOperator& u) const {
        const int d = dim();
        std::vector<Complex> m(static_cast<std::size_t>(d) * d);
        for (int j = -L; j <= L; ++j) {
            const int b = 2 * (j + L);
            m[static_cast<std::size_t>(b) * d + b] = u.m00;
            m[static_cast<std::size_t>(b) * d + b + 1] = u.m01;
            m[static_cast<std::size_t>(b + 1) * d + b] = u.m10;
            m[static_cast<std::size_t>(b + 1) * d + b + 1] = u.m11;
        }
        return m;
    }

    // Conditional shift: |j+1,H><j,H| + |j-1,V><j,V|. Boundary rows are left
    // empty; callers must size L so no amplitude reaches the edge.
    std::vector<Complex> shift_matrix() const {
        const int d = dim();
        std::vector<Complex> m(static_cast<std::size_t>(d) * d);
        for (int j = -L; j <= L; ++j) {
            if (j + 1 <= L)
                m[static_cast<std::size_t>(2 * (j + 1 + L)) * d + 2 * (j + L)] = 1.0;
            if (j - 1 >= -L)
                m[static_cast<std::size_t>(2 * (j - 1 + L) + 1) * d + 2 * (j + L) + 1] = 1.0;
        }
        return m;
    }

    void one_step(const Protocol& p) {
        const auto shift = shift_matrix();
        if (const auto* sp = std::get_if<StandardProtocol>(&p)) {
            apply(coin_matrix(rotation_axis(sp->axis, sp->theta)));
            apply(shift);
        } else if (const auto* ss = std::get_if<SplitStepProtocol>(&p)) {
            apply(coin_matrix(rotation_y(ss->theta2)));
            apply(shift);
            apply(coin_matrix(rotation_y(ss->theta1)));
            apply(shift);
        } else if (const auto* nc = std::get_if<NonCommutingProtocol>(&p)) {
            apply(coin_matrix(rotation_y(nc->theta)));
            apply(coin_matrix(rotation_x(nc->phi)));
            apply(shift);
        } else {
            apply(coin_matrix(hadamard_coin()));
            apply(shift);
        }
    }

    double diff(const WalkerCoinState& s) const {
        double worst = 0;
        for (int j = -L; j <= L; ++j) {
            Complex h{}, v{};
            if (auto it = s.amplitudes.find(j); it != s.amplitudes.end()) {
                h = it->second.h;
                v = it->second.v;
            }
            worst = std::max(worst, std::abs(h - psi[2 * (j + L) + 0]));
            worst = std::max(worst, std::abs(v - psi[2 * (j + L) + 1]));
        }
        return worst;
    }
};

CoinSpinor random_coin(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    CoinSpinor c{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    const double n = std::sqrt(c.norm2());
    c.h /= n;
    c.v /= n;
    return c;
}

}  // namespace

// ---------- frozen four-step fixture ----------

TEST(HadamardWalk, FourStepAmplitudesMatchFrozenValues) {
    // All sixteen paths of the 4-step balanced-coin walk collapse to five
    // occupied sites; amplitudes worked out by hand (in units of 1/4).
    const auto s = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 4);
    const auto& a = s.amplitudes;
    const double q = 0.25;
    ASSERT_EQ(a.size(), 5u);
    EXPECT_NEAR(std::abs(a.at(4).h - Complex(q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(4).v), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(2).h - Complex(3 * q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(2).v - Complex(q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(0).h - Complex(-q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(0).v - Complex(q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(-2).h - Complex(q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(-2).v - Complex(-q, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(-4).h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.at(-4).v + Complex(q, 0)), 0.0, 1e-15);
}

TEST(HadamardWalk, FourStepDistributionIsSixteenths) {
    const auto s = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 4);
    const auto d = probability_distribution(s);
    EXPECT_NEAR(d.at(4), 1.0 / 16, 1e-14);
    EXPECT_NEAR(d.at(2), 10.0 / 16, 1e-14);
    EXPECT_NEAR(d.at(0), 2.0 / 16, 1e-14);
    EXPECT_NEAR(d.at(-2), 2.0 / 16, 1e-14);
    EXPECT_NEAR(d.at(-4), 1.0 / 16, 1e-14);
}

TEST(HadamardWalk, FourStepCoinStatesUpToGlobalPhase) {
    // Per-site coin directions: (1,0), (3,1)/sqrt10, (-1,1)/sqrt2, (1,-1)/sqrt2, (0,1).
    const auto s = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 4);
    const auto check = [&](int j, Complex h, Complex v) {
        const CoinSpinor expect{h, v};
        const CoinSpinor got = s.amplitudes.at(j);
        const double mag = std::sqrt(got.norm2() * expect.norm2());
        EXPECT_NEAR(std::abs(inner(expect, got)), mag, 1e-14) << "site " << j;
    };
    check(4, {1, 0}, {0, 0});
    check(2, {3, 0}, {1, 0});
    check(0, {-1, 0}, {1, 0});
    check(-2, {1, 0}, {-1, 0});
    check(-4, {0, 0}, {1, 0});
}

// ---------- dense-matrix cross-check ----------

TEST(DenseOracle, AllProtocolsAgreeThroughTenSteps) {
    std::mt19937 rng(20260818);
    const std::vector<Protocol> protocols{
        Protocol{HadamardProtocol{}},
        Protocol{StandardProtocol{{0, 1, 0}, kPi / 4}},
        Protocol{StandardProtocol{{0.6, 0.0, 0.8}, 1.1}},
        Protocol{SplitStepProtocol{0.3, 0.8}},
        Protocol{NonCommutingProtocol{1.0, 0.4}},
    };
    for (const auto& p : protocols) {
        const CoinSpinor coin = random_coin(rng);
        // Split-step moves up to 2 sites per step.
        DenseWalk oracle(25);
        oracle.set(0, coin);
        auto s = InitialCondition{0, coin}.embed();
        for (int n = 1; n <= 10; ++n) {
            oracle.one_step(p);
            s = step(s, p);
            ASSERT_LT(oracle.diff(s), 1e-13) << protocol_name(p) << " step " << n;
        }
    }
}

TEST(DenseOracle, EvolveComposesSingleSteps) {
    const Protocol p{SplitStepProtocol{0.5, 1.2}};
    auto a = evolve(InitialCondition{2, symmetric_coin()}, p, 7);
    auto b = InitialCondition{2, symmetric_coin()}.embed();
    for (int i = 0; i < 7; ++i) b = step(b, p);
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-14);
}

// ---------- structural properties ----------

TEST(WalkProperties, NormPreservedOverLongRuns) {
    for (const auto& p : {Protocol{HadamardProtocol{}}, Protocol{NonCommutingProtocol{0.7, 1.9}},
                          Protocol{SplitStepProtocol{1.3, -0.4}}}) {
        const auto s = evolve(InitialCondition{0, symmetric_coin()}, p, 60);
        EXPECT_NEAR(s.norm2(), 1.0, 1e-12);
    }
}

TEST(WalkProperties, ParityOfOccupiedSites) {
    // Single-shift protocols occupy only sites with j == n (mod 2).
    const auto s = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 5);
    for (const auto& [j, pr] : probability_distribution(s)) {
        EXPECT_EQ(((j % 2) + 2) % 2, 1) << "site " << j;
        EXPECT_LE(std::abs(j), 5);
    }
    // n = 5 balanced walk reaches exactly the odd sites -5..5.
    EXPECT_EQ(probability_distribution(s).size(), 6u);
}

TEST(WalkProperties, SplitStepReachesEvenSitesUpToTwoPerStep) {
    const auto s = evolve(InitialCondition{0, {1, 0}}, Protocol{SplitStepProtocol{0.9, 0.4}}, 6);
    for (const auto& [j, pr] : probability_distribution(s)) {
        EXPECT_EQ(j % 2, 0);
        EXPECT_LE(std::abs(j), 12);
    }
}

TEST(WalkProperties, SymmetricCoinGivesSymmetricDistribution) {
    // (|H> + i|V>)/sqrt2 under a real coin: the H and V histories mirror.
    const auto s = evolve(InitialCondition{0, symmetric_coin()}, Protocol{HadamardProtocol{}}, 50);
    const auto d = probability_distribution(s);
    for (const auto& [j, pr] : d) {
        ASSERT_EQ(d.count(-j), 1u);
        EXPECT_NEAR(pr, d.at(-j), 1e-12);
    }
    EXPECT_NEAR(position_mean(s), 0.0, 1e-10);
}

TEST(WalkProperties, BallisticSpreadPins) {
    // sigma/n approaches a protocol constant (ballistic transport), in sharp
    // contrast to the sqrt(n) of a classical random walk.
    const auto sym = evolve(InitialCondition{0, symmetric_coin()}, Protocol{HadamardProtocol{}}, 100);
    EXPECT_NEAR(position_sigma(sym) / 100.0, 0.5412413815289737, 1e-12);
    const auto hv = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 100);
    EXPECT_NEAR(position_sigma(hv) / 100.0, 0.4571475959051324, 1e-12);
    // Both sit inside the ballistic window.
    EXPECT_GT(position_sigma(sym) / 100.0, 0.4);
    EXPECT_LT(position_sigma(sym) / 100.0, 0.6);
}

TEST(WalkProperties, RotationCoinMatchesHadamardDistributionNotAmplitudes) {
    // R_y(pi/4) and the balanced reflection coin give the same 4-step
    // distribution from |H>, but differ in amplitude signs (det +1 vs -1).
    const auto ry = evolve(InitialCondition{0, {1, 0}}, Protocol{StandardProtocol{{0, 1, 0}, kPi / 4}}, 4);
    const auto hd = evolve(InitialCondition{0, {1, 0}}, Protocol{HadamardProtocol{}}, 4);
    const auto dr = probability_distribution(ry);
    EXPECT_NEAR(dr.at(-4), 0.0625, 1e-14);
    EXPECT_NEAR(dr.at(-2), 0.125, 1e-14);
    EXPECT_NEAR(dr.at(0), 0.125, 1e-14);
    EXPECT_NEAR(dr.at(2), 0.625, 1e-14);
    EXPECT_NEAR(dr.at(4), 0.0625, 1e-14);
    EXPECT_LT(fidelity(ry, hd), 1.0 - 1e-3);
}

// ---------- step-state preparation ----------

TEST(StepState, PrepareMatchesEvolve) {
    const Protocol p{NonCommutingProtocol{0.8, 0.3}};
    const auto a = prepare_step_state(6, InitialCondition{0, symmetric_coin()}, p);
    const auto b = evolve(InitialCondition{0, symmetric_coin()}, p, 6);
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-14);
}

TEST(StepState, OneStepEquivalenceHoldsForEveryProtocol) {
    for (const auto& p : {Protocol{HadamardProtocol{}}, Protocol{StandardProtocol{{0, 1, 0}, 0.7}},
                          Protocol{SplitStepProtocol{0.4, 1.1}},
                          Protocol{NonCommutingProtocol{1.2, 0.5}}}) {
        const auto rep = one_step_equivalence(8, p, InitialCondition{0, {1, 0}});
        EXPECT_TRUE(rep.pass) << protocol_name(p);
        EXPECT_LT(rep.fidelity_deficit, 1e-12);
    }
}

TEST(StepState, NegativeStepCountRejected) {
    EXPECT_THROW(evolve(InitialCondition{}, Protocol{HadamardProtocol{}}, -1),
                 std::invalid_argument);
}

TEST(ProtocolValidation, NonFiniteAnglesRejected) {
    EXPECT_THROW(validate(Protocol{StandardProtocol{{0, 1, 0}, std::nan("")}}),
                 std::invalid_argument);
    EXPECT_THROW(validate(Protocol{SplitStepProtocol{0.1, INFINITY}}), std::invalid_argument);
    EXPECT_NO_THROW(validate(Protocol{NonCommutingProtocol{0.0, 0.0}}));
}
