#pragma once
// Small dense helpers: cyclic Jacobi eigensolver for real symmetric 3x3
// matrices. Enough for the chiral-axis fit; no general linear algebra here.

#include <array>
#include <cmath>

namespace qwalk::detail {

using Mat3 = std::array<std::array<double, 3>, 3>;

struct Eig3 {
    std::array<double, 3> values{};                  // ascending
    std::array<std::array<double, 3>, 3> vectors{};  // vectors[i] pairs with values[i]
};

// Cyclic Jacobi sweeps; plenty for well-scaled 3x3 symmetric input.
inline Eig3 eigh3(Mat3 a) {
    Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Eig3 out;
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> d{a[0][0], a[1][1], a[2][2]};
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (d[order[j]] < d[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i < 3; ++i) {
        out.values[i] = d[order[i]];
        for (int k = 0; k < 3; ++k) out.vectors[i][k] = v[k][order[i]];
    }
    return out;
}

}  // namespace qwalk::detail
