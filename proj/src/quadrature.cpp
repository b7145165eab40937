#include "npk/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace npk {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        Real x = std::cos(pi * (i + 0.75) / (n + 0.5));
        Real dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // One polishing step after convergence.
                p0 = 1;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                x -= p1 / dp;
                break;
            }
        }
        const Real w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0;
    return rule;
}

QuadratureRule gauss_legendre(int n, Real a, Real b) {
    QuadratureRule rule = gauss_legendre(n);
    const Real mid = (a + b) / 2, half = (b - a) / 2;
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

const QuadratureRule& thickness_rule() {
    static const QuadratureRule rule = gauss_legendre(64, -0.5, 0.5);
    return rule;
}

}  // namespace npk
