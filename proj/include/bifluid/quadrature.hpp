#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "bifluid/errors.hpp"

namespace bifluid {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on P_n from the Chebyshev-like initial guess; nodes ascending.
inline GaussLegendre make_gauss_legendre(int n)
{
    if (n < 1) throw DomainError("gauss_legendre: need at least one point");
    GaussLegendre rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Per-thread cache so repeated quadratures do not recompute nodes.
inline const GaussLegendre& gauss_legendre(int n)
{
    thread_local std::map<int, GaussLegendre> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

/// ∫_a^b f with `n` Gauss points on each of `panels` equal panels. Oriented: b < a flips the sign.
template <class Scalar, class F>
Scalar composite_gauss(F&& f, Scalar a, Scalar b, int n, int panels)
{
    const auto& rule = gauss_legendre(n);
    Scalar width = (b - a) / static_cast<double>(panels);
    Scalar total(0.0);
    for (int p = 0; p < panels; ++p) {
        Scalar left = a + width * static_cast<double>(p);
        Scalar half = width * 0.5;
        Scalar mid = left + half;
        Scalar acc(0.0);
        for (int i = 0; i < n; ++i) acc += f(mid + half * rule.nodes[i]) * rule.weights[i];
        total += acc * half;
    }
    return total;
}

} // namespace bifluid
