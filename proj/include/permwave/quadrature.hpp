#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace permwave {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK dqk15).
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk15_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
std::pair<double, double> gk15_panel(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double kronrod = gk15_weights[7] * f_mid;
    double gauss = g7_weights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk15_nodes[i];
        const double pair_sum = f(mid - dx) + f(mid + dx);
        kronrod += gk15_weights[i] * pair_sum;
        if (i % 2 == 1) gauss += g7_weights[i / 2] * pair_sum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 15 on [a, b] to an absolute tolerance, bisecting
/// the panel with the largest error estimate. Throws when the evaluation
/// budget runs out before the tolerance is met.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 std::size_t max_evals = 10000) {
    struct Panel {
        double a, b, value, error;
    };
    std::vector<Panel> panels;
    auto [v0, e0] = detail::gk15_panel(f, a, b);
    panels.push_back({a, b, v0, e0});
    std::size_t evals = 15;
    for (;;) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (total_err <= abs_tol) break;
        if (evals + 30 > max_evals)
            throw std::runtime_error(
                "quadrature failed to converge: error estimate " + std::to_string(total_err) +
                " > tolerance " + std::to_string(abs_tol) + " after " + std::to_string(evals) +
                " evaluations");
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        auto [vl, el] = detail::gk15_panel(f, p.a, mid);
        auto [vr, er] = detail::gk15_panel(f, mid, p.b);
        panels[worst] = {p.a, mid, vl, el};
        panels.push_back({mid, p.b, vr, er});
        evals += 30;
    }
    // ordered reduction keeps the result independent of split history quirks
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double sum = 0.0;
    for (const auto& p : panels) sum += p.value;
    return sum;
}

}  // namespace permwave
