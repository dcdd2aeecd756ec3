#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

// Globally adaptive 1-D quadrature on a 7-point Gauss / 15-point Kronrod
// pair (the QUADPACK node set). The worst panel is bisected until the summed
// error estimate drops below abs_tol; exceeding the panel budget raises
// NumericalFailure instead of returning a truncated value.
//
// Integrable endpoint singularities (logarithmic kernels) are handled by
// passing their abscissae as split points: panels then shrink dyadically
// toward the singular set and the node set never lands on it.

namespace gk15 {

// Kronrod abscissae on [-1,1]; even entries are the embedded Gauss-7 nodes.
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

template <class F>
PanelEstimate evaluate(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const double fc = f(mid);
    double kronrod = kWeightsK[7] * fc;
    double gauss = kWeightsG[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kWeightsK[i] * fsum;
        if (i % 2 == 1) gauss += kWeightsG[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace gk15

template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol, int max_panels,
                          std::span<const double> split_points = {}) {
    if (!(abs_tol > 0.0)) throw ContractViolation("integrate_adaptive: abs_tol must be > 0");
    if (!(b > a)) return 0.0;

    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };

    std::vector<double> cuts{a};
    for (double s : split_points)
        if (s > a && s < b) cuts.push_back(s);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    std::priority_queue<Panel> queue;
    double total = 0.0, total_err = 0.0;
    int panels = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i] < cuts[i + 1])) continue;
        const auto est = gk15::evaluate(f, cuts[i], cuts[i + 1]);
        queue.push({cuts[i], cuts[i + 1], est.value, est.error});
        total += est.value;
        total_err += est.error;
        ++panels;
    }

    while (total_err > abs_tol) {
        if (panels >= max_panels)
            throw NumericalFailure("integrate_adaptive: error " + std::to_string(total_err) +
                                   " above tolerance " + std::to_string(abs_tol) + " after " +
                                   std::to_string(panels) + " panels");
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw NumericalFailure("integrate_adaptive: panel underflow at x = " +
                                   std::to_string(worst.a));
        const auto left = gk15::evaluate(f, worst.a, mid);
        const auto right = gk15::evaluate(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
        ++panels;
    }
    return total;
}

}  // namespace wishart
