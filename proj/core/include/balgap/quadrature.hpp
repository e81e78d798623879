// Copyright 2026 The balgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace balgap {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half, symmetric).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 quadrature. Splits the panel with the
// largest error estimate until the summed estimate is within
// max(abs_tol, rel_tol * |value|) or the panel budget is exhausted.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi,
                                    double abs_tol, double rel_tol = 0.0,
                                    std::size_t max_panels = 20000) {
    if (!(hi >= lo)) throw std::invalid_argument("integrate_adaptive: hi < lo");
    if (hi == lo) return {0.0, 0.0, 0};

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_15(f, lo, hi));
    double value = panels.top().value;
    double error = panels.top().error;

    while (panels.size() < max_panels &&
           error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        const detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const detail::Panel left = detail::gauss_kronrod_15(f, worst.lo, mid);
        const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from the panels to shed drift accumulated by the running updates.
    QuadratureResult result;
    result.intervals = panels.size();
    std::vector<detail::Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    double v = 0.0, e = 0.0;
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
        v += it->value;
        e += it->error;
    }
    result.value = v;
    result.abs_error = e;
    return result;
}

}  // namespace balgap
