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

#include <cmath>
#include <stdexcept>

#include "balgap/quadrature.hpp"
#include "balgap/sieve.hpp"

namespace balgap {

namespace {

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr long double kLi2 = 1.045163780117492784844588889194613136523L;

// Ramanujan's series for the principal-value integral li(x), x > 1.
long double li_series(long double x) {
    const long double lnx = std::log(x);
    long double power_over_fact = 1.0L;  // (ln x)^n / (n! 2^(n-1)), built up
    long double inner = 0.0L;            // sum_{k <= (n-1)/2} 1/(2k+1)
    long double sum = 0.0L;
    for (int n = 1; n < 400; ++n) {
        power_over_fact *= lnx / n;
        if (n > 1) power_over_fact /= 2;
        if ((n - 1) % 2 == 0) inner += 1.0L / (n);  // adds 1/(2k+1) with 2k+1 = n
        const long double term = (n % 2 == 1 ? 1 : -1) * power_over_fact * inner;
        sum += term;
        if (n > 2 * lnx && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return kEulerGamma + std::log(lnx) + std::sqrt(x) * sum;
}

}  // namespace

double log_integral(double x) {
    if (!(x >= 2.0)) throw std::domain_error("log_integral: x must be >= 2");
    if (x == 2.0) return 0.0;
    if (x < 4.0) {
        // Near the lower limit li(x) - li(2) cancels; integrate directly.
        return integrate_adaptive([](double t) { return 1.0 / std::log(t); }, 2.0, x,
                                  0.0, 1e-15)
            .value;
    }
    return static_cast<double>(li_series(x) - kLi2);
}

}  // namespace balgap
