// Copyright 2026 The phasemeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phasemeas/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "phasemeas/errors.hpp"

namespace phasemeas::quad {

Rule gauss_legendre(double a, double b, int panels) {
    if (panels < 1 || !(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("gauss_legendre: need b > a and panels >= 1");
    }
    using GL = boost::math::quadrature::gauss<double, kPanelOrder>;
    const auto& abscissa = GL::abscissa();  // nonnegative half, ascending
    const auto& weights = GL::weights();

    Rule rule;
    rule.x.reserve(static_cast<std::size_t>(panels) * kPanelOrder);
    rule.w.reserve(rule.x.capacity());
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        // even order: no node at zero, mirror the tabulated half
        for (std::size_t i = abscissa.size(); i-- > 0;) {
            rule.x.push_back(mid - half * abscissa[i]);
            rule.w.push_back(half * weights[i]);
        }
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            rule.x.push_back(mid + half * abscissa[i]);
            rule.w.push_back(half * weights[i]);
        }
    }
    return rule;
}

double PolarRule::angle(int k) const { return 2.0 * std::numbers::pi * k / n_angles; }

std::complex<double> PolarRule::node(std::size_t j, int k) const { return std::polar(r[j], angle(k)); }

double PolarRule::weight(std::size_t j) const { return radial_w[j] * 2.0 * std::numbers::pi / n_angles; }

PolarRule polar_rule(double radius, int panels, int n_angles) {
    if (n_angles < 1) throw InvalidArgument("polar_rule: n_angles must be positive");
    const Rule radial = gauss_legendre(0.0, radius, panels);
    PolarRule out;
    out.n_angles = n_angles;
    out.r = radial.x;
    out.radial_w.resize(radial.size());
    for (std::size_t j = 0; j < radial.size(); ++j) out.radial_w[j] = radial.w[j] * radial.x[j];
    return out;
}

} // namespace phasemeas::quad
