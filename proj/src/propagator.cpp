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

#include "phasemeas/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "phasemeas/errors.hpp"

namespace phasemeas {

namespace {

// Catmull-Rom weights for offsets -1, 0, 1, 2 at fraction s
std::array<double, 4> cubic_weights(double s) {
    const double s2 = s * s, s3 = s2 * s;
    return {0.5 * (-s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0), 0.5 * (-3.0 * s3 + 4.0 * s2 + s),
            0.5 * (s3 - s2)};
}

} // namespace

void MeasurementModel::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("measurement rate gamma must be >= 0");
    if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
}

double damping_factor(const MeasurementModel& model, double r, double t) {
    if (t < 0.0) throw InvalidArgument("evolution time must be >= 0");
    return std::exp(-model.gamma * t * (1.0 - model.g.chi(r)));
}

Complex bicubic_lookup(const PhaseGrid& grid, Complex eta) {
    const int n = grid.n_points;
    const double h = grid.spacing();
    const double u = (eta.real() + grid.extent) / h;
    const double v = (eta.imag() + grid.extent) / h;
    const double last = n - 1;
    constexpr double slack = 1e-9;
    if (!(u >= -slack && u <= last + slack && v >= -slack && v <= last + slack)) {
        throw OutOfRange("chi lookup at (" + std::to_string(eta.real()) + ", " + std::to_string(eta.imag()) +
                         ") lies outside the source grid");
    }
    const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, n - 2);
    const auto wu = cubic_weights(std::clamp(u - i0, 0.0, 1.0));
    const auto wv = cubic_weights(std::clamp(v - j0, 0.0, 1.0));
    Complex acc{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        const int i = std::clamp(i0 - 1 + a, 0, n - 1);
        for (int b = 0; b < 4; ++b) {
            const int j = std::clamp(j0 - 1 + b, 0, n - 1);
            acc += wu[static_cast<std::size_t>(a)] * wv[static_cast<std::size_t>(b)] * grid.values(i, j);
        }
    }
    return acc;
}

CharSource CharSource::from_state(FockMatrix rho) {
    CharSource s;
    s.state_ = std::make_shared<const FockMatrix>(std::move(rho));
    auto state = s.state_;
    s.f_ = [state](Complex eta) { return char_function(*state, eta); };
    return s;
}

CharSource CharSource::from_grid(PhaseGrid grid) {
    if (grid.kind != GridKind::characteristic) throw InvalidArgument("CharSource needs a characteristic grid");
    CharSource s;
    s.grid_ = std::make_shared<const PhaseGrid>(std::move(grid));
    auto g = s.grid_;
    s.f_ = [g](Complex eta) { return bicubic_lookup(*g, eta); };
    s.interpolated_ = true;
    return s;
}

CharSource CharSource::from_function(PhaseFunction f, bool interpolated) {
    CharSource s;
    s.f_ = std::move(f);
    s.interpolated_ = interpolated;
    return s;
}

CharSource evolve(const CharSource& chi0, const MeasurementModel& model, double t) {
    model.validate();
    if (t < 0.0) throw InvalidArgument("evolution time must be >= 0");
    const Complex rot = std::polar(1.0, model.omega * t);
    auto f = [chi0, model, t, rot](Complex eta) {
        return chi0(eta * rot) * damping_factor(model, std::abs(eta), t);
    };
    return CharSource::from_function(std::move(f), chi0.interpolated());
}

PhaseGrid evolve_char(const CharSource& chi0, const MeasurementModel& model, double t, const GridSpec& spec) {
    const CharSource evolved = evolve(chi0, model, t);
    PhaseGrid out = sample_grid([&](Complex eta) { return evolved(eta); }, spec, GridKind::characteristic);
    out.interpolated = chi0.interpolated();
    return out;
}

PhaseGrid evolve_char(const PhaseGrid& chi0, const MeasurementModel& model, double t) {
    return evolve_char(CharSource::from_grid(chi0), model, t, GridSpec{chi0.extent, chi0.n_points});
}

} // namespace phasemeas
