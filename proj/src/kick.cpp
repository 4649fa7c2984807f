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

#include "phasemeas/kick.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/Splines>

#include "phasemeas/errors.hpp"
#include "phasemeas/quadrature.hpp"

namespace phasemeas {

namespace {

constexpr double kPi = std::numbers::pi;
// widest sub-piece used when integrating the spline; keeps J0(2 s r) resolved
constexpr double kMaxPiece = 0.05;

using Spline1 = Eigen::Spline<double, 1>;

} // namespace

struct KickDistribution::Table {
    Spline1 spline;
    double r_max = 0.0;
    // integration nodes s_i with weights 2 pi s_i g_raw(s_i) ds
    std::vector<double> s;
    std::vector<double> w;
    // cumulative radial mass at the sub-piece boundaries (raw units)
    std::vector<double> edges;
    std::vector<double> cdf;

    double raw(double r) const {
        if (r < 0.0 || r > r_max) return 0.0;
        return std::max(0.0, spline(r / r_max)(0));
    }
};

KickDistribution KickDistribution::gaussian(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("gaussian kick: sigma must be positive");
    KickDistribution g;
    g.kind_ = Kind::gaussian;
    g.sigma_ = sigma;
    return g;
}

KickDistribution KickDistribution::tabulated(std::vector<double> radii, std::vector<double> density) {
    if (radii.size() != density.size() || radii.size() < 4) {
        throw InvalidArgument("tabulated kick: need >= 4 (radius, density) pairs of equal length");
    }
    if (radii.front() != 0.0) throw InvalidArgument("tabulated kick: radii must start at 0");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || !std::isfinite(density[i])) {
            throw InvalidArgument("tabulated kick: non-finite entry");
        }
        if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("tabulated kick: radii must ascend");
        if (density[i] < 0.0) throw InvalidArgument("tabulated kick: density must be nonnegative");
    }

    auto table = std::make_shared<Table>();
    table->r_max = radii.back();
    const auto n = static_cast<Eigen::Index>(radii.size());
    Eigen::RowVectorXd u(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i) = radii[static_cast<std::size_t>(i)] / table->r_max;
        y(i) = density[static_cast<std::size_t>(i)];
    }
    table->spline = Eigen::SplineFitting<Spline1>::Interpolate(y, 3, u);

    using GL = boost::math::quadrature::gauss<double, 10>;
    double mass = 0.0;
    table->edges.push_back(0.0);
    table->cdf.push_back(0.0);
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((radii[i + 1] - radii[i]) / kMaxPiece)));
        const double width = (radii[i + 1] - radii[i]) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double mid = radii[i] + (p + 0.5) * width;
            const double half = 0.5 * width;
            for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
                for (double sgn : {-1.0, 1.0}) {
                    const double s = mid + sgn * half * GL::abscissa()[k];
                    const double wt = half * GL::weights()[k] * 2.0 * kPi * s * table->raw(s);
                    table->s.push_back(s);
                    table->w.push_back(wt);
                    mass += wt;
                }
            }
            table->edges.push_back(mid + half);
            table->cdf.push_back(mass);
        }
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw InvalidArgument("tabulated kick: table is not normalizable (zero or infinite mass)");
    }
    for (auto& wt : table->w) wt /= mass;
    for (auto& c : table->cdf) c /= mass;

    KickDistribution g;
    g.kind_ = Kind::tabulated;
    g.sigma_ = 0.0;
    g.radii_ = std::move(radii);
    g.density_ = std::move(density);
    for (auto& d : g.density_) d /= mass;
    g.raw_mass_ = mass;
    g.table_ = std::move(table);
    return g;
}

double KickDistribution::operator()(double r) const {
    if (kind_ == Kind::gaussian) return std::exp(-r * r / (sigma_ * sigma_)) / (kPi * sigma_ * sigma_);
    return table_->raw(r) / raw_mass_;
}

double KickDistribution::radial_density(double r) const { return 2.0 * kPi * r * (*this)(r); }

double KickDistribution::chi(double r) const {
    if (r < 0.0) throw InvalidArgument("chi_g: r must be nonnegative");
    if (kind_ == Kind::gaussian) return std::exp(-sigma_ * sigma_ * r * r);
    if (r == 0.0) return 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < table_->s.size(); ++i) acc += table_->w[i] * std::cyl_bessel_j(0.0, 2.0 * table_->s[i] * r);
    return acc;
}

double KickDistribution::second_moment() const {
    if (kind_ == Kind::gaussian) return sigma_ * sigma_;
    double acc = 0.0;
    for (std::size_t i = 0; i < table_->s.size(); ++i) acc += table_->w[i] * table_->s[i] * table_->s[i];
    return acc;
}

double KickDistribution::support_radius(double tail) const {
    if (!(tail > 0.0) || tail >= 1.0) throw InvalidArgument("support_radius: tail must lie in (0, 1)");
    if (kind_ == Kind::gaussian) return sigma_ * std::sqrt(std::log(1.0 / tail));
    const auto& cdf = table_->cdf;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        if (1.0 - cdf[i] < tail) return table_->edges[i];
    }
    return table_->r_max;
}

double KickDistribution::sample_radius(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    if (kind_ == Kind::gaussian) return sigma_ * std::sqrt(-std::log1p(-u));
    // inverse of the cumulative table, linear within a sub-piece
    const auto& cdf = table_->cdf;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return table_->r_max;
    const auto hi = static_cast<std::size_t>(it - cdf.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
    return table_->edges[lo] + frac * (table_->edges[hi] - table_->edges[lo]);
}

Complex KickQuadrature::node(std::size_t j, int k) const {
    return std::polar(radii[j], 2.0 * kPi * k / n_angles);
}

double KickQuadrature::chi(double r) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) acc += weights[j] * std::cyl_bessel_j(0.0, 2.0 * radii[j] * r);
    return acc;
}

KickQuadrature make_kick_quadrature(const KickDistribution& g, int dim, const KickQuadratureOptions& opts) {
    if (dim < 2) throw InvalidDimension("kick quadrature: dim must be >= 2");
    KickQuadrature q;
    q.n_angles = opts.n_angles > 0 ? opts.n_angles : std::max(64, 2 * dim);
    const double cutoff = g.support_radius(opts.tail);
    const double r_max = g.kind() == KickDistribution::Kind::gaussian ? cutoff : g.radii().back();
    q.cutoff = std::min(cutoff, r_max);
    const int panels = opts.panels > 0 ? opts.panels : (g.kind() == KickDistribution::Kind::gaussian ? 4 : 8);

    const quad::Rule rule = quad::gauss_legendre(0.0, q.cutoff, panels);
    q.radii = rule.x;
    q.weights.resize(rule.size());
    double total = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        q.weights[j] = rule.w[j] * g.radial_density(rule.x[j]);
        total += q.weights[j];
    }
    q.raw_weight = total;
    // tail plus quadrature error; anything larger means the nodes miss part of g
    if (std::abs(1.0 - total) > 1e-8) {
        throw InvalidArgument("kick quadrature underresolved: nodes capture mass " + std::to_string(total));
    }
    for (auto& w : q.weights) w /= total;
    return q;
}

} // namespace phasemeas
