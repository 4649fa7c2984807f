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

// kick.hpp: radial kick distributions g(|alpha|) and their discretization.
//
// Normalization: int g(|alpha|) d^2alpha = 2 pi int r g(r) dr = 1.
//   gaussian(sigma):  g = exp(-r^2/sigma^2) / (pi sigma^2),  chi_g(r) = exp(-sigma^2 r^2)
//   tabulated:        cubic spline through (radii, density), zero past the last radius,
//                     chi_g(r) = 2 pi int s g(s) J0(2 s r) ds

#pragma once

#include <memory>
#include <random>
#include <vector>

#include "phasemeas/fock.hpp"

namespace phasemeas {

class KickDistribution {
public:
    enum class Kind { gaussian, tabulated };

    static KickDistribution gaussian(double sigma);
    /// radii must start at 0, ascend strictly and have at least 4 entries.
    /// Throws InvalidArgument for a non-normalizable table.
    static KickDistribution tabulated(std::vector<double> radii, std::vector<double> density);

    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    const std::vector<double>& radii() const { return radii_; }
    /// Table values after normalization.
    const std::vector<double>& density() const { return density_; }
    /// Mass of the table before normalization (1 for gaussian).
    double raw_mass() const { return raw_mass_; }

    /// g(r), normalized.
    double operator()(double r) const;
    /// 2 pi r g(r).
    double radial_density(double r) const;
    /// chi_g(r), real, chi_g(0) = 1.
    double chi(double r) const;
    /// int |alpha|^2 g d^2alpha.
    double second_moment() const;
    /// Radius past which the radial mass is below `tail`.
    double support_radius(double tail) const;

    double sample_radius(std::mt19937_64& rng) const;

private:
    struct Table;

    Kind kind_ = Kind::gaussian;
    double sigma_ = 1.0;
    std::vector<double> radii_;
    std::vector<double> density_;
    double raw_mass_ = 1.0;
    std::shared_ptr<const Table> table_;
};

struct KickQuadratureOptions {
    double tail = 1e-10;   // radial mass allowed past the cutoff
    int panels = 0;        // 0: pick from the distribution
    int n_angles = 0;      // 0: max(64, 2 dim)
};

/// Shared discretization of int d^2alpha g(|alpha|) (...): radial nodes with
/// weights summing to 1 times a uniform angular grid.
struct KickQuadrature {
    std::vector<double> radii;
    std::vector<double> weights;  // sum to 1
    int n_angles = 64;
    double cutoff = 0.0;
    double raw_weight = 1.0;      // sum of weights before renormalization

    std::size_t size() const { return radii.size() * static_cast<std::size_t>(n_angles); }
    Complex node(std::size_t j, int k) const;
    double node_weight(std::size_t j) const { return weights[j] / n_angles; }
    /// Discretized chi_g: sum_j w_j J0(2 r_j r).
    double chi(double r) const;
};

/// Throws InvalidArgument when the cutoff leaves more than `tail` of the mass
/// unresolved (quadrature underresolution).
KickQuadrature make_kick_quadrature(const KickDistribution& g, int dim, const KickQuadratureOptions& opts = {});

} // namespace phasemeas
