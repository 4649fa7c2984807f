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

// phase_space.hpp: characteristic and Wigner functions.
//
// Conventions (dimensionless ladder basis):
//   chi(eta) = Tr[rho D(eta)]
//   W(xi)    = (1/pi^2) Int d^2eta chi(eta) exp(xi eta* - xi* eta)
//            = Tr[rho Pi(xi)],  Pi(xi) = (2/pi) D(xi) P D^dagger(xi),  P = (-1)^N
//
// Grids are square, centred on the origin, with n_points (even) samples per
// axis at  -extent + k * spacing,  spacing = 2 extent / n_points,  so the origin
// is sample n_points/2 on both axes.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "phasemeas/fock.hpp"
#include "phasemeas/tolerances.hpp"

namespace phasemeas {

enum class GridKind { characteristic, wigner };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

struct GridSpec {
    double extent = 4.0;
    int n_points = 256;

    /// Throws InvalidArgument unless extent > 0 and n_points is even and positive.
    void validate() const;
};

/// extent = max(6, 2 max|alpha| + 6), n_points = 256.
GridSpec default_grid_spec(double max_abs_alpha);

struct PhaseGrid {
    GridKind kind = GridKind::characteristic;
    double extent = 0.0;
    int n_points = 0;
    /// values(i, j) sits at coordinate(i) + i * coordinate(j).
    Eigen::MatrixXcd values;
    /// Set when values came from interpolating another grid.
    bool interpolated = false;

    double spacing() const { return 2.0 * extent / n_points; }
    double coordinate(int k) const { return -extent + k * spacing(); }
    Complex point(int i, int j) const { return {coordinate(i), coordinate(j)}; }
    int origin_index() const { return n_points / 2; }
    double cell_area() const { return spacing() * spacing(); }
};

using PhaseFunction = std::function<Complex(Complex)>;

/// Samples f on every grid point (parallel over points, deterministic order).
PhaseGrid sample_grid(const PhaseFunction& f, const GridSpec& spec, GridKind kind);

/// Tr[rho D(eta)].
Complex char_function(const FockMatrix& rho, Complex eta);

PhaseGrid char_grid(const FockMatrix& rho, const GridSpec& spec);

/// Tr[rho Pi(xi)] via the displaced-parity form. Throws OutOfRange when the
/// state displaced by -xi no longer fits in the truncated space.
double wigner_point(const FockMatrix& rho, Complex xi, const Tolerances& tol = default_tolerances());

/// Wigner grid on the given spec using wigner_point at every sample.
PhaseGrid wigner_grid_via_parity(const FockMatrix& rho, const GridSpec& spec,
                                 const Tolerances& tol = default_tolerances());

/// Wigner function from a sampled characteristic function by a centred 2-D
/// DFT. The output grid is the reciprocal grid: same n_points, spacing
/// pi / (n_points * chi.spacing()). Throws ResolutionError when the boundary
/// band of |chi| is above tol.aliasing relative to the peak.
PhaseGrid wigner_grid_via_fft(const PhaseGrid& chi, const Tolerances& tol = default_tolerances());

/// Closed-form Wigner function of the even cat state N^{1/2}(|alpha> + |-alpha>).
double closed_form_cat_wigner(Complex alpha, Complex xi);

/// RMS of |values| over the outer band of the grid divided by the peak |value|.
double boundary_rms_ratio(const PhaseGrid& grid);

struct CharGridCheck {
    double origin_deviation = 0.0;    // |chi(0) - 1|
    double symmetry_deviation = 0.0;  // max |chi(-eta) - conj(chi(eta))|
    double max_abs = 0.0;             // max |chi|
};
CharGridCheck check_characteristic(const PhaseGrid& chi);

struct WignerGridCheck {
    double max_imag = 0.0;
    double integral = 0.0;
    double min_value = 0.0;
    int min_i = 0;
    int min_j = 0;
};
WignerGridCheck check_wigner(const PhaseGrid& w);

/// Throws InvalidState if the grid violates the invariants of its kind.
void validate_grid(const PhaseGrid& grid, const Tolerances& tol = default_tolerances());

/// (1/pi) sum |chi|^2 * cell area, i.e. Tr[rho^2] up to quadrature error.
double grid_purity(const PhaseGrid& chi);

/// Marginal of W over the imaginary axis: P(x_i) = sum_j W(x_i, y_j) dy.
std::vector<double> wigner_marginal_x(const PhaseGrid& w);

} // namespace phasemeas
