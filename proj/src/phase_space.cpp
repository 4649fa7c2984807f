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

#include "phasemeas/phase_space.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasemeas/displacement.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/parallel.hpp"

namespace phasemeas {

namespace {

using std::numbers::pi;

void require_square(const FockMatrix& rho, const char* who) {
    if (rho.rows() != rho.cols() || rho.rows() < 2) {
        throw DimensionMismatch(std::string(who) + ": density matrix must be square with dim >= 2");
    }
}

// Sum over n of (-1)^n |(D^dagger(xi) v)_n|^2 and sum of |.|^2, for one vector.
struct ParityAccum {
    double parity = 0.0;
    double mass = 0.0;
};

ParityAccum parity_of_displaced(const FockMatrix& d_adj, const Eigen::VectorXcd& v) {
    const Eigen::VectorXcd w = d_adj * v;
    ParityAccum acc;
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        const double p = std::norm(w(n));
        acc.mass += p;
        acc.parity += (n % 2 == 0) ? p : -p;
    }
    return acc;
}

} // namespace

std::string to_string(GridKind kind) {
    return kind == GridKind::characteristic ? "characteristic" : "wigner";
}

GridKind grid_kind_from_string(const std::string& name) {
    if (name == "characteristic") return GridKind::characteristic;
    if (name == "wigner") return GridKind::wigner;
    throw InvalidArgument("unknown grid kind '" + name + "'");
}

void GridSpec::validate() const {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw InvalidArgument("grid extent must be positive and finite");
    }
    if (n_points <= 0 || n_points % 2 != 0) {
        throw InvalidArgument("grid n_points must be even and positive, got " + std::to_string(n_points));
    }
}

GridSpec default_grid_spec(double max_abs_alpha) {
    return GridSpec{std::max(6.0, 2.0 * max_abs_alpha + 6.0), 256};
}

PhaseGrid sample_grid(const PhaseFunction& f, const GridSpec& spec, GridKind kind) {
    spec.validate();
    PhaseGrid grid;
    grid.kind = kind;
    grid.extent = spec.extent;
    grid.n_points = spec.n_points;
    grid.values.resize(spec.n_points, spec.n_points);
    const auto n = static_cast<std::size_t>(spec.n_points);
    parallel_for(n * n, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / n);
        const int j = static_cast<int>(idx % n);
        grid.values(i, j) = f(grid.point(i, j));
    });
    return grid;
}

Complex char_function(const FockMatrix& rho, Complex eta) {
    require_square(rho, "char_function");
    const int dim = static_cast<int>(rho.rows());
    const double r = std::abs(eta);
    const Eigen::MatrixXd d = radial_displacement(r, dim);
    const double theta = std::arg(eta);
    // Tr[rho D] = sum_k e^{ik theta} sum_{m-n=k} rho(n, m) d(m, n)
    Complex total = 0.0;
    for (int k = -(dim - 1); k < dim; ++k) {
        Complex partial = 0.0;
        const int n0 = std::max(0, -k);
        for (int n = n0; n < dim && n + k < dim; ++n) {
            partial += rho(n, n + k) * d(n + k, n);
        }
        total += partial * std::polar(1.0, k * theta);
    }
    return total;
}

PhaseGrid char_grid(const FockMatrix& rho, const GridSpec& spec) {
    require_square(rho, "char_grid");
    return sample_grid([&](Complex eta) { return char_function(rho, eta); }, spec,
                       GridKind::characteristic);
}

double wigner_point(const FockMatrix& rho, Complex xi, const Tolerances& tol) {
    require_square(rho, "wigner_point");
    const int dim = static_cast<int>(rho.rows());
    const FockMatrix d = displacement_elements(xi, dim);
    // Diagonal of D^dagger rho D, which is exact for n < dim.
    const FockMatrix rd = rho * d;
    Complex w = 0.0;
    Complex mass = 0.0;
    for (int n = 0; n < dim; ++n) {
        const Complex diag = d.col(n).dot(rd.col(n));
        mass += diag;
        w += (n % 2 == 0) ? diag : -diag;
    }
    const double deficit = std::abs(rho.trace() - mass);
    if (deficit > tol.wigner_truncation) {
        throw OutOfRange("wigner_point: xi=" + std::to_string(xi.real()) + "+" + std::to_string(xi.imag()) +
                         "i displaces " + std::to_string(deficit) + " of the state out of dim " +
                         std::to_string(dim));
    }
    if (std::abs(w.imag()) > tol.wigner_imag) {
        throw InvalidState("wigner_point: imaginary residue " + std::to_string(w.imag()));
    }
    return 2.0 / pi * w.real();
}

PhaseGrid wigner_grid_via_parity(const FockMatrix& rho, const GridSpec& spec, const Tolerances& tol) {
    require_square(rho, "wigner_grid_via_parity");
    spec.validate();
    const int dim = static_cast<int>(rho.rows());
    // Spectral decomposition once; each point then costs O(rank * dim^2).
    Eigen::SelfAdjointEigenSolver<FockMatrix> solver(0.5 * (rho + rho.adjoint()));
    std::vector<std::pair<double, Eigen::VectorXcd>> terms;
    for (int k = 0; k < dim; ++k) {
        const double p = solver.eigenvalues()(k);
        if (std::abs(p) > 1e-15) terms.emplace_back(p, solver.eigenvectors().col(k));
    }
    const double total = rho.trace().real();
    PhaseGrid grid;
    grid.kind = GridKind::wigner;
    grid.extent = spec.extent;
    grid.n_points = spec.n_points;
    grid.values.resize(spec.n_points, spec.n_points);
    const auto n = static_cast<std::size_t>(spec.n_points);
    parallel_for(n * n, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / n);
        const int j = static_cast<int>(idx % n);
        const Complex xi = grid.point(i, j);
        const FockMatrix d_adj = displacement_elements(xi, dim).adjoint();
        double parity = 0.0;
        double mass = 0.0;
        for (const auto& [p, v] : terms) {
            const ParityAccum acc = parity_of_displaced(d_adj, v);
            parity += p * acc.parity;
            mass += p * acc.mass;
        }
        if (std::abs(total - mass) > tol.wigner_truncation) {
            throw OutOfRange("wigner_grid_via_parity: grid point " + std::to_string(xi.real()) + "+" +
                             std::to_string(xi.imag()) + "i leaves the truncated space");
        }
        grid.values(i, j) = 2.0 / pi * parity;
    });
    return grid;
}

PhaseGrid wigner_grid_via_fft(const PhaseGrid& chi, const Tolerances& tol) {
    if (chi.kind != GridKind::characteristic) {
        throw InvalidArgument("wigner_grid_via_fft expects a characteristic-function grid");
    }
    const int n = chi.n_points;
    if (n <= 0 || n % 2 != 0 || chi.values.rows() != n || chi.values.cols() != n) {
        throw InvalidArgument("wigner_grid_via_fft: malformed grid");
    }
    const double ratio = boundary_rms_ratio(chi);
    if (ratio > tol.aliasing) {
        throw ResolutionError("characteristic function not resolved: boundary RMS " + std::to_string(ratio) +
                              " of peak exceeds " + std::to_string(tol.aliasing) + "; widen the grid");
    }
    const double h = chi.spacing();

    // G(a, b) = sum_{j,k} chi(j, k) (-1)^{j+k} exp(-2 pi i (a j + b k) / n)
    Eigen::MatrixXcd work(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            work(j, k) = ((j + k) % 2 == 0) ? chi.values(j, k) : -chi.values(j, k);
        }
    }
    Eigen::FFT<double> fft;
    Eigen::VectorXcd in(n);
    Eigen::VectorXcd out(n);
    for (int k = 0; k < n; ++k) {
        in = work.col(k);
        fft.fwd(out, in);
        work.col(k) = out;
    }
    for (int a = 0; a < n; ++a) {
        in = work.row(a).transpose();
        fft.fwd(out, in);
        work.row(a) = out.transpose();
    }

    // With eta = u + i v and xi = x + i y the kernel is exp(2i (y u - x v)):
    // the u-sum runs with the opposite sign, hence the index reversal a = n - p.
    PhaseGrid w;
    w.kind = GridKind::wigner;
    w.n_points = n;
    const double dxi = pi / (n * h);
    w.extent = 0.5 * n * dxi;
    w.values.resize(n, n);
    const double scale = h * h / (pi * pi);
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) {
            const int a = (n - p) % n;
            const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
            w.values(q, p) = scale * sign * work(a, q);
        }
    }
    return w;
}

double closed_form_cat_wigner(Complex alpha, Complex xi) {
    const double norm_inv = 2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha)));
    const double cross = std::exp(-2.0 * std::norm(xi)) * std::cos(4.0 * (std::conj(alpha) * xi).imag());
    const double lobes = std::exp(-2.0 * std::norm(xi - alpha)) + std::exp(-2.0 * std::norm(xi + alpha));
    return 2.0 / (pi * norm_inv) * (lobes + 2.0 * cross);
}

double boundary_rms_ratio(const PhaseGrid& grid) {
    const int n = grid.n_points;
    const int band = std::max(1, n / 64);
    double sum = 0.0;
    long count = 0;
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = std::abs(grid.values(i, j));
            peak = std::max(peak, a);
            if (i < band || j < band || i >= n - band || j >= n - band) {
                sum += a * a;
                ++count;
            }
        }
    }
    if (peak == 0.0) return 0.0;
    return std::sqrt(sum / static_cast<double>(count)) / peak;
}

CharGridCheck check_characteristic(const PhaseGrid& chi) {
    CharGridCheck out;
    const int n = chi.n_points;
    const int c = chi.origin_index();
    out.origin_deviation = std::abs(chi.values(c, c) - 1.0);
    // Index i maps to -i' with i' = n - i; index 0 has no partner on the grid.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.max_abs = std::max(out.max_abs, std::abs(chi.values(i, j)));
            if (i == 0 || j == 0) continue;
            const double dev = std::abs(chi.values(n - i, n - j) - std::conj(chi.values(i, j)));
            out.symmetry_deviation = std::max(out.symmetry_deviation, dev);
        }
    }
    return out;
}

WignerGridCheck check_wigner(const PhaseGrid& w) {
    WignerGridCheck out;
    double sum = 0.0;
    out.min_value = w.values(0, 0).real();
    for (int i = 0; i < w.n_points; ++i) {
        for (int j = 0; j < w.n_points; ++j) {
            const Complex v = w.values(i, j);
            out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
            sum += v.real();
            if (v.real() < out.min_value) {
                out.min_value = v.real();
                out.min_i = i;
                out.min_j = j;
            }
        }
    }
    out.integral = sum * w.cell_area();
    return out;
}

void validate_grid(const PhaseGrid& grid, const Tolerances& tol) {
    if (grid.n_points <= 0 || grid.n_points % 2 != 0 || grid.values.rows() != grid.n_points ||
        grid.values.cols() != grid.n_points) {
        throw InvalidState("grid shape is inconsistent with n_points");
    }
    if (grid.kind == GridKind::characteristic) {
        const CharGridCheck c = check_characteristic(grid);
        if (c.origin_deviation > tol.chi_origin) {
            throw InvalidState("chi(0) deviates from 1 by " + std::to_string(c.origin_deviation));
        }
        if (c.symmetry_deviation > tol.chi_symmetry) {
            throw InvalidState("chi violates Hermitian symmetry by " + std::to_string(c.symmetry_deviation));
        }
    } else {
        const WignerGridCheck c = check_wigner(grid);
        if (c.max_imag > tol.wigner_imag) {
            throw InvalidState("Wigner grid has imaginary residue " + std::to_string(c.max_imag));
        }
        if (std::abs(c.integral - 1.0) > tol.wigner_integral) {
            throw InvalidState("Wigner grid integrates to " + std::to_string(c.integral));
        }
    }
}

double grid_purity(const PhaseGrid& chi) {
    return chi.values.cwiseAbs2().sum() * chi.cell_area() / pi;
}

std::vector<double> wigner_marginal_x(const PhaseGrid& w) {
    std::vector<double> out(static_cast<std::size_t>(w.n_points), 0.0);
    for (int i = 0; i < w.n_points; ++i) {
        double s = 0.0;
        for (int j = 0; j < w.n_points; ++j) s += w.values(i, j).real();
        out[static_cast<std::size_t>(i)] = s * w.spacing();
    }
    return out;
}

} // namespace phasemeas
