// SPDX-License-Identifier: Apache-2.0
//
// corrprecode: statistics-adapted limited-feedback precoding for correlated MIMO channels
// Copyright (C) 2026 The corrprecode authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CORRPRECODE_CHANNEL_HPP
#define CORRPRECODE_CHANNEL_HPP

// Canonical (eigenbeam) channel statistics H = U_r H_ind U_t^H with
// independent zero-mean circularly symmetric Gaussian H_ind entries of
// per-entry variance var(i, j). The i.i.d., separable (Kronecker) and
// virtual (DFT-basis) models are all constructors of this one type.

#include "matrix.hpp"
#include "subspace.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace corrprecode::channel
{

inline constexpr double kUnitaryTol = 1e-10;

struct CanonicalModel
{
    ComplexMatrix u_t; // N_t x N_t unitary
    ComplexMatrix u_r; // N_r x N_r unitary
    RealMatrix var;    // N_r x N_t, entrywise variances of H_ind

    Index n_t() const { return u_t.rows(); }
    Index n_r() const { return u_r.rows(); }
};

/// Transmit / receive eigenvalue lists in the physical (unsorted) layout.
struct CovarianceSpec
{
    RealVector lambda_t;
    RealVector lambda_r;
};

/// One side of the covariance: eigenvalues sorted non-increasing with the
/// matching eigenvectors, the permutation back to physical indices, and the
/// covariance matrix itself.
struct Covariance
{
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
    std::vector<Index> order; // order[k] = physical basis index of sorted entry k
    ComplexMatrix sigma;
};

inline bool is_unitary(const ComplexMatrix &u, double tol = kUnitaryTol)
{
    return u.rows() == u.cols() && (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.rows())).norm() <= tol;
}

inline void validate(const CanonicalModel &model)
{
    require(model.u_t.rows() >= 1 && model.u_r.rows() >= 1, "channel model: empty basis");
    require(is_unitary(model.u_t), "channel model: u_t is not unitary");
    require(is_unitary(model.u_r), "channel model: u_r is not unitary");
    require(model.var.rows() == model.n_r() && model.var.cols() == model.n_t(),
            "channel model: var must be N_r x N_t");
    require(model.var.allFinite(), "channel model: non-finite variance");
    require(model.var.minCoeff() >= 0.0, "channel model: negative variance");
    require(model.var.maxCoeff() > 0.0, "channel model: all variances are zero");
}

inline CanonicalModel make_model(ComplexMatrix u_t, ComplexMatrix u_r, RealMatrix var)
{
    CanonicalModel model{std::move(u_t), std::move(u_r), std::move(var)};
    validate(model);
    return model;
}

/// Unitary DFT matrix, entry (k, l) = exp(-j 2 pi k l / n) / sqrt(n).
inline ComplexMatrix dft_matrix(Index n)
{
    require(n >= 1, "dft_matrix: n must be positive");
    ComplexMatrix f(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l)
        {
            // reduce k*l mod n first so the angle stays small and exact
            const double angle = -2.0 * M_PI * static_cast<double>((k * l) % n) / static_cast<double>(n);
            f(k, l) = std::polar(norm, angle);
        }
    return f;
}

inline CanonicalModel iid_model(Index n_r, Index n_t)
{
    require(n_r >= 1 && n_t >= 1, "iid_model: dimensions must be positive");
    return make_model(ComplexMatrix::Identity(n_t, n_t), ComplexMatrix::Identity(n_r, n_r),
                      RealMatrix::Ones(n_r, n_t));
}

/// Normalized separable model: var(i, j) = lambda_r(i) lambda_t(j) / rho_c
/// with rho_c = Tr(lambda_t) = Tr(lambda_r). Mismatched traces are rejected.
inline CanonicalModel separable_model(const RealVector &lambda_t, const RealVector &lambda_r, ComplexMatrix u_t,
                                      ComplexMatrix u_r)
{
    require(lambda_t.size() == u_t.rows() && lambda_r.size() == u_r.rows(),
            "separable_model: eigenvalue counts must match the bases");
    if (lambda_t.minCoeff() < 0.0 || lambda_r.minCoeff() < 0.0)
        throw invalid_statistics("separable_model: negative eigenvalue");
    const double rho_t = lambda_t.sum();
    const double rho_r = lambda_r.sum();
    if (!(rho_t > 0.0) || std::abs(rho_t - rho_r) > 1e-6 * std::max(rho_t, rho_r))
        throw invalid_statistics("separable_model: Tr(lambda_t) and Tr(lambda_r) differ");
    RealMatrix var = lambda_r * lambda_t.transpose() / rho_t;
    return make_model(std::move(u_t), std::move(u_r), std::move(var));
}

/// Virtual representation: DFT bases on both sides.
inline CanonicalModel virtual_model(const RealMatrix &var)
{
    require(var.rows() >= 1 && var.cols() >= 1, "virtual_model: empty variance matrix");
    return make_model(dft_matrix(var.cols()), dft_matrix(var.rows()), var);
}

/// One channel realization, N_r x N_t. Draws H_ind row-major, one complex
/// Gaussian per entry (zero-variance entries still consume their draw).
inline ComplexMatrix sample(const CanonicalModel &model, Rng &rng)
{
    ComplexMatrix h_ind(model.n_r(), model.n_t());
    for (Index i = 0; i < model.n_r(); ++i)
        for (Index j = 0; j < model.n_t(); ++j)
            h_ind(i, j) = rng.complex_gaussian(model.var(i, j));
    return model.u_r * h_ind * model.u_t.adjoint();
}

/// Raw eigenvalues in physical layout: column sums (transmit), row sums (receive).
inline CovarianceSpec eigenvalues(const CanonicalModel &model)
{
    return {model.var.colwise().sum().transpose(), model.var.rowwise().sum()};
}

namespace detail
{
inline Covariance sorted_covariance(const RealVector &lambda, const ComplexMatrix &u)
{
    const Index n = lambda.size();
    Covariance cov;
    cov.order.resize(static_cast<std::size_t>(n));
    std::iota(cov.order.begin(), cov.order.end(), Index{0});
    std::stable_sort(cov.order.begin(), cov.order.end(), [&](Index a, Index b) { return lambda(a) > lambda(b); });
    cov.eigenvalues.resize(n);
    cov.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k)
    {
        cov.eigenvalues(k) = lambda(cov.order[k]);
        cov.eigenvectors.col(k) = u.col(cov.order[k]);
    }
    cov.sigma = u * lambda.cast<cplx>().asDiagonal() * u.adjoint();
    return cov;
}
} // namespace detail

/// Sigma_t = E[H^H H] = U_t diag(lambda_t) U_t^H, eigenvalues sorted
/// non-increasing (ties keep physical order).
inline Covariance transmit_cov(const CanonicalModel &model)
{
    return detail::sorted_covariance(eigenvalues(model).lambda_t, model.u_t);
}

/// Sigma_r = E[H H^H] = U_r diag(lambda_r) U_r^H.
inline Covariance receive_cov(const CanonicalModel &model)
{
    return detail::sorted_covariance(eigenvalues(model).lambda_r, model.u_r);
}

/// Statistics matched to an m-stream precoder at total power N_t N_r:
/// m equal dominant transmit eigenvalues N_t N_r / m, the rest zero, and a
/// flat receive spectrum of N_t.
inline CovarianceSpec matched_statistics(Index n_t, Index n_r, Index m)
{
    require(m >= 1 && m <= std::min(n_t, n_r), "matched_statistics: need 1 <= m <= min(n_t, n_r)");
    CovarianceSpec spec{RealVector::Zero(n_t), RealVector::Constant(n_r, static_cast<double>(n_t))};
    spec.lambda_t.head(m).setConstant(static_cast<double>(n_t * n_r) / static_cast<double>(m));
    return spec;
}

} // namespace corrprecode::channel

#endif
