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

#ifndef CORRPRECODE_NUMERICS_HPP
#define CORRPRECODE_NUMERICS_HPP

// Small dense complex linear algebra: Hermitian eigendecomposition (cyclic
// Jacobi), SVD, orthonormal completion and Haar sampling. Matrices here are
// at most a few tens of rows, so every routine favours robustness over speed.

#include "matrix.hpp"
#include "subspace.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <vector>

namespace corrprecode::numerics
{

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-9;

struct HermEig
{
    RealVector values;     // non-increasing
    ComplexMatrix vectors; // unitary, column k pairs with values(k)
};

struct Svd
{
    ComplexMatrix left;   // m x k, orthonormal columns
    RealVector singulars; // k = min(m, n), non-increasing, >= 0
    ComplexMatrix right;  // n x k, orthonormal columns
};

namespace detail
{

// Apply the 2x2 unitary J (acting on coordinates p, q) from the right: X <- X J.
inline void rotate_columns(ComplexMatrix &x, Index p, Index q, cplx j00, cplx j01, cplx j10, cplx j11)
{
    for (Index k = 0; k < x.rows(); ++k)
    {
        const cplx xp = x(k, p);
        const cplx xq = x(k, q);
        x(k, p) = xp * j00 + xq * j10;
        x(k, q) = xp * j01 + xq * j11;
    }
}

// X <- J^H X.
inline void rotate_rows(ComplexMatrix &x, Index p, Index q, cplx j00, cplx j01, cplx j10, cplx j11)
{
    for (Index k = 0; k < x.cols(); ++k)
    {
        const cplx xp = x(p, k);
        const cplx xq = x(q, k);
        x(p, k) = std::conj(j00) * xp + std::conj(j10) * xq;
        x(q, k) = std::conj(j01) * xp + std::conj(j11) * xq;
    }
}

inline double off_diagonal_sq(const ComplexMatrix &a)
{
    double off = 0.0;
    for (Index q = 1; q < a.cols(); ++q)
        for (Index p = 0; p < q; ++p)
            off += std::norm(a(p, q));
    return off;
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// The input is symmetrized as (A + A^H)/2 before decomposition; inputs more
/// than kHermitianTol (relative Frobenius) away from Hermitian are rejected.
/// Eigenvalues come back sorted non-increasing.
inline HermEig herm_eig(const ComplexMatrix &input)
{
    require(input.rows() >= 1 && input.rows() == input.cols(), "herm_eig: matrix must be square");
    require(all_finite(input), "herm_eig: non-finite entries");
    const double scale = input.norm();
    require((input - input.adjoint()).norm() <= kHermitianTol * scale, "herm_eig: matrix is not Hermitian");

    const Index n = input.rows();
    ComplexMatrix a = 0.5 * (input + input.adjoint());
    ComplexMatrix v = ComplexMatrix::Identity(n, n);

    const double target = std::pow(std::numeric_limits<double>::epsilon() * scale, 2);
    for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep)
    {
        if (detail::off_diagonal_sq(a) <= target)
            break;
        for (Index p = 0; p < n - 1; ++p)
        {
            for (Index q = p + 1; q < n; ++q)
            {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;
                // Phase-rotate the pair to a real symmetric 2x2 block, then
                // apply the classic Jacobi rotation with the smaller angle.
                const cplx phase = apq / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx j00 = c, j01 = s, j10 = -s * std::conj(phase), j11 = c * std::conj(phase);
                detail::rotate_columns(a, p, q, j00, j01, j10, j11);
                detail::rotate_rows(a, p, q, j00, j01, j10, j11);
                detail::rotate_columns(v, p, q, j00, j01, j10, j11);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index i, Index j) { return a(i, i).real() > a(j, j).real(); });

    HermEig out{RealVector(n), ComplexMatrix(n, n)};
    for (Index k = 0; k < n; ++k)
    {
        out.values(k) = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

/// Thin SVD (Eigen's two-sided Jacobi SVD behind the contract).
inline Svd svd(const ComplexMatrix &a)
{
    require(a.rows() >= 1 && a.cols() >= 1, "svd: empty matrix");
    require(all_finite(a), "svd: non-finite entries");
    Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Svd{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

/// Extend the orthonormal columns of `partial` to `total` orthonormal columns
/// by Gram-Schmidt against the canonical vectors, always taking the canonical
/// vector with the largest residual (ties to the lowest index). Deterministic.
inline ComplexMatrix complete_orthonormal(const ComplexMatrix &partial, Index total)
{
    const Index n = partial.rows();
    require(partial.cols() <= total && total <= n, "complete_orthonormal: bad column count");
    ComplexMatrix q(n, total);
    q.leftCols(partial.cols()) = partial;
    for (Index k = partial.cols(); k < total; ++k)
    {
        const auto basis = q.leftCols(k);
        double best_norm = -1.0;
        ComplexVector best_residual;
        for (Index j = 0; j < n; ++j)
        {
            ComplexVector r = ComplexVector::Unit(n, j);
            r -= basis * (basis.adjoint() * r);
            const double nr = r.norm();
            if (nr > best_norm)
            {
                best_norm = nr;
                best_residual = r;
            }
        }
        // second pass restores orthogonality lost to cancellation
        best_residual -= basis * (basis.adjoint() * best_residual);
        q.col(k) = best_residual / best_residual.norm();
    }
    return q;
}

/// Orthonormal basis of the orthogonal complement of span(v): an
/// n x (n - m) representative of the null space, so that [v null_basis(v)]
/// is unitary.
inline ComplexMatrix null_basis(const Subspace &v)
{
    const Index n = v.ambient_dim();
    const Index m = v.dim();
    if (m >= n)
        throw empty_null_space("null_basis: subspace fills the ambient space");
    return complete_orthonormal(v.matrix(), n).rightCols(n - m);
}

/// [v null_basis(v)].
inline ComplexMatrix unitary_completion(const Subspace &v)
{
    return complete_orthonormal(v.matrix(), v.ambient_dim());
}

/// Orthonormalize the columns of a full-column-rank matrix by modified
/// Gram-Schmidt with one reorthogonalization pass. This is the Q factor of a
/// QR decomposition with positive real diagonal R.
inline ComplexMatrix orthonormalize(ComplexMatrix a)
{
    for (Index j = 0; j < a.cols(); ++j)
    {
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i < j; ++i)
                a.col(j) -= a.col(i) * a.col(i).dot(a.col(j));
        const double nrm = a.col(j).norm();
        require(nrm > 0.0, "orthonormalize: rank-deficient input");
        a.col(j) /= nrm;
    }
    return a;
}

/// Haar-distributed point of G(n, m) (as a semiunitary representative): QR
/// of an i.i.d. complex Gaussian matrix with the phase-fixed Q factor.
inline Subspace haar_semiunitary(Rng &rng, Index n, Index m)
{
    require(m >= 1 && n >= 1, "haar_semiunitary: dimensions must be positive");
    require(m <= n, "haar_semiunitary: m must not exceed n");
    ComplexMatrix g(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i)
            g(i, j) = rng.complex_gaussian(1.0);
    return Subspace(orthonormalize(std::move(g)));
}

} // namespace corrprecode::numerics

#endif
