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

#ifndef CORRPRECODE_SUBSPACE_HPP
#define CORRPRECODE_SUBSPACE_HPP

#include "matrix.hpp"

#include <span>
#include <vector>

namespace corrprecode
{

/// Tolerance on ||V^H V - I||_F for a matrix to count as semiunitary.
inline constexpr double kSemiunitaryTol = 1e-9;

inline double semiunitary_defect(const ComplexMatrix &v)
{
    return (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
}

/// A point on the complex Grassmann manifold G(n, m), stored through one
/// semiunitary n x m representative. Two Subspaces that differ by a right
/// unitary factor are the same point; compare them with grassmann::dist,
/// never entrywise.
class Subspace
{
  public:
    explicit Subspace(ComplexMatrix basis) : basis_(std::move(basis))
    {
        require(basis_.rows() >= 1 && basis_.cols() >= 1, "Subspace: empty basis");
        require(basis_.cols() <= basis_.rows(), "Subspace: more columns than rows");
        require(all_finite(basis_), "Subspace: non-finite entries");
        require(semiunitary_defect(basis_) <= kSemiunitaryTol, "Subspace: basis is not semiunitary");
    }

    /// The canonical point [I_m; 0].
    static Subspace canonical(Index n, Index m)
    {
        require(m >= 1 && m <= n, "Subspace::canonical: need 1 <= m <= n");
        ComplexMatrix v = ComplexMatrix::Zero(n, m);
        v.topRows(m).setIdentity();
        return Subspace(std::move(v));
    }

    const ComplexMatrix &matrix() const { return basis_; }
    Index ambient_dim() const { return basis_.rows(); }
    Index dim() const { return basis_.cols(); }

    ComplexMatrix projector() const { return basis_ * basis_.adjoint(); }

    /// Keep a subset of the columns; any column subset of a semiunitary
    /// matrix is again semiunitary.
    Subspace columns(std::span<const Index> which) const
    {
        ComplexMatrix out(basis_.rows(), static_cast<Index>(which.size()));
        for (std::size_t k = 0; k < which.size(); ++k)
        {
            require(which[k] >= 0 && which[k] < basis_.cols(), "Subspace::columns: index out of range");
            out.col(static_cast<Index>(k)) = basis_.col(which[k]);
        }
        return Subspace(std::move(out));
    }

  private:
    ComplexMatrix basis_;
};

} // namespace corrprecode

#endif
