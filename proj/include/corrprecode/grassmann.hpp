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

#ifndef CORRPRECODE_GRASSMANN_HPP
#define CORRPRECODE_GRASSMANN_HPP

// Geometry of the complex Grassmann manifold G(N_t, M) under the projection
// 2-norm distance: spherical caps, the rotation map that re-centers a
// codeset, the scaling maps that contract a codeset toward its center, and
// Monte Carlo construction of localized root codesets.

#include "matrix.hpp"
#include "numerics.hpp"
#include "subspace.hpp"

#include <algorithm>
#include <thread>
#include <utility>
#include <vector>

namespace corrprecode::grassmann
{

/// Sines at or below this are treated as exact zeros (coincident directions).
inline constexpr double kZeroSine = 1e-13;

/// Open ball { X : dist(X, center) < radius }.
struct Cap
{
    Subspace center;
    double radius;
};

inline Cap make_cap(Subspace center, double radius)
{
    require(radius > 0.0 && radius < 1.0, "Cap: radius must lie in (0, 1)");
    return Cap{std::move(center), radius};
}

/// Root codeset: members[0] is the center; every member lies within theta
/// of it; gamma is the achieved minimum pairwise distance.
struct Codeset
{
    std::vector<Subspace> members;
    double theta = 0.0;
    double gamma = 0.0;

    const Subspace &center() const { return members.front(); }
    Index size() const { return static_cast<Index>(members.size()); }
};

inline void require_same_shape(const Subspace &a, const Subspace &b, const char *where)
{
    require(a.ambient_dim() == b.ambient_dim() && a.dim() == b.dim(),
            std::string(where) + ": subspaces have different shapes");
}

/// Projection 2-norm distance: the sine of the largest principal angle,
/// sqrt(1 - lambda_min(V1^H V2 V2^H V1)). Evaluated as the spectral norm of
/// the residual (I - V1 V1^H) V2, which has the same value but keeps full
/// relative accuracy for nearly coincident subspaces.
inline double dist(const Subspace &a, const Subspace &b)
{
    require_same_shape(a, b, "dist");
    const ComplexMatrix residual = b.matrix() - a.matrix() * (a.matrix().adjoint() * b.matrix());
    const double top = numerics::herm_eig(residual.adjoint() * residual).values(0);
    return std::clamp(std::sqrt(std::max(0.0, top)), 0.0, 1.0);
}

/// sqrt(1 - lambda_min(V1^H V2 V2^H V1)), evaluated literally.
inline double dist_sqrt_form(const Subspace &a, const Subspace &b)
{
    require_same_shape(a, b, "dist_sqrt_form");
    const ComplexMatrix p = a.matrix().adjoint() * b.matrix();
    const double lambda_min = numerics::herm_eig(p * p.adjoint()).values(a.dim() - 1);
    return std::sqrt(std::clamp(1.0 - lambda_min, 0.0, 1.0));
}

/// lambda_max(V1 V1^H - V2 V2^H), evaluated literally on the N_t x N_t difference.
inline double dist_lambda_max_form(const Subspace &a, const Subspace &b)
{
    require_same_shape(a, b, "dist_lambda_max_form");
    return std::clamp(numerics::herm_eig(a.projector() - b.projector()).values(0), 0.0, 1.0);
}

inline bool in_cap(const Subspace &v, const Cap &cap)
{
    return dist(v, cap.center) < cap.radius;
}

inline double min_dist(std::span<const Subspace> members)
{
    require(members.size() >= 2, "min_dist: need at least two members");
    double best = 1.0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            best = std::min(best, dist(members[i], members[j]));
    return best;
}

inline double min_dist(const Codeset &cs)
{
    return min_dist(std::span<const Subspace>(cs.members));
}

/// Rotation map: G_i = U_target U_v1^H V_i with U_x = [x null_basis(x)].
/// Isometric on the whole set and sends v1 to v_target.
inline std::vector<Subspace> rotate(std::span<const Subspace> items, const Subspace &v1, const Subspace &v_target)
{
    require_same_shape(v1, v_target, "rotate");
    for (const auto &item : items)
        require_same_shape(item, v1, "rotate");
    if (v1.matrix() == v_target.matrix())
        return {items.begin(), items.end()};
    if (v1.dim() == v1.ambient_dim())
        return {items.begin(), items.end()}; // G(n, n) is a single point

    const ComplexMatrix transfer = numerics::unitary_completion(v_target) * numerics::unitary_completion(v1).adjoint();
    std::vector<Subspace> out;
    out.reserve(items.size());
    for (const auto &item : items)
        out.emplace_back(transfer * item.matrix());
    return out;
}

/// Beamforming (M = 1) scaling map:
/// v1 sqrt(1 - a^2 (1 - |v1^H vi|^2)) e^{j arg(v1^H vi)} + a (vi - v1 v1^H vi).
inline Subspace scale_beamforming(const Subspace &v_i, const Subspace &v1, double alpha)
{
    require_same_shape(v_i, v1, "scale_beamforming");
    require(v1.dim() == 1, "scale_beamforming: only defined for M = 1");
    require(alpha > 0.0 && alpha <= 1.0, "scale_beamforming: alpha must lie in (0, 1]");
    const auto x = v1.matrix().col(0);
    const auto y = v_i.matrix().col(0);
    const cplx c = x.dot(y);
    const double mag = std::abs(c);
    const cplx phase = mag > 0.0 ? c / mag : cplx(1.0, 0.0);
    const double along = std::sqrt(std::max(0.0, 1.0 - alpha * alpha * (1.0 - mag * mag)));
    ComplexMatrix out = x * (along * phase) + alpha * (y - x * c);
    return Subspace(std::move(out));
}

/// Free parameters of the general scaling map s(V_i) = V1 A + V1_null B with
/// A = U_A diag(lambda)^{1/2} W^H and B = U_B diag(sigma_B) W^H.
struct ScaleParameters
{
    RealVector lambda; // diagonal of Lambda_i (M entries, non-increasing)
    RealVector gamma;  // Gamma_i (N_t - M entries); only when M > N_t - M
    ComplexMatrix u_a; // M x M
    ComplexMatrix w;   // M x M
    ComplexMatrix u_b; // (N_t - M) x (N_t - M)
    ComplexMatrix a;   // M x M
    ComplexMatrix b;   // (N_t - M) x M
    bool wide = false; // M > N_t - M
};

struct ScaleResult
{
    Subspace image;
    ScaleParameters params;
};

/// General scaling map with the canonical principal-angle parameters.
///
/// With P = V1^H V_i = U_A diag(cos) W^H and Q = V1_null^H V_i (so that
/// Q W has orthogonal columns of norm sin), every principal angle has its
/// sine multiplied by alpha: Lambda_i(j) = 1 - alpha^2 sin_j^2. The center is
/// a fixed point and dist(V1, s(V_i)) = alpha dist(V1, V_i). When
/// M > N_t - M the 2M - N_t smallest sines vanish identically (rank Q <=
/// N_t - M) and the matching Lambda entries are pinned to exactly 1.
inline ScaleResult scale_with_parameters(const Subspace &v_i, const Subspace &v1, double alpha)
{
    require_same_shape(v_i, v1, "scale");
    require(alpha > 0.0 && alpha <= 1.0, "scale: alpha must lie in (0, 1]");
    const Index n = v1.ambient_dim();
    const Index m = v1.dim();
    const Index k = n - m;

    ScaleParameters prm;
    if (k == 0)
    {
        prm.lambda = RealVector::Ones(m);
        prm.u_a = prm.w = prm.a = ComplexMatrix::Identity(m, m);
        prm.wide = true;
        return {v1, prm};
    }

    const ComplexMatrix null = numerics::null_basis(v1);
    const ComplexMatrix p = v1.matrix().adjoint() * v_i.matrix();
    const ComplexMatrix q = null.adjoint() * v_i.matrix();
    const auto sp = numerics::svd(p);
    prm.u_a = sp.left;
    prm.w = sp.right;
    prm.wide = m > k;

    // cosines come out non-increasing, so sines are non-decreasing
    const ComplexMatrix y = q * prm.w;
    RealVector sines(m);
    const Index forced = prm.wide ? 2 * m - n : 0;
    std::vector<Index> active;
    for (Index j = 0; j < m; ++j)
    {
        sines(j) = j < forced ? 0.0 : y.col(j).norm();
        if (sines(j) <= kZeroSine)
            sines(j) = 0.0;
        else
            active.push_back(j);
    }

    ComplexMatrix dirs(k, static_cast<Index>(active.size()));
    for (std::size_t t = 0; t < active.size(); ++t)
        dirs.col(static_cast<Index>(t)) = y.col(active[t]) / sines(active[t]);
    prm.u_b = numerics::complete_orthonormal(numerics::orthonormalize(dirs), k);

    prm.lambda.resize(m);
    for (Index j = 0; j < m; ++j)
        prm.lambda(j) = 1.0 - alpha * alpha * sines(j) * sines(j);
    if (prm.wide)
    {
        prm.gamma.resize(k);
        for (Index t = 0; t < k; ++t)
            prm.gamma(t) = alpha * alpha * sines(forced + t) * sines(forced + t);
    }

    prm.a = prm.u_a * prm.lambda.cwiseSqrt().cast<cplx>().asDiagonal() * prm.w.adjoint();
    prm.b = ComplexMatrix::Zero(k, m);
    for (std::size_t t = 0; t < active.size(); ++t)
    {
        const Index j = active[t];
        prm.b += (alpha * sines(j)) * prm.u_b.col(static_cast<Index>(t)) * prm.w.col(j).adjoint();
    }

    ComplexMatrix image = v1.matrix() * prm.a + null * prm.b;
    return {Subspace(std::move(image)), std::move(prm)};
}

inline Subspace scale(const Subspace &v_i, const Subspace &v1, double alpha)
{
    return scale_with_parameters(v_i, v1, alpha).image;
}

struct SimpleScaleCoefficients
{
    double beta;
    double delta;
};

/// beta = sqrt(1 - alpha^2 (1 - lambda_min)), delta = alpha sqrt(1 - lambda_min).
inline SimpleScaleCoefficients simple_scale_coefficients(double lambda_min, double alpha)
{
    const double gap = std::clamp(1.0 - lambda_min, 0.0, 1.0);
    return {std::sqrt(std::max(0.0, 1.0 - alpha * alpha * gap)), alpha * std::sqrt(gap)};
}

/// Single-column scaling map: keeps the first M - 1 columns of v1 and
/// replaces the last by beta v_M + delta v_extra. Depends on V_i only through
/// its distance to v1.
inline Subspace scale_simple(const Subspace &v_i, const Subspace &v1, double alpha, const ComplexVector &v_extra)
{
    require_same_shape(v_i, v1, "scale_simple");
    require(alpha > 0.0 && alpha <= 1.0, "scale_simple: alpha must lie in (0, 1]");
    require(v_extra.size() == v1.ambient_dim(), "scale_simple: v_extra has the wrong length");
    require(std::abs(v_extra.norm() - 1.0) <= 1e-10, "scale_simple: v_extra must have unit norm");
    require((v1.matrix().adjoint() * v_extra).norm() <= 1e-10, "scale_simple: v_extra is not orthogonal to v1");
    // 1 - lambda_min(V1^H Vi Vi^H V1) equals dist^2; the residual form keeps it accurate near 0
    const double d = dist(v1, v_i);
    const auto coef = simple_scale_coefficients(1.0 - d * d, alpha);
    ComplexMatrix out = v1.matrix();
    const Index last = v1.dim() - 1;
    out.col(last) = coef.beta * v1.matrix().col(last) + coef.delta * v_extra;
    return Subspace(std::move(out));
}

/// scale_simple with v_extra = first column of null_basis(v1).
inline Subspace scale_simple(const Subspace &v_i, const Subspace &v1, double alpha)
{
    const ComplexVector extra = numerics::null_basis(v1).col(0);
    return scale_simple(v_i, v1, alpha, extra);
}

/// Draw a point strictly inside the cap: a Haar point is kept if it already
/// lies inside, otherwise it is contracted toward the center onto distance
/// radius * u with u ~ U(0, 1).
inline Subspace sample_in_cap(Rng &rng, const Cap &cap)
{
    Subspace v = numerics::haar_semiunitary(rng, cap.center.ambient_dim(), cap.center.dim());
    const double d = dist(cap.center, v);
    if (d < cap.radius)
        return v;
    const double u = rng.uniform_open();
    return scale(v, cap.center, cap.radius * u / d);
}

namespace detail
{

struct TrialBest
{
    double gamma = -1.0;
    std::vector<Subspace> members;
};

inline TrialBest root_trial(std::uint64_t seed, const Cap &cap, Index n)
{
    Rng rng(seed);
    TrialBest out;
    out.members.reserve(static_cast<std::size_t>(n));
    out.members.push_back(cap.center);
    for (Index k = 1; k < n; ++k)
        out.members.push_back(sample_in_cap(rng, cap));
    out.gamma = min_dist(std::span<const Subspace>(out.members));
    return out;
}

} // namespace detail

/// Random-restart search for a well-packed codeset localized around the
/// canonical center [I_M; 0]. Each trial draws n - 1 cap points from its own
/// seed derive_seed(base, {trial}); the trial with the largest minimum
/// distance wins, ties to the lowest trial index. The result is identical
/// for any thread count.
inline Codeset make_root_codeset(Rng &rng, Index n_t, Index m, Index n, double theta, Index trials,
                                 unsigned threads = 1)
{
    require(n >= 2, "make_root_codeset: need at least two members");
    require(m >= 1 && m < n_t, "make_root_codeset: need 1 <= m < n_t");
    require(trials >= 1, "make_root_codeset: need at least one trial");
    const Cap cap = make_cap(Subspace::canonical(n_t, m), theta);
    const std::uint64_t base = rng.next_u64();

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    std::vector<detail::TrialBest> partial(workers);
    auto work = [&](unsigned w) {
        const Index begin = trials * w / workers;
        const Index end = trials * (w + 1) / workers;
        for (Index t = begin; t < end; ++t)
        {
            auto candidate = detail::root_trial(derive_seed(base, {static_cast<std::uint64_t>(t)}), cap, n);
            if (candidate.gamma > partial[w].gamma)
                partial[w] = std::move(candidate);
        }
    };
    if (workers == 1)
        work(0);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto &th : pool)
            th.join();
    }

    detail::TrialBest best;
    for (auto &p : partial)
        if (p.gamma > best.gamma)
            best = std::move(p);
    return Codeset{std::move(best.members), theta, best.gamma};
}

/// Best minimum distance found over `budget` candidate sets. Candidate t
/// always comes from the same derived seed, so the estimate is
/// non-decreasing in the budget for a fixed generator state.
inline double estimate_gamma_max(Rng &rng, Index n_t, Index m, Index n, double theta, Index budget,
                                 unsigned threads = 1)
{
    require(budget >= 1, "estimate_gamma_max: budget must be positive");
    return make_root_codeset(rng, n_t, m, n, theta, budget, threads).gamma;
}

} // namespace corrprecode::grassmann

#endif
