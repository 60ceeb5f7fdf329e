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

#ifndef CORRPRECODE_LINKPERF_HPP
#define CORRPRECODE_LINKPERF_HPP

// Link-level evaluation of y = H F s + n with unit-variance noise, per-stream
// symbol energy rho / M and a linear MMSE receiver.

#include "channel.hpp"
#include "matrix.hpp"
#include "numerics.hpp"
#include "subspace.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace corrprecode::linkperf
{

enum class PowerPolicy
{
    uniform,
    stat_waterfill,
    proportional,
};

inline std::string to_string(PowerPolicy p)
{
    switch (p)
    {
    case PowerPolicy::uniform:
        return "uniform";
    case PowerPolicy::stat_waterfill:
        return "stat_waterfill";
    case PowerPolicy::proportional:
        return "proportional";
    }
    return "uniform";
}

inline PowerPolicy power_policy_from_string(const std::string &s)
{
    if (s == "uniform")
        return PowerPolicy::uniform;
    if (s == "stat_waterfill")
        return PowerPolicy::stat_waterfill;
    if (s == "proportional")
        return PowerPolicy::proportional;
    throw invalid_input("unknown power policy '" + s + "'");
}

/// F = V diag(power)^{1/2} with Tr(F^H F) = sum(power) <= M.
struct Precoder
{
    Subspace v;
    RealVector power;

    Precoder(Subspace basis, RealVector p) : v(std::move(basis)), power(std::move(p))
    {
        require(power.size() == v.dim(), "Precoder: one power entry per stream");
        require(power.allFinite() && power.minCoeff() >= 0.0, "Precoder: powers must be non-negative");
        require(power.sum() <= static_cast<double>(v.dim()) + 1e-9, "Precoder: total power exceeds M");
    }

    static Precoder uniform(Subspace basis)
    {
        const Index m = basis.dim();
        return Precoder(std::move(basis), RealVector::Ones(m));
    }

    Index streams() const { return v.dim(); }
    ComplexMatrix matrix() const { return v.matrix() * power.cwiseSqrt().cast<cplx>().asDiagonal(); }
};

struct LinkMetrics
{
    RealVector sinr;
    double mi = 0.0;
};

inline void require_link_shapes(const ComplexMatrix &h, const Precoder &f, double rho)
{
    require(rho > 0.0, "link: rho must be positive");
    require(h.cols() == f.v.ambient_dim(), "link: H columns must match the precoder rows");
}

/// (I_M + (rho/M) F^H H^H H F)^{-1}
inline ComplexMatrix mmse_error_covariance(const ComplexMatrix &h, const Precoder &f, double rho)
{
    require_link_shapes(h, f, rho);
    const Index m = f.streams();
    const ComplexMatrix hf = h * f.matrix();
    ComplexMatrix k = ComplexMatrix::Identity(m, m) + (rho / static_cast<double>(m)) * (hf.adjoint() * hf);
    return k.llt().solve(ComplexMatrix::Identity(m, m));
}

/// Column k is g_k = sqrt(rho/M) (rho/M H F F^H H^H + I)^{-1} H f_k.
inline ComplexMatrix mmse_filters(const ComplexMatrix &h, const Precoder &f, double rho)
{
    require_link_shapes(h, f, rho);
    const double snr = rho / static_cast<double>(f.streams());
    const ComplexMatrix hf = h * f.matrix();
    ComplexMatrix r = snr * hf * hf.adjoint();
    r += ComplexMatrix::Identity(h.rows(), h.rows());
    return std::sqrt(snr) * r.llt().solve(hf);
}

/// SINR_k = 1 / (I + (rho/M) F^H H^H H F)^{-1}_{kk} - 1.
inline RealVector sinr(const ComplexMatrix &h, const Precoder &f, double rho)
{
    const ComplexMatrix e = mmse_error_covariance(h, f, rho);
    RealVector out(f.streams());
    for (Index k = 0; k < out.size(); ++k)
        out(k) = std::max(0.0, 1.0 / e(k, k).real() - 1.0);
    return out;
}

/// SINR from the explicit filters: signal power over interference-plus-noise
/// power at the output of g_k.
inline RealVector sinr_from_filters(const ComplexMatrix &h, const Precoder &f, double rho)
{
    const Index m = f.streams();
    const double snr = rho / static_cast<double>(m);
    const ComplexMatrix g = mmse_filters(h, f, rho);
    const ComplexMatrix hf = h * f.matrix();
    RealVector out(m);
    for (Index k = 0; k < m; ++k)
    {
        const cplx useful = g.col(k).dot(hf.col(k));
        double denom = g.col(k).squaredNorm();
        for (Index i = 0; i < m; ++i)
            if (i != k)
                denom += snr * std::norm(g.col(k).dot(hf.col(i)));
        out(k) = denom > 0.0 ? snr * std::norm(useful) / denom : 0.0;
    }
    return out;
}

/// -sum_k log2 (I + (rho/M) F^H H^H H F)^{-1}_{kk} in bits per channel use.
inline double mutual_info(const ComplexMatrix &h, const Precoder &f, double rho)
{
    const ComplexMatrix e = mmse_error_covariance(h, f, rho);
    double mi = 0.0;
    for (Index k = 0; k < e.rows(); ++k)
        mi -= std::log2(e(k, k).real());
    return std::max(0.0, mi);
}

inline LinkMetrics link_metrics(const ComplexMatrix &h, const Precoder &f, double rho)
{
    LinkMetrics out{sinr(h, f, rho), 0.0};
    for (Index k = 0; k < out.sinr.size(); ++k)
        out.mi += std::log2(1.0 + out.sinr(k));
    return out;
}

struct Waterfill
{
    RealVector power;
    double level = 0.0; // common value of p_k + 1/g_k over active modes
    Index active = 0;
};

/// Maximize sum log(1 + g_k p_k) subject to sum p_k <= budget, p_k >= 0.
/// Sorted active-set search for the water level; zero gains stay inactive.
inline Waterfill waterfill(const RealVector &gains, double budget)
{
    require(budget >= 0.0, "waterfill: budget must be non-negative");
    require(gains.allFinite() && (gains.size() == 0 || gains.minCoeff() >= 0.0), "waterfill: gains must be >= 0");
    const Index n = gains.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return gains(a) > gains(b); });

    Waterfill out{RealVector::Zero(n), 0.0, 0};
    Index usable = 0;
    while (usable < n && gains(order[usable]) > 0.0)
        ++usable;
    double inv_sum = 0.0;
    for (Index k = 0; k < usable; ++k)
        inv_sum += 1.0 / gains(order[k]);
    for (Index k = usable; k >= 1; --k)
    {
        const double level = (budget + inv_sum) / static_cast<double>(k);
        if (level > 1.0 / gains(order[k - 1]))
        {
            out.level = level;
            out.active = k;
            for (Index i = 0; i < k; ++i)
                out.power(order[i]) = level - 1.0 / gains(order[i]);
            break;
        }
        inv_sum -= 1.0 / gains(order[k - 1]);
    }
    return out;
}

/// Channel-diagonalizing precoder: the M dominant right singular vectors of H
/// with waterfilled powers over the gains (rho/M) Lambda_H(k).
inline Precoder perfect_precoder(const ComplexMatrix &h, Index m, double rho)
{
    require(rho > 0.0, "perfect_precoder: rho must be positive");
    require(m >= 1 && m <= std::min(h.rows(), h.cols()), "perfect_precoder: need 1 <= m <= min(N_r, N_t)");
    const auto s = numerics::svd(h);
    RealVector gains = (rho / static_cast<double>(m)) * s.singulars.head(m).array().square().matrix();
    auto wf = waterfill(gains, static_cast<double>(m));
    return Precoder(Subspace(s.right.leftCols(m)), std::move(wf.power));
}

/// Statistical power allocation over the M dominant transmit eigenvalues
/// (sorted non-increasing). Budget is M in every policy.
inline RealVector power_alloc(const RealVector &lambda_t, Index m, double rho, PowerPolicy policy)
{
    require(m >= 1 && m <= lambda_t.size(), "power_alloc: need 1 <= m <= N_t");
    require(rho > 0.0, "power_alloc: rho must be positive");
    const RealVector head = lambda_t.head(m);
    if (!(head.maxCoeff() > 0.0))
        throw degenerate_statistics("power_alloc: leading transmit eigenvalues are all zero");
    const double budget = static_cast<double>(m);
    switch (policy)
    {
    case PowerPolicy::uniform:
        return RealVector::Ones(m);
    case PowerPolicy::proportional:
        return budget * head / head.sum();
    case PowerPolicy::stat_waterfill:
        return waterfill((rho / budget) * head, budget).power;
    }
    return RealVector::Ones(m);
}

/// V_stat: the M dominant eigenvectors of Sigma_t, with statistical powers.
inline Precoder statistical_precoder(const channel::CanonicalModel &model, Index m, PowerPolicy policy, double rho)
{
    require(m >= 1 && m <= model.n_t(), "statistical_precoder: need 1 <= m <= N_t");
    const auto cov = channel::transmit_cov(model);
    return Precoder(Subspace(cov.eigenvectors.leftCols(m)), power_alloc(cov.eigenvalues, m, rho, policy));
}

struct BerResult
{
    std::vector<double> per_stream;
    double aggregate = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

/// Uncoded Gray-mapped QPSK over y = H F s + n: per-stream symbol energy
/// rho/M, CN(0, I) noise, MMSE filtering and per-stream hard decisions
/// (real part carries bit 0, imaginary part bit 1).
inline BerResult ber_qpsk(const ComplexMatrix &h, const Precoder &f, double rho, Rng &rng, Index n_symbols)
{
    require(n_symbols >= 1, "ber_qpsk: need at least one symbol");
    const Index m = f.streams();
    require(m <= 32, "ber_qpsk: at most 32 streams");
    const Index n_r = h.rows();
    const ComplexMatrix hf = h * f.matrix();
    const ComplexMatrix g = mmse_filters(h, f, rho);
    const double amp = std::sqrt(rho / static_cast<double>(m) / 2.0);

    std::vector<std::uint64_t> errors(static_cast<std::size_t>(m), 0);
    ComplexVector s(m);
    std::vector<int> bits(static_cast<std::size_t>(2 * m));
    ComplexVector y(n_r);
    for (Index t = 0; t < n_symbols; ++t)
    {
        std::uint64_t word = rng.next_u64();
        for (Index k = 0; k < m; ++k)
        {
            const int b0 = static_cast<int>(word & 1U);
            const int b1 = static_cast<int>((word >> 1) & 1U);
            word >>= 2;
            bits[2 * k] = b0;
            bits[2 * k + 1] = b1;
            s(k) = cplx(amp * (1 - 2 * b0), amp * (1 - 2 * b1));
        }
        y.noalias() = hf * s;
        for (Index i = 0; i < n_r; ++i)
            y(i) += rng.complex_gaussian(1.0);
        for (Index k = 0; k < m; ++k)
        {
            const cplx z = g.col(k).dot(y);
            errors[k] += static_cast<std::uint64_t>((z.real() < 0.0) != (bits[2 * k] == 1));
            errors[k] += static_cast<std::uint64_t>((z.imag() < 0.0) != (bits[2 * k + 1] == 1));
        }
    }

    BerResult out;
    const double per_stream_bits = 2.0 * static_cast<double>(n_symbols);
    for (Index k = 0; k < m; ++k)
    {
        out.per_stream.push_back(static_cast<double>(errors[k]) / per_stream_bits);
        out.bit_errors += errors[k];
    }
    out.bits = static_cast<std::uint64_t>(2 * m * n_symbols);
    out.aggregate = static_cast<double>(out.bit_errors) / static_cast<double>(out.bits);
    return out;
}

} // namespace corrprecode::linkperf

#endif
