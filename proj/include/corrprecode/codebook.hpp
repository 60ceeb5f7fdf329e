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

#ifndef CORRPRECODE_CODEBOOK_HPP
#define CORRPRECODE_CODEBOOK_HPP

// Three-component limited-feedback codebook: statistical codewords (dominant
// eigen-subspaces of Sigma_t), local codewords (a root codeset rotated onto
// each statistical codeword and contracted by its generalized-eigenvalue
// ratio) and an RVQ fill drawn from the channel ensemble. Plus codeword
// selection and the structural diagnostics (PA gain ratio, rank restriction).

#include "channel.hpp"
#include "grassmann.hpp"
#include "linkperf.hpp"
#include "matrix.hpp"
#include "numerics.hpp"
#include "subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace corrprecode::codebook
{

/// Span of M eigenvectors of Sigma_t; mu is the product of their eigenvalues.
struct GeneralizedSubspace
{
    std::vector<Index> indices; // into the sorted eigenvalue list
    double mu;
    Subspace basis;
};

struct CodebookPlan
{
    double beta = 0.0;
    int b = 0;
    Index n_stat = 0;
    std::vector<Index> n_loc; // one per statistical member
    Index n_rvq = 0;
    std::vector<double> alphas; // mu_i / mu_1

    Index total() const { return n_stat + std::accumulate(n_loc.begin(), n_loc.end(), Index{0}) + n_rvq; }
};

enum class Provenance
{
    statistical,
    local,
    rvq,
};

struct Tag
{
    Provenance kind = Provenance::rvq;
    Index member = 0; // statistical member the codeword belongs to (statistical / local)

    /// "statistical", "local:<member>" or "rvq".
    std::string str() const
    {
        switch (kind)
        {
        case Provenance::statistical:
            return "statistical";
        case Provenance::local:
            return "local:" + std::to_string(member);
        case Provenance::rvq:
            return "rvq";
        }
        return "rvq";
    }

    static Tag parse(const std::string &s)
    {
        if (s == "statistical")
            return {Provenance::statistical, 0};
        if (s == "rvq")
            return {Provenance::rvq, 0};
        if (s.rfind("local:", 0) == 0)
        {
            const std::string idx = s.substr(6);
            require(!idx.empty() && idx.find_first_not_of("0123456789") == std::string::npos, "bad tag '" + s + "'");
            return {Provenance::local, static_cast<Index>(std::stoll(idx))};
        }
        throw invalid_input("bad tag '" + s + "'");
    }
};

struct Codebook
{
    int b = 0;
    std::vector<Subspace> codewords;
    std::vector<Tag> tags;
    RealVector power; // fixed Lambda_stat, M entries
    CodebookPlan plan;

    Index size() const { return static_cast<Index>(codewords.size()); }
    Index streams() const { return codewords.front().dim(); }
};

inline void validate(const Codebook &cb)
{
    require(!cb.codewords.empty(), "codebook: no codewords");
    require(cb.tags.size() == cb.codewords.size(), "codebook: one tag per codeword");
    const Index m = cb.streams();
    for (const auto &cw : cb.codewords)
        require(cw.dim() == m && cw.ambient_dim() == cb.codewords.front().ambient_dim(),
                "codebook: codewords have different shapes");
    require(cb.power.size() == m, "codebook: one power entry per stream");
    require(cb.power.allFinite() && cb.power.minCoeff() >= 0.0, "codebook: negative power");
    require(cb.power.sum() <= static_cast<double>(m) + 1e-9, "codebook: total power exceeds M");
}

/// All C(N_t, M) eigenvector subsets, sorted by mu non-increasing; equal mu
/// keeps lexicographic index order.
inline std::vector<GeneralizedSubspace> enumerate_generalized(const RealVector &lambda_t, const ComplexMatrix &u_t,
                                                              Index m)
{
    const Index n = lambda_t.size();
    require(u_t.rows() == n && u_t.cols() == n, "enumerate_generalized: u_t must be N_t x N_t");
    require(m >= 1 && m <= n, "enumerate_generalized: need 1 <= m <= N_t");
    for (Index i = 1; i < n; ++i)
        require(lambda_t(i) <= lambda_t(i - 1), "enumerate_generalized: eigenvalues must be sorted non-increasing");

    std::vector<GeneralizedSubspace> out;
    std::vector<Index> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), Index{0});
    while (true)
    {
        double mu = 1.0;
        ComplexMatrix basis(n, m);
        for (Index k = 0; k < m; ++k)
        {
            mu *= lambda_t(idx[k]);
            basis.col(k) = u_t.col(idx[k]);
        }
        out.push_back({idx, mu, Subspace(std::move(basis))});

        // next combination in lexicographic order
        Index pos = m - 1;
        while (pos >= 0 && idx[pos] == n - m + pos)
            --pos;
        if (pos < 0)
            break;
        ++idx[pos];
        for (Index k = pos + 1; k < m; ++k)
            idx[k] = idx[k - 1] + 1;
    }
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.mu > b.mu; });
    return out;
}

/// { i : mu_i / mu_1 > beta }, in sorted order. Always keeps the first entry.
inline std::vector<GeneralizedSubspace> statistical_component(std::span<const GeneralizedSubspace> gen, double beta)
{
    require(!gen.empty(), "statistical_component: empty family");
    const double mu1 = gen.front().mu;
    if (!(mu1 > 0.0))
        throw degenerate_statistics("statistical_component: largest generalized eigenvalue is zero");
    std::vector<GeneralizedSubspace> out{gen.front()};
    for (std::size_t i = 1; i < gen.size(); ++i)
        if (gen[i].mu / mu1 > beta)
            out.push_back(gen[i]);
    return out;
}

inline void validate_plan(const CodebookPlan &plan, Index root_size)
{
    require(plan.b >= 0 && plan.b < 31, "plan: bit count out of range");
    require(plan.n_stat >= 1, "plan: need at least one statistical codeword");
    require(static_cast<Index>(plan.n_loc.size()) == plan.n_stat, "plan: one local count per statistical member");
    require(static_cast<Index>(plan.alphas.size()) == plan.n_stat, "plan: one alpha per statistical member");
    require(plan.n_rvq >= 0, "plan: negative RVQ count");
    require(plan.total() == (Index{1} << plan.b), "plan: component sizes must sum to 2^b");
    for (auto n : plan.n_loc)
        require(n >= 0 && n < root_size, "plan: local count must be below the root codeset size");
    require(std::abs(plan.alphas.front() - 1.0) <= 1e-12, "plan: first alpha must be 1");
    for (std::size_t i = 0; i < plan.alphas.size(); ++i)
    {
        require(plan.alphas[i] > 0.0 && plan.alphas[i] <= 1.0, "plan: alphas must lie in (0, 1]");
        if (i > 0)
            require(plan.alphas[i] <= plan.alphas[i - 1], "plan: alphas must be non-increasing");
    }
}

/// Split 2^b among the components. After the n_stat statistical codewords and
/// `rvq_reserve` RVQ codewords, the rest is shared among the local components
/// in proportion to mu_i by largest remainder, each capped at root_size - 1.
/// Units blocked by a cap pass to the next uncapped member in remainder order;
/// anything left once every member is capped becomes extra RVQ.
inline CodebookPlan allocate_sizes(std::span<const GeneralizedSubspace> selected, int b, Index root_size,
                                   double beta = 0.0, Index rvq_reserve = 0)
{
    require(!selected.empty(), "allocate_sizes: empty statistical component");
    require(b >= 0 && b < 31, "allocate_sizes: bit count out of range");
    require(root_size >= 1, "allocate_sizes: root codeset size must be positive");
    require(rvq_reserve >= 0, "allocate_sizes: negative RVQ reserve");
    const Index total = Index{1} << b;
    const Index n_stat = static_cast<Index>(selected.size());
    if (total < n_stat)
        throw infeasible_plan("allocate_sizes: 2^b = " + std::to_string(total) + " cannot hold " +
                              std::to_string(n_stat) + " statistical codewords");
    if (total - n_stat < rvq_reserve)
        throw infeasible_plan("allocate_sizes: RVQ reserve exceeds the remaining budget");

    const double mu1 = selected.front().mu;
    if (!(mu1 > 0.0))
        throw degenerate_statistics("allocate_sizes: largest generalized eigenvalue is zero");

    CodebookPlan plan;
    plan.beta = beta;
    plan.b = b;
    plan.n_stat = n_stat;
    for (const auto &g : selected)
        plan.alphas.push_back(g.mu / mu1);

    const Index budget = total - n_stat - rvq_reserve;
    const Index cap = root_size - 1;
    const double mu_sum = std::accumulate(selected.begin(), selected.end(), 0.0,
                                          [](double acc, const auto &g) { return acc + g.mu; });
    std::vector<double> remainder(selected.size());
    plan.n_loc.assign(selected.size(), 0);
    Index assigned = 0;
    for (std::size_t i = 0; i < selected.size(); ++i)
    {
        const double quota = static_cast<double>(budget) * selected[i].mu / mu_sum;
        const double whole = std::floor(quota);
        remainder[i] = quota - whole;
        plan.n_loc[i] = std::min(static_cast<Index>(whole), cap);
        assigned += plan.n_loc[i];
    }

    std::vector<std::size_t> priority(selected.size());
    std::iota(priority.begin(), priority.end(), std::size_t{0});
    std::stable_sort(priority.begin(), priority.end(),
                     [&](std::size_t a, std::size_t c) { return remainder[a] > remainder[c]; });
    Index left = budget - assigned;
    bool progress = true;
    while (left > 0 && progress)
    {
        progress = false;
        for (auto i : priority)
        {
            if (left == 0)
                break;
            if (plan.n_loc[i] < cap)
            {
                ++plan.n_loc[i];
                --left;
                progress = true;
            }
        }
    }
    plan.n_rvq = rvq_reserve + left;
    validate_plan(plan, root_size);
    return plan;
}

/// Rotate the root codeset onto target.basis, contract it by alpha toward
/// that center and keep `count` of the contracted non-center members, chosen
/// greedily to maximize the minimum distance to the center and to the members
/// already kept (ties to the lowest root index). The greedy order makes the
/// result for count k a prefix of the result for count k + 1.
inline std::vector<Subspace> local_component(const grassmann::Codeset &root, const GeneralizedSubspace &target,
                                             double alpha, Index count)
{
    require(count >= 0 && count <= root.size() - 1, "local_component: count must not exceed root size - 1");
    require(alpha > 0.0 && alpha <= 1.0, "local_component: alpha must lie in (0, 1]");
    if (count == 0)
        return {};
    const auto rotated = grassmann::rotate(root.members, root.center(), target.basis);
    std::vector<Subspace> candidates;
    for (std::size_t i = 1; i < rotated.size(); ++i)
        candidates.push_back(grassmann::scale(rotated[i], target.basis, alpha));

    // nearest[i] = min distance from candidate i to {center} U kept
    std::vector<double> nearest(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        nearest[i] = grassmann::dist(candidates[i], target.basis);
    std::vector<bool> taken(candidates.size(), false);
    std::vector<Subspace> kept;
    for (Index k = 0; k < count; ++k)
    {
        std::size_t pick = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!taken[i] && (pick == candidates.size() || nearest[i] > nearest[pick]))
                pick = i;
        taken[pick] = true;
        kept.push_back(candidates[pick]);
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!taken[i])
                nearest[i] = std::min(nearest[i], grassmann::dist(candidates[i], candidates[pick]));
    }
    return kept;
}

/// Minimum distance between a codeword and a set (1 for an empty set).
inline double distance_to_set(const Subspace &v, std::span<const Subspace> set)
{
    double best = 1.0;
    for (const auto &s : set)
        best = std::min(best, grassmann::dist(v, s));
    return best;
}

/// Dominant right singular subspace of H (the "V~_H" of a realization).
inline Subspace dominant_right_subspace(const ComplexMatrix &h, Index m)
{
    require(m >= 1 && m <= std::min(h.rows(), h.cols()), "dominant_right_subspace: need 1 <= m <= min(N_r, N_t)");
    return Subspace(numerics::svd(h).right.leftCols(m));
}

/// RVQ fill: n channel draws reduced to their M dominant right singular
/// vectors. A draw within 1e-6 of an existing or earlier codeword is redrawn;
/// 1000 redraws in a row raise degenerate_statistics.
inline std::vector<Subspace> rvq_component(const channel::CanonicalModel &model, Index m, Index n, Rng &rng,
                                           std::span<const Subspace> existing = {})
{
    require(n >= 0, "rvq_component: negative count");
    require(m >= 1 && m <= std::min(model.n_r(), model.n_t()), "rvq_component: need 1 <= m <= min(N_r, N_t)");
    std::vector<Subspace> out;
    out.reserve(static_cast<std::size_t>(n));
    int rejected = 0;
    while (static_cast<Index>(out.size()) < n)
    {
        Subspace v = dominant_right_subspace(channel::sample(model, rng), m);
        if (distance_to_set(v, existing) > 1e-6 && distance_to_set(v, out) > 1e-6)
        {
            out.push_back(std::move(v));
            rejected = 0;
        }
        else if (++rejected == 1000)
            throw degenerate_statistics("rvq_component: the channel ensemble keeps repeating existing codewords");
    }
    return out;
}

struct BuildOptions
{
    int b = 1;
    double beta = 0.5;
    Index rvq_reserve = 0;
    linkperf::PowerPolicy policy = linkperf::PowerPolicy::uniform;
    double rho = 1.0;
};

/// Assemble statistical + local + RVQ codewords (in that order) for the
/// statistics of `model`, with the fixed statistical power allocation.
inline Codebook build_codebook(const channel::CanonicalModel &model, Index m, const BuildOptions &opt,
                               const grassmann::Codeset &root, Rng &rng)
{
    require(root.size() >= 1, "build_codebook: empty root codeset");
    require(root.center().ambient_dim() == model.n_t() && root.center().dim() == m,
            "build_codebook: root codeset lives on a different manifold");
    const auto cov = channel::transmit_cov(model);
    const auto gen = enumerate_generalized(cov.eigenvalues, cov.eigenvectors, m);
    const auto stat = statistical_component(gen, opt.beta);

    Codebook cb;
    cb.b = opt.b;
    cb.plan = allocate_sizes(stat, opt.b, root.size(), opt.beta, opt.rvq_reserve);
    for (std::size_t i = 0; i < stat.size(); ++i)
    {
        cb.codewords.push_back(stat[i].basis);
        cb.tags.push_back({Provenance::statistical, static_cast<Index>(i)});
    }
    for (std::size_t i = 0; i < stat.size(); ++i)
    {
        for (auto &cw : local_component(root, stat[i], cb.plan.alphas[i], cb.plan.n_loc[i]))
        {
            cb.codewords.push_back(std::move(cw));
            cb.tags.push_back({Provenance::local, static_cast<Index>(i)});
        }
    }
    for (auto &cw : rvq_component(model, m, cb.plan.n_rvq, rng, cb.codewords))
    {
        cb.codewords.push_back(std::move(cw));
        cb.tags.push_back({Provenance::rvq, 0});
    }
    cb.power = linkperf::power_alloc(cov.eigenvalues, m, opt.rho, opt.policy);
    validate(cb);
    return cb;
}

/// Index maximizing the MMSE mutual information with the fixed power
/// allocation (ties to the lowest index).
inline Index select_mi(const Codebook &cb, const ComplexMatrix &h, double rho)
{
    require(rho > 0.0, "select_mi: rho must be positive");
    require(h.cols() == cb.codewords.front().ambient_dim(), "select_mi: channel does not match the codebook");
    Index best = 0;
    double best_mi = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < cb.size(); ++i)
    {
        const double mi = linkperf::mutual_info(h, linkperf::Precoder(cb.codewords[i], cb.power), rho);
        if (mi > best_mi)
        {
            best_mi = mi;
            best = i;
        }
    }
    return best;
}

/// Index of the codeword closest to the dominant right singular subspace of h.
inline Index select_distance(const Codebook &cb, const ComplexMatrix &h)
{
    require(h.cols() == cb.codewords.front().ambient_dim(), "select_distance: channel does not match the codebook");
    const Subspace target = dominant_right_subspace(h, cb.streams());
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < cb.size(); ++i)
    {
        const double d = grassmann::dist(cb.codewords[i], target);
        if (d < best_d)
        {
            best_d = d;
            best = i;
        }
    }
    return best;
}

/// max |V(m, n)| / min |V(m, n)|; +infinity with any zero entry.
inline double pa_gain_ratio(const Subspace &v)
{
    const double hi = v.matrix().cwiseAbs().maxCoeff();
    const double lo = v.matrix().cwiseAbs().minCoeff();
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

/// Worst codeword of the book.
inline double pa_gain_ratio(const Codebook &cb)
{
    double worst = 0.0;
    for (const auto &cw : cb.codewords)
        worst = std::max(worst, pa_gain_ratio(cw));
    return worst;
}

/// Lower-rank codebook from a column subset of every codeword. The matching
/// power entries are kept and scaled down if they exceed the smaller budget.
inline Codebook restrict_rank(const Codebook &cb, Index m_small, std::span<const Index> columns)
{
    const Index m = cb.streams();
    require(m_small >= 1 && m_small < m, "restrict_rank: need 1 <= m_small < M");
    require(static_cast<Index>(columns.size()) == m_small, "restrict_rank: need exactly m_small columns");
    std::set<Index> distinct(columns.begin(), columns.end());
    require(static_cast<Index>(distinct.size()) == m_small, "restrict_rank: columns must be distinct");
    for (auto c : columns)
        require(c >= 0 && c < m, "restrict_rank: column index out of range");

    Codebook out;
    out.b = cb.b;
    out.tags = cb.tags;
    out.plan = cb.plan;
    for (const auto &cw : cb.codewords)
        out.codewords.push_back(cw.columns(columns));
    out.power.resize(m_small);
    for (Index k = 0; k < m_small; ++k)
        out.power(k) = cb.power(columns[k]);
    const double sum = out.power.sum();
    if (sum > static_cast<double>(m_small))
        out.power *= static_cast<double>(m_small) / sum;
    validate(out);
    return out;
}

} // namespace corrprecode::codebook

#endif
