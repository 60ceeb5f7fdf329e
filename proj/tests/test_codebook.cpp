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

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace corrprecode;
using namespace corrprecode::codebook;
using namespace testutil;

namespace
{

channel::CanonicalModel fig3_model() { return harness::scenario_fig3(harness::Metric::mi).model; }

std::vector<GeneralizedSubspace> fig3_family(Index m = 2)
{
    const auto cov = channel::transmit_cov(fig3_model());
    return enumerate_generalized(cov.eigenvalues, cov.eigenvectors, m);
}

const grassmann::Codeset &root42()
{
    static const grassmann::Codeset cs = [] {
        Rng rng(81);
        return grassmann::make_root_codeset(rng, 4, 2, 4, 0.8, 5000);
    }();
    return cs;
}

} // namespace

TEST(Enumerate, SixSubspacesWithProducts)
{
    const auto gen = fig3_family();
    ASSERT_EQ(gen.size(), 6u);
    const double mu[6] = {7.49, 3.8948, 3.8948, 0.13, 0.13, 0.0676};
    for (int k = 0; k < 6; ++k)
        EXPECT_NEAR(gen[k].mu, mu[k], 1e-12);
    EXPECT_EQ(gen[0].indices, (std::vector<Index>{0, 1}));
    EXPECT_EQ(gen[1].indices, (std::vector<Index>{0, 2}));
    EXPECT_EQ(gen[2].indices, (std::vector<Index>{0, 3}));
    EXPECT_EQ(gen[3].indices, (std::vector<Index>{1, 2}));
    EXPECT_EQ(gen[4].indices, (std::vector<Index>{1, 3}));
    EXPECT_EQ(gen[5].indices, (std::vector<Index>{2, 3}));
    const auto cov = channel::transmit_cov(fig3_model());
    for (const auto &g : gen)
    {
        double prod = 1.0;
        for (auto i : g.indices)
            prod *= cov.eigenvalues(i);
        EXPECT_EQ(g.mu, prod);
        for (std::size_t k = 0; k < g.indices.size(); ++k)
            EXPECT_EQ(g.basis.matrix().col(static_cast<Index>(k)), cov.eigenvectors.col(g.indices[k]));
    }
}

TEST(Enumerate, FullDimensionIsOneEntry)
{
    const auto gen = fig3_family(4);
    ASSERT_EQ(gen.size(), 1u);
    EXPECT_NEAR(gen[0].mu, 14.98 * 0.50 * 0.26 * 0.26, 1e-12);
}

TEST(Enumerate, RejectsUnsortedEigenvalues)
{
    RealVector lt(3);
    lt << 1.0, 2.0, 0.5;
    EXPECT_THROW(enumerate_generalized(lt, ComplexMatrix::Identity(3, 3), 2), invalid_input);
}

TEST(Statistical, ThresholdSelection)
{
    const auto gen = fig3_family();
    const auto s01 = statistical_component(gen, 0.1);
    ASSERT_EQ(s01.size(), 3u);
    const ComplexMatrix u = channel::dft_matrix(4);
    EXPECT_LT(grassmann::dist(s01[0].basis, pick(u, {0, 1})), 1e-12);
    EXPECT_LT(grassmann::dist(s01[1].basis, pick(u, {0, 2})), 1e-12);
    EXPECT_LT(grassmann::dist(s01[2].basis, pick(u, {0, 3})), 1e-12);
    EXPECT_EQ(statistical_component(gen, 0.6).size(), 1u);
    EXPECT_EQ(statistical_component(gen, 1e-12).size(), 6u);
}

TEST(Statistical, ZeroLeadingProductRejected)
{
    const auto gen = enumerate_generalized(RealVector::Zero(3), ComplexMatrix::Identity(3, 3), 2);
    EXPECT_THROW(statistical_component(gen, 0.5), degenerate_statistics);
}

TEST(Allocate, SmallPlanSplitsTwoTwoOne)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    const auto plan = allocate_sizes(sel, 3, 3, 0.1);
    EXPECT_EQ(plan.n_stat, 3);
    EXPECT_EQ(plan.n_loc, (std::vector<Index>{2, 2, 1}));
    EXPECT_EQ(plan.n_rvq, 0);
}

TEST(Allocate, FourBitPlanHitsCaps)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    const auto plan = allocate_sizes(sel, 4, 4, 0.1, 5);
    EXPECT_EQ(plan.n_stat, 3);
    EXPECT_EQ(plan.n_loc, (std::vector<Index>{3, 3, 2}));
    EXPECT_EQ(plan.n_rvq, 5);
    EXPECT_NEAR(plan.alphas[1], 3.8948 / 7.49, 1e-14);
}

TEST(Allocate, OneAndTwoBitPlans)
{
    const auto sel = statistical_component(fig3_family(), 0.6);
    const auto b1 = allocate_sizes(sel, 1, 4, 0.6, 1);
    EXPECT_EQ(b1.n_stat, 1);
    EXPECT_EQ(b1.n_loc, (std::vector<Index>{0}));
    EXPECT_EQ(b1.n_rvq, 1);
    const auto b2 = allocate_sizes(sel, 2, 4, 0.6, 2);
    EXPECT_EQ(b2.n_loc, (std::vector<Index>{1}));
    EXPECT_EQ(b2.n_rvq, 2);
}

TEST(Allocate, SurplusBeyondCapsBecomesRvq)
{
    const auto sel = statistical_component(fig3_family(), 0.6);
    const auto plan = allocate_sizes(sel, 4, 4, 0.6);
    EXPECT_EQ(plan.n_loc, (std::vector<Index>{3}));
    EXPECT_EQ(plan.n_rvq, 12);
}

TEST(Allocate, InfeasibleRejected)
{
    const auto sel = statistical_component(fig3_family(), 1e-12);
    EXPECT_THROW(allocate_sizes(sel, 2, 4), infeasible_plan);
    const auto one = statistical_component(fig3_family(), 0.6);
    EXPECT_THROW(allocate_sizes(one, 1, 4, 0.6, 2), infeasible_plan);
}

TEST(Allocate, SumIdentityEverywhere)
{
    const auto gen = fig3_family();
    for (double beta : {1e-6, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9})
        for (int b = 0; b <= 7; ++b)
            for (Index root : {1, 2, 4, 8})
                for (Index reserve : {0, 1, 5})
                {
                    const auto sel = statistical_component(gen, beta);
                    const Index total = Index{1} << b;
                    if (total < static_cast<Index>(sel.size()) + reserve)
                    {
                        EXPECT_THROW(allocate_sizes(sel, b, root, beta, reserve), infeasible_plan);
                        continue;
                    }
                    const auto plan = allocate_sizes(sel, b, root, beta, reserve);
                    EXPECT_EQ(plan.total(), total);
                    EXPECT_EQ(plan.alphas.front(), 1.0);
                    for (std::size_t i = 0; i < plan.n_loc.size(); ++i)
                    {
                        EXPECT_LT(plan.n_loc[i], root);
                        if (i > 0)
                        {
                            EXPECT_LE(plan.alphas[i], plan.alphas[i - 1]);
                        }
                    }
                }
}

TEST(Local, EmptyWhenCountZero)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    EXPECT_TRUE(local_component(root42(), sel[0], 1.0, 0).empty());
}

TEST(Local, InsideContractedCap)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    for (std::size_t i = 0; i < sel.size(); ++i)
    {
        const double alpha = sel[i].mu / sel[0].mu;
        for (const auto &v : local_component(root42(), sel[i], alpha, 3))
        {
            EXPECT_LT(grassmann::dist(v, sel[i].basis), alpha * root42().theta);
            EXPECT_LT(semiunitary_defect(v.matrix()), 1e-9);
        }
    }
}

TEST(Local, UncontractedKeepsCenterDistances)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    const auto out = local_component(root42(), sel[1], 1.0, 3);
    std::vector<double> got, ref;
    for (const auto &v : out)
        got.push_back(grassmann::dist(v, sel[1].basis));
    for (Index k = 1; k < root42().size(); ++k)
        ref.push_back(grassmann::dist(root42().members[k], root42().center()));
    std::sort(got.begin(), got.end());
    std::sort(ref.begin(), ref.end());
    for (std::size_t k = 0; k < got.size(); ++k)
        EXPECT_NEAR(got[k], ref[k], 1e-8);
}

TEST(Local, SmallerCountIsPrefix)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    const auto three = local_component(root42(), sel[0], 1.0, 3);
    for (Index c = 0; c <= 3; ++c)
    {
        const auto part = local_component(root42(), sel[0], 1.0, c);
        for (Index k = 0; k < c; ++k)
            EXPECT_EQ(part[k].matrix(), three[k].matrix());
    }
}

TEST(Local, CountTooLargeRejected)
{
    const auto sel = statistical_component(fig3_family(), 0.1);
    EXPECT_THROW(local_component(root42(), sel[0], 1.0, 4), invalid_input);
    EXPECT_THROW(local_component(root42(), sel[0], 0.0, 1), invalid_input);
}

TEST(Rvq, CountsAndShape)
{
    Rng rng(82);
    EXPECT_TRUE(rvq_component(fig3_model(), 2, 0, rng).empty());
    for (const auto &v : rvq_component(fig3_model(), 2, 50, rng))
        EXPECT_LT(semiunitary_defect(v.matrix()), 1e-9);
}

TEST(Rvq, IidDrawsAreIsotropic)
{
    Rng rng(83);
    const auto words = rvq_component(channel::iid_model(4, 4), 2, 10000, rng);
    ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
    for (const auto &v : words)
        acc += v.projector();
    acc /= static_cast<double>(words.size());
    EXPECT_LT(rel_fro(acc, 0.5 * ComplexMatrix::Identity(4, 4)), 0.03);
}

TEST(Rvq, DuplicatesOfExistingAreRedrawn)
{
    // a rank-one transmit covariance makes every draw the same point
    RealMatrix var = RealMatrix::Zero(2, 3);
    var(0, 0) = 1.0;
    var(1, 0) = 1.0;
    const auto model = channel::make_model(ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(2, 2), var);
    Rng rng(84);
    const auto first = rvq_component(model, 1, 1, rng);
    ASSERT_EQ(first.size(), 1u);
    EXPECT_LT(grassmann::dist(first[0], Subspace::canonical(3, 1)), 1e-12);
    EXPECT_THROW(rvq_component(model, 1, 1, rng, first), degenerate_statistics);
    EXPECT_THROW(rvq_component(model, 1, 2, rng), degenerate_statistics);
}

TEST(Build, OneBitCodebook)
{
    Rng rng(85);
    BuildOptions opt{1, 0.6, 1, linkperf::PowerPolicy::uniform, 1.0};
    const auto cb = build_codebook(fig3_model(), 2, opt, root42(), rng);
    ASSERT_EQ(cb.size(), 2);
    EXPECT_EQ(cb.tags[0].kind, Provenance::statistical);
    EXPECT_EQ(cb.tags[1].kind, Provenance::rvq);
    EXPECT_LT(grassmann::dist(cb.codewords[0], pick(channel::dft_matrix(4), {0, 1})), 1e-12);
}

TEST(Build, FourBitCodebookStructure)
{
    Rng rng(86);
    BuildOptions opt{4, 0.1, 5, linkperf::PowerPolicy::proportional, 1.0};
    const auto cb = build_codebook(fig3_model(), 2, opt, root42(), rng);
    ASSERT_EQ(cb.size(), 16);
    Index n_stat = 0, n_rvq = 0;
    std::vector<Index> n_loc(3, 0);
    for (const auto &t : cb.tags)
    {
        if (t.kind == Provenance::statistical)
            ++n_stat;
        else if (t.kind == Provenance::rvq)
            ++n_rvq;
        else
            ++n_loc[t.member];
    }
    EXPECT_EQ(n_stat, cb.plan.n_stat);
    EXPECT_EQ(n_loc, cb.plan.n_loc);
    EXPECT_EQ(n_rvq, cb.plan.n_rvq);
    for (Index i = 0; i < cb.size(); ++i)
        for (Index j = i + 1; j < cb.size(); ++j)
            EXPECT_GT(grassmann::dist(cb.codewords[i], cb.codewords[j]), 1e-6);
    EXPECT_NEAR(cb.power.sum(), 2.0, 1e-12);
    // statistical codeword i is the cap center of its local codewords
    for (Index i = 0; i < cb.size(); ++i)
        if (cb.tags[i].kind == Provenance::local)
        {
            const Index member = cb.tags[i].member;
            EXPECT_LT(grassmann::dist(cb.codewords[i], cb.codewords[member]), cb.plan.alphas[member] * root42().theta);
        }
}

TEST(Build, ShapeMismatchRejected)
{
    Rng rng(87);
    BuildOptions opt{2, 0.6, 0, linkperf::PowerPolicy::uniform, 1.0};
    EXPECT_THROW(build_codebook(fig3_model(), 3, opt, root42(), rng), invalid_input);
}

TEST(Tag, StringsRoundTrip)
{
    for (const auto &s : {"statistical", "local:0", "local:12", "rvq"})
        EXPECT_EQ(Tag::parse(s).str(), s);
    EXPECT_THROW(Tag::parse("local:"), invalid_input);
    EXPECT_THROW(Tag::parse("global"), invalid_input);
}

namespace
{

Codebook book_of(std::vector<Subspace> words)
{
    Codebook cb;
    cb.codewords = std::move(words);
    cb.tags.assign(cb.codewords.size(), Tag{});
    cb.power = RealVector::Ones(cb.codewords.front().dim());
    return cb;
}

} // namespace

TEST(SelectMi, SingleCodeword)
{
    Rng rng(88);
    const auto cb = book_of({Subspace::canonical(4, 2)});
    EXPECT_EQ(select_mi(cb, gaussian_matrix(rng, 4, 4), 3.0), 0);
}

TEST(SelectMi, ExhaustivelyOptimal)
{
    Rng rng(89);
    Rng cb_rng(90);
    BuildOptions opt{4, 0.1, 5, linkperf::PowerPolicy::uniform, 1.0};
    const auto cb = build_codebook(fig3_model(), 2, opt, root42(), cb_rng);
    for (int rep = 0; rep < 300; ++rep)
    {
        const ComplexMatrix h = channel::sample(fig3_model(), rng);
        const double rho = std::pow(10.0, (rng.uniform() * 30.0 - 5.0) / 10.0);
        const Index pick_idx = select_mi(cb, h, rho);
        const double best = linkperf::mutual_info(h, linkperf::Precoder(cb.codewords[pick_idx], cb.power), rho);
        for (Index i = 0; i < cb.size(); ++i)
        {
            const double mi = linkperf::mutual_info(h, linkperf::Precoder(cb.codewords[i], cb.power), rho);
            EXPECT_GE(best, mi);
            if (i < pick_idx)
            {
                EXPECT_LT(mi, best);
            }
        }
    }
}

TEST(SelectMi, PrefersDominantSubspace)
{
    Rng rng(91);
    const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
    const Subspace vh(numerics::svd(h).right.leftCols(2));
    std::vector<Subspace> words;
    for (int k = 0; k < 7; ++k)
        words.push_back(numerics::haar_semiunitary(rng, 4, 2));
    words.insert(words.begin() + 3, vh);
    const auto cb = book_of(words);
    const Index chosen = select_mi(cb, h, 10.0);
    const double mi = linkperf::mutual_info(h, linkperf::Precoder::uniform(cb.codewords[chosen]), 10.0);
    for (const auto &w : words)
        EXPECT_GE(mi, linkperf::mutual_info(h, linkperf::Precoder::uniform(w), 10.0));
    Rng again(91);
    const ComplexMatrix h2 = gaussian_matrix(again, 4, 4);
    EXPECT_EQ(select_mi(cb, h2, 10.0), chosen);
}

TEST(SelectDistance, Examples)
{
    Rng rng(92);
    const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
    const Subspace vh(numerics::svd(h).right.leftCols(2));
    const Subspace orth(numerics::null_basis(vh));
    EXPECT_EQ(select_distance(book_of({orth, vh}), h), 1);
    std::vector<Subspace> words;
    for (int k = 0; k < 5; ++k)
        words.push_back(numerics::haar_semiunitary(rng, 4, 2));
    words.push_back(vh);
    EXPECT_EQ(select_distance(book_of(words), h), 5);
    // duplicates resolve to the lowest index
    EXPECT_EQ(select_distance(book_of({vh, vh}), h), 0);
}

TEST(SelectDistance, AgreesWithMiMoreThanChance)
{
    Rng rng(93);
    Rng cb_rng(94);
    BuildOptions opt{4, 0.1, 5, linkperf::PowerPolicy::uniform, 1.0};
    const auto cb = build_codebook(fig3_model(), 2, opt, root42(), cb_rng);
    int agree = 0;
    const int draws = 500;
    for (int k = 0; k < draws; ++k)
    {
        const ComplexMatrix h = channel::sample(fig3_model(), rng);
        agree += select_distance(cb, h) == select_mi(cb, h, 10.0);
    }
    const double rate = static_cast<double>(agree) / draws;
    RecordProperty("agreement_rate", std::to_string(rate));
    std::printf("selector agreement rate: %.3f\n", rate);
    EXPECT_GT(rate, 1.0 / static_cast<double>(cb.size()));
}

TEST(PaGain, Examples)
{
    const ComplexMatrix u = channel::dft_matrix(4);
    EXPECT_NEAR(pa_gain_ratio(pick(u, {1})), 1.0, 1e-12);
    EXPECT_NEAR(pa_gain_ratio(pick(u, {1, 3})), 1.0, 1e-12);
    EXPECT_EQ(pa_gain_ratio(Subspace::canonical(4, 2)), std::numeric_limits<double>::infinity());
    ComplexMatrix v(2, 1);
    v << std::sqrt(0.8), std::sqrt(0.2);
    EXPECT_NEAR(pa_gain_ratio(Subspace(v)), 2.0, 1e-14);
}

TEST(RestrictRank, ColumnSubset)
{
    Rng cb_rng(95);
    const auto model = channel::virtual_model(harness::fig4_variance());
    Rng root_rng(96);
    const auto root = grassmann::make_root_codeset(root_rng, 4, 3, 4, 0.9, 2000);
    BuildOptions opt{4, 0.3, 5, linkperf::PowerPolicy::proportional, 1.0};
    const auto cb = build_codebook(model, 3, opt, root, cb_rng);
    const std::vector<Index> keep{1, 2};
    const auto small = restrict_rank(cb, 2, keep);
    ASSERT_EQ(small.size(), cb.size());
    EXPECT_EQ(small.streams(), 2);
    EXPECT_LE(small.power.sum(), 2.0 + 1e-12);
    for (Index i = 0; i < cb.size(); ++i)
    {
        EXPECT_LT(semiunitary_defect(small.codewords[i].matrix()), 1e-9);
        const ComplexMatrix p = small.codewords[i].matrix().adjoint() * cb.codewords[i].matrix();
        EXPECT_NEAR(numerics::herm_eig(p * p.adjoint()).values(1), 1.0, 1e-12);
    }
}

TEST(RestrictRank, BadColumnsRejected)
{
    auto cb = book_of({Subspace::canonical(4, 3)});
    const std::vector<Index> dup{1, 1}, out_of_range{0, 3}, wrong_count{0};
    EXPECT_THROW(restrict_rank(cb, 2, dup), invalid_input);
    EXPECT_THROW(restrict_rank(cb, 2, out_of_range), invalid_input);
    EXPECT_THROW(restrict_rank(cb, 2, wrong_count), invalid_input);
    const std::vector<Index> all{0, 1, 2};
    EXPECT_THROW(restrict_rank(cb, 3, all), invalid_input);
}

TEST(Invariants, FirstStatisticalCodewordIsDominant)
{
    Rng rng(97);
    for (int rep = 0; rep < 10; ++rep)
    {
        RealMatrix var(4, 4);
        for (Index i = 0; i < 16; ++i)
            var(i) = rng.uniform();
        const auto model = channel::make_model(random_unitary(rng, 4), random_unitary(rng, 4), var);
        const auto cov = channel::transmit_cov(model);
        const auto sel = statistical_component(enumerate_generalized(cov.eigenvalues, cov.eigenvectors, 2), 0.5);
        const auto stat = linkperf::statistical_precoder(model, 2, linkperf::PowerPolicy::uniform, 1.0);
        EXPECT_LT(grassmann::dist(sel[0].basis, stat.v), 1e-12);
    }
}
