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

using namespace corrprecode;
using namespace corrprecode::linkperf;
using namespace testutil;

namespace
{

ComplexMatrix diag2(double a, double b)
{
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = a;
    h(1, 1) = b;
    return h;
}

ComplexMatrix scalar(double x) { return ComplexMatrix::Constant(1, 1, x); }

Precoder unit_scalar() { return Precoder::uniform(Subspace(scalar(1.0))); }

/// Brute-force two-mode allocation: scan p1 over [0, budget].
std::pair<double, double> grid_waterfill(double g1, double g2, double budget)
{
    double best_p = 0.0, best_mi = -1.0;
    const int steps = 2000000;
    for (int k = 0; k <= steps; ++k)
    {
        const double p = budget * k / steps;
        const double mi = std::log2(1.0 + g1 * p) + std::log2(1.0 + g2 * (budget - p));
        if (mi > best_mi)
        {
            best_mi = mi;
            best_p = p;
        }
    }
    return {best_p, best_mi};
}

} // namespace

TEST(Mmse, ScalarFilter)
{
    const ComplexMatrix g = mmse_filters(scalar(1.0), unit_scalar(), 1.0);
    EXPECT_NEAR(std::abs(g(0, 0) - 0.5), 0.0, 1e-15);
}

TEST(Mmse, ZeroChannelGivesZeroFilters)
{
    const auto f = Precoder::uniform(Subspace::canonical(3, 2));
    EXPECT_EQ(mmse_filters(ComplexMatrix::Zero(2, 3), f, 5.0).norm(), 0.0);
}

TEST(Sinr, Examples)
{
    EXPECT_NEAR(sinr(scalar(1.0), unit_scalar(), 1.0)(0), 1.0, 1e-15);
    const auto s = sinr(diag2(2.0, 1.0), Precoder::uniform(Subspace::canonical(2, 2)), 2.0);
    EXPECT_NEAR(s(0), 4.0, 1e-12);
    EXPECT_NEAR(s(1), 1.0, 1e-12);
    ComplexMatrix h = ComplexMatrix::Zero(2, 4);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    const auto null_f = Precoder::uniform(Subspace(ComplexMatrix::Identity(4, 4).rightCols(2)));
    EXPECT_EQ(sinr(h, null_f, 10.0), RealVector::Zero(2));
}

TEST(Sinr, FilterFormMatchesClosedForm)
{
    Rng rng(61);
    for (int rep = 0; rep < 500; ++rep)
    {
        const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
        const Index m = 1 + rep % 4;
        RealVector p(m);
        for (Index k = 0; k < m; ++k)
            p(k) = rng.uniform();
        const Precoder f(numerics::haar_semiunitary(rng, 4, m), p * (static_cast<double>(m) / p.sum()));
        const double rho = std::pow(10.0, (rng.uniform() * 40.0 - 10.0) / 10.0);
        const RealVector a = sinr(h, f, rho);
        const RealVector b = sinr_from_filters(h, f, rho);
        for (Index k = 0; k < m; ++k)
            EXPECT_NEAR(a(k), b(k), 1e-9 * std::max(1.0, a(k)));
    }
}

TEST(MutualInfo, Examples)
{
    EXPECT_NEAR(mutual_info(scalar(1.0), unit_scalar(), 1.0), 1.0, 1e-15);
    EXPECT_EQ(mutual_info(ComplexMatrix::Zero(2, 2), Precoder::uniform(Subspace::canonical(2, 2)), 3.0), 0.0);
    EXPECT_NEAR(mutual_info(diag2(2.0, 1.0), Precoder::uniform(Subspace::canonical(2, 2)), 2.0), std::log2(10.0),
                1e-12);
    EXPECT_NEAR(std::log2(10.0), 3.32193, 1e-5);
}

TEST(MutualInfo, EqualsSumOfLogSinr)
{
    Rng rng(62);
    for (int rep = 0; rep < 200; ++rep)
    {
        const ComplexMatrix h = gaussian_matrix(rng, 3, 4);
        const auto f = Precoder::uniform(numerics::haar_semiunitary(rng, 4, 2));
        const auto lm = link_metrics(h, f, 7.0);
        EXPECT_NEAR(lm.mi, mutual_info(h, f, 7.0), 1e-9);
    }
}

TEST(MutualInfo, BoundedByLogDetAndInvariantUnderStreamPhases)
{
    Rng rng(63);
    for (int rep = 0; rep < 100; ++rep)
    {
        const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
        const auto v = numerics::haar_semiunitary(rng, 4, 3);
        const ComplexMatrix g = ComplexMatrix::Identity(3, 3) + (5.0 / 3.0) * v.matrix().adjoint() * h.adjoint() * h * v.matrix();
        const double logdet = std::log2(numerics::herm_eig(g).values.prod());
        const double mi = mutual_info(h, Precoder::uniform(v), 5.0);
        EXPECT_LE(mi, logdet + 1e-9);

        ComplexMatrix d = ComplexMatrix::Zero(3, 3);
        const int perm[3] = {2, 0, 1};
        for (int k = 0; k < 3; ++k)
            d(k, perm[k]) = std::polar(1.0, 6.283185307179586 * rng.uniform());
        const Subspace vq(v.matrix() * d);
        EXPECT_NEAR(mi, mutual_info(h, Precoder::uniform(vq), 5.0), 1e-10);
    }
    // right singular vectors decouple the streams, where the bound is met
    const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
    const auto s = numerics::svd(h);
    const Subspace v(s.right.leftCols(2));
    const ComplexMatrix g = ComplexMatrix::Identity(2, 2) + 2.5 * v.matrix().adjoint() * h.adjoint() * h * v.matrix();
    EXPECT_NEAR(mutual_info(h, Precoder::uniform(v), 5.0), std::log2(numerics::herm_eig(g).values.prod()), 1e-9);
}

TEST(Waterfill, TwoModeExampleAgainstGridSearch)
{
    const auto [p_ref, mi_ref] = grid_waterfill(4.0, 1.0, 2.0);
    EXPECT_NEAR(mi_ref, 3.4008794362821844, 1e-10);
    const auto f = perfect_precoder(diag2(2.0, 1.0), 2, 2.0);
    EXPECT_NEAR(f.power(0), 1.375, 1e-12);
    EXPECT_NEAR(f.power(1), 0.625, 1e-12);
    EXPECT_NEAR(f.power(0), p_ref, 1e-5);
    EXPECT_NEAR(mutual_info(diag2(2.0, 1.0), f, 2.0), mi_ref, 1e-9);
}

TEST(Waterfill, EqualGainsGiveUniformPower)
{
    const auto f = perfect_precoder(diag2(1.5, 1.5), 2, 3.0);
    EXPECT_NEAR(f.power(0), 1.0, 1e-12);
    EXPECT_NEAR(f.power(1), 1.0, 1e-12);
}

TEST(Waterfill, DeadModeGetsNothing)
{
    const auto f = perfect_precoder(diag2(1.0, 0.0), 2, 10.0);
    EXPECT_NEAR(f.power(0), 2.0, 1e-12);
    EXPECT_EQ(f.power(1), 0.0);
}

TEST(Waterfill, KktConditions)
{
    Rng rng(64);
    for (int rep = 0; rep < 300; ++rep)
    {
        const Index n = 1 + rep % 6;
        RealVector g(n);
        for (Index k = 0; k < n; ++k)
            g(k) = std::pow(10.0, 3.0 * rng.uniform() - 2.0);
        const double budget = 0.5 + 3.0 * rng.uniform();
        const auto wf = waterfill(g, budget);
        EXPECT_NEAR(wf.power.sum(), budget, 1e-9 * budget);
        for (Index k = 0; k < n; ++k)
        {
            if (wf.power(k) > 0.0)
                EXPECT_NEAR(wf.power(k) + 1.0 / g(k), wf.level, 1e-9);
            else
                EXPECT_GE(1.0 / g(k), wf.level - 1e-9);
        }
    }
}

TEST(Perfect, ClosedFormConsistency)
{
    Rng rng(65);
    for (int rep = 0; rep < 200; ++rep)
    {
        const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
        const Index m = 1 + rep % 4;
        const double rho = std::pow(10.0, (rng.uniform() * 30.0 - 5.0) / 10.0);
        const auto f = perfect_precoder(h, m, rho);
        const auto s = numerics::svd(h);
        double closed = 0.0;
        for (Index k = 0; k < m; ++k)
            closed += std::log2(1.0 + rho / m * s.singulars(k) * s.singulars(k) * f.power(k));
        EXPECT_NEAR(mutual_info(h, f, rho), closed, 1e-9);
        EXPECT_LE(f.power.sum(), m + 1e-9);
    }
}

TEST(Perfect, BeatsAnyUniformSemiunitary)
{
    Rng rng(66);
    for (int rep = 0; rep < 200; ++rep)
    {
        const ComplexMatrix h = gaussian_matrix(rng, 4, 4);
        const Index m = 1 + rep % 3;
        const double rho = std::pow(10.0, (rng.uniform() * 30.0 - 5.0) / 10.0);
        const double best = mutual_info(h, perfect_precoder(h, m, rho), rho);
        for (int k = 0; k < 5; ++k)
            EXPECT_GE(best + 1e-12, mutual_info(h, Precoder::uniform(numerics::haar_semiunitary(rng, 4, m)), rho));
    }
}

TEST(Statistical, DominantEigenvectors)
{
    const auto fig3 = harness::scenario_fig3(harness::Metric::mi).model;
    const auto f3 = statistical_precoder(fig3, 2, PowerPolicy::uniform, 1.0);
    EXPECT_LT(grassmann::dist(f3.v, pick(channel::dft_matrix(4), {0, 1})), 1e-12);
    const auto fig4 = channel::virtual_model(harness::fig4_variance());
    const auto f4 = statistical_precoder(fig4, 3, PowerPolicy::uniform, 1.0);
    EXPECT_LT(grassmann::dist(f4.v, pick(channel::dft_matrix(4), {2, 1, 0})), 1e-12);
    const auto iid = statistical_precoder(channel::iid_model(4, 4), 2, PowerPolicy::uniform, 1.0);
    EXPECT_LT(semiunitary_defect(iid.v.matrix()), 1e-15);
}

TEST(PowerAlloc, Policies)
{
    RealVector lt(4);
    lt << 14.98, 0.50, 0.26, 0.26;
    EXPECT_EQ(power_alloc(lt, 2, 1.0, PowerPolicy::uniform), RealVector::Ones(2));
    const auto prop = power_alloc(lt, 2, 1.0, PowerPolicy::proportional);
    EXPECT_NEAR(prop(0), 1.93540, 1e-5);
    EXPECT_NEAR(prop(1), 0.06460, 1e-5);
    EXPECT_NEAR(prop(0), 2.0 * 14.98 / 15.48, 1e-14);
    const auto low = power_alloc(lt, 2, 1e-3, PowerPolicy::stat_waterfill);
    EXPECT_NEAR(low(0), 2.0, 1e-12);
    EXPECT_EQ(low(1), 0.0);
    const auto high = power_alloc(lt, 2, 1e4, PowerPolicy::stat_waterfill);
    EXPECT_NEAR(high.sum(), 2.0, 1e-12);
    EXPECT_GT(high(1), 0.0);
}

TEST(PowerAlloc, DegenerateStatisticsRejected)
{
    RealVector lt = RealVector::Zero(3);
    EXPECT_THROW(power_alloc(lt, 2, 1.0, PowerPolicy::uniform), degenerate_statistics);
}

TEST(PowerAlloc, PolicyNamesRoundTrip)
{
    for (auto p : {PowerPolicy::uniform, PowerPolicy::stat_waterfill, PowerPolicy::proportional})
        EXPECT_EQ(power_policy_from_string(to_string(p)), p);
    EXPECT_THROW(power_policy_from_string("greedy"), invalid_input);
}

TEST(Precoder, PowerBudgetEnforced)
{
    RealVector p(2);
    p << 1.5, 0.6;
    EXPECT_THROW(Precoder(Subspace::canonical(3, 2), p), invalid_input);
    p << 1.0, -0.1;
    EXPECT_THROW(Precoder(Subspace::canonical(3, 2), p), invalid_input);
}

TEST(Ber, SisoMatchesQFunction)
{
    Rng rng(67);
    const double rho = 4.0;
    const Index symbols = 100000;
    const auto r = ber_qpsk(scalar(1.0), unit_scalar(), rho, rng, symbols);
    const double ref = q_function(std::sqrt(rho));
    EXPECT_NEAR(ref, 0.02275, 1e-5);
    const double se = std::sqrt(ref * (1.0 - ref) / (2.0 * symbols));
    EXPECT_NEAR(r.aggregate, ref, 3.0 * se);
    EXPECT_EQ(r.bits, static_cast<std::uint64_t>(2 * symbols));
}

TEST(Ber, HighSnrIsErrorFree)
{
    Rng rng(68);
    const ComplexMatrix h = random_unitary(rng, 2) * diag2(1.0, 0.8) * random_unitary(rng, 2);
    const auto f = Precoder::uniform(Subspace(numerics::svd(h).right));
    const auto r = ber_qpsk(h, f, 1e4, rng, 100000);
    EXPECT_EQ(r.bit_errors, 0u);
}

TEST(Ber, SeedReproducible)
{
    Rng rng(69);
    const ComplexMatrix h = gaussian_matrix(rng, 3, 4);
    const auto f = Precoder::uniform(numerics::haar_semiunitary(rng, 4, 2));
    Rng a(70), b(70);
    const auto ra = ber_qpsk(h, f, 10.0, a, 5000);
    const auto rb = ber_qpsk(h, f, 10.0, b, 5000);
    EXPECT_EQ(ra.bit_errors, rb.bit_errors);
    EXPECT_EQ(ra.per_stream, rb.per_stream);
    EXPECT_THROW(ber_qpsk(h, f, 10.0, a, 0), invalid_input);
}
