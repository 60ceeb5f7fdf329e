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

#ifndef CORRPRECODE_HARNESS_HPP
#define CORRPRECODE_HARNESS_HPP

// Monte Carlo runner: average mutual information or QPSK BER over an SNR grid
// for perfect-CSI, statistical, quantized and i.i.d.-codebook precoding.
// Every (snr, trial) pair has its own derived seed and all schemes see the
// same channel draw, so results do not depend on the worker count.

#include "channel.hpp"
#include "codebook.hpp"
#include "grassmann.hpp"
#include "linkperf.hpp"
#include "matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace corrprecode::harness
{

enum class Metric
{
    mi,
    ber,
};

enum class Selector
{
    mi,
    distance,
};

enum class SchemeKind
{
    perfect,
    statistical,
    quantized,
    iid_codebook,
};

inline std::string to_string(Metric m) { return m == Metric::mi ? "mi" : "ber"; }
inline std::string to_string(Selector s) { return s == Selector::mi ? "mi" : "distance"; }

inline std::string to_string(SchemeKind k)
{
    switch (k)
    {
    case SchemeKind::perfect:
        return "perfect";
    case SchemeKind::statistical:
        return "statistical";
    case SchemeKind::quantized:
        return "quantized";
    case SchemeKind::iid_codebook:
        return "iid_codebook";
    }
    return "perfect";
}

inline Metric metric_from_string(const std::string &s)
{
    if (s == "mi")
        return Metric::mi;
    if (s == "ber")
        return Metric::ber;
    throw invalid_input("unknown metric '" + s + "'");
}

inline Selector selector_from_string(const std::string &s)
{
    if (s == "mi")
        return Selector::mi;
    if (s == "distance")
        return Selector::distance;
    throw invalid_input("unknown selector '" + s + "'");
}

inline SchemeKind scheme_kind_from_string(const std::string &s)
{
    for (auto k : {SchemeKind::perfect, SchemeKind::statistical, SchemeKind::quantized, SchemeKind::iid_codebook})
        if (to_string(k) == s)
            return k;
    throw invalid_input("unknown scheme '" + s + "'");
}

struct RootParams
{
    Index n = 4;
    double theta = 0.8;
    Index trials = 20000;

    auto key() const { return std::make_tuple(n, theta, trials); }
};

struct SchemeSpec
{
    SchemeKind kind = SchemeKind::perfect;
    std::string label; // empty: derived from kind and b
    linkperf::PowerPolicy policy = linkperf::PowerPolicy::uniform;
    int b = 0;
    double beta = 0.5;
    Index rvq_reserve = 0;
    RootParams root;
    Selector selector = Selector::mi;

    std::string name() const
    {
        if (!label.empty())
            return label;
        switch (kind)
        {
        case SchemeKind::quantized:
            return "quantized_B" + std::to_string(b);
        case SchemeKind::iid_codebook:
            return "iid_codebook_B" + std::to_string(b);
        default:
            return to_string(kind);
        }
    }
};

struct Scenario
{
    std::string name = "custom";
    channel::CanonicalModel model;
    Index m = 1;
    std::vector<double> snr_db;
    std::vector<SchemeSpec> schemes;
    Index trials = 1;
    std::uint64_t seed = 1;
    Metric metric = Metric::mi;
    Index n_symbols = 100; // per trial, ber only
};

inline void validate(const Scenario &sc)
{
    channel::validate(sc.model);
    require(sc.trials >= 1, "scenario: trials must be positive");
    require(!sc.snr_db.empty(), "scenario: empty SNR grid");
    require(!sc.schemes.empty(), "scenario: no schemes");
    require(sc.m >= 1 && sc.m <= std::min(sc.model.n_r(), sc.model.n_t()), "scenario: need 1 <= m <= min(N_r, N_t)");
    require(sc.metric == Metric::mi || sc.n_symbols >= 1, "scenario: ber needs n_symbols >= 1");
    for (double s : sc.snr_db)
        require(std::isfinite(s), "scenario: non-finite SNR");
    std::vector<std::string> names;
    for (const auto &s : sc.schemes)
    {
        if (s.kind == SchemeKind::quantized || s.kind == SchemeKind::iid_codebook)
            require(s.b >= 0 && s.b < 31, "scenario: bit count out of range");
        names.push_back(s.name());
    }
    std::sort(names.begin(), names.end());
    require(std::adjacent_find(names.begin(), names.end()) == names.end(), "scenario: duplicate scheme labels");
}

struct ResultRow
{
    double snr_db = 0.0;
    std::string scheme;
    Metric metric = Metric::mi;
    double value = 0.0;
    double stderr_ = 0.0;
    Index trials = 0;
};

struct ResultTable
{
    std::vector<ResultRow> rows;

    const ResultRow &at(double snr_db, const std::string &scheme) const
    {
        for (const auto &r : rows)
            if (r.snr_db == snr_db && r.scheme == scheme)
                return r;
        throw invalid_input("result table: no row for " + scheme);
    }
};

/// Per-trial samples kept for paired comparisons: samples[snr][scheme][trial].
struct RunDetail
{
    ResultTable table;
    std::vector<std::string> schemes;
    std::vector<std::vector<std::vector<double>>> samples;
};

inline constexpr std::uint64_t kRootStream = 0x726f6f74;     // "root"
inline constexpr std::uint64_t kCodebookStream = 0x636f6465; // "code"
inline constexpr std::uint64_t kIidStream = 0x696964;        // "iid"

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// 2^b RVQ codewords drawn under the i.i.d. model, uniform power.
inline codebook::Codebook iid_codebook_scheme(int b, Index n_r, Index n_t, Index m, Rng &rng)
{
    require(b >= 0 && b < 31, "iid_codebook_scheme: bit count out of range");
    codebook::Codebook cb;
    cb.b = b;
    const Index size = Index{1} << b;
    cb.codewords = codebook::rvq_component(channel::iid_model(n_r, n_t), m, size, rng);
    cb.tags.assign(static_cast<std::size_t>(size), codebook::Tag{codebook::Provenance::rvq, 0});
    cb.power = RealVector::Ones(m);
    cb.plan.b = b;
    cb.plan.n_rvq = size;
    codebook::validate(cb);
    return cb;
}

/// A scheme with its codebook (quantized and iid_codebook kinds) built.
struct PreparedScheme
{
    SchemeSpec spec;
    std::optional<codebook::Codebook> book;
    RealVector lambda_t; // sorted, for per-SNR power
};

/// Builds every codebook of the scenario. Root codesets are shared between
/// quantized schemes with equal root parameters.
inline std::vector<PreparedScheme> prepare(const Scenario &sc, unsigned threads = 1)
{
    std::map<std::tuple<Index, double, Index>, grassmann::Codeset> roots;
    const auto cov = channel::transmit_cov(sc.model);
    std::vector<PreparedScheme> out;
    for (const auto &spec : sc.schemes)
    {
        PreparedScheme p{spec, std::nullopt, cov.eigenvalues};
        if (spec.kind == SchemeKind::quantized)
        {
            auto it = roots.find(spec.root.key());
            if (it == roots.end())
            {
                Rng root_rng(derive_seed(sc.seed, {kRootStream}));
                it = roots
                         .emplace(spec.root.key(),
                                  grassmann::make_root_codeset(root_rng, sc.model.n_t(), sc.m, spec.root.n,
                                                               spec.root.theta, spec.root.trials, threads))
                         .first;
            }
            // the same codebook seed for every quantized scheme keeps the
            // RVQ draws of smaller books a prefix of the larger ones
            Rng cb_rng(derive_seed(sc.seed, {kCodebookStream}));
            codebook::BuildOptions opt{spec.b, spec.beta, spec.rvq_reserve, spec.policy, 1.0};
            p.book = codebook::build_codebook(sc.model, sc.m, opt, it->second, cb_rng);
        }
        else if (spec.kind == SchemeKind::iid_codebook)
        {
            Rng cb_rng(derive_seed(sc.seed, {kIidStream, static_cast<std::uint64_t>(spec.b)}));
            p.book = iid_codebook_scheme(spec.b, sc.model.n_r(), sc.model.n_t(), sc.m, cb_rng);
        }
        out.push_back(std::move(p));
    }
    return out;
}

namespace detail
{

inline linkperf::Precoder precoder_for(const PreparedScheme &p, const codebook::Codebook *book, const Scenario &sc,
                                       const ComplexMatrix &h, double rho)
{
    switch (p.spec.kind)
    {
    case SchemeKind::perfect:
        return linkperf::perfect_precoder(h, sc.m, rho);
    case SchemeKind::statistical:
        return linkperf::statistical_precoder(sc.model, sc.m, p.spec.policy, rho);
    case SchemeKind::quantized:
    case SchemeKind::iid_codebook: {
        const Index idx =
            p.spec.selector == Selector::mi ? codebook::select_mi(*book, h, rho) : codebook::select_distance(*book, h);
        return linkperf::Precoder(book->codewords[idx], book->power);
    }
    }
    throw invalid_input("unknown scheme kind");
}

} // namespace detail

/// Runs the scenario and keeps every per-trial sample.
inline RunDetail run_detailed(const Scenario &sc, unsigned threads = 1)
{
    validate(sc);
    const auto prepared = prepare(sc, threads);
    const std::size_t n_snr = sc.snr_db.size();
    const std::size_t n_scheme = prepared.size();
    const auto n_trials = static_cast<std::size_t>(sc.trials);

    RunDetail out;
    for (const auto &p : prepared)
        out.schemes.push_back(p.spec.name());
    out.samples.assign(n_snr, std::vector<std::vector<double>>(n_scheme, std::vector<double>(n_trials, 0.0)));

    for (std::size_t s = 0; s < n_snr; ++s)
    {
        const double rho = db_to_linear(sc.snr_db[s]);
        // codebook powers may depend on rho (stat_waterfill)
        std::vector<std::optional<codebook::Codebook>> books(n_scheme);
        for (std::size_t j = 0; j < n_scheme; ++j)
            if (prepared[j].book)
            {
                books[j] = *prepared[j].book;
                if (prepared[j].spec.kind == SchemeKind::quantized)
                    books[j]->power = linkperf::power_alloc(prepared[j].lambda_t, sc.m, rho, prepared[j].spec.policy);
            }

        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t)
            {
                Rng ch_rng(derive_seed(sc.seed, {s, t}));
                const ComplexMatrix h = channel::sample(sc.model, ch_rng);
                for (std::size_t j = 0; j < n_scheme; ++j)
                {
                    const auto f = detail::precoder_for(prepared[j], books[j] ? &*books[j] : nullptr, sc, h, rho);
                    double value;
                    if (sc.metric == Metric::mi)
                        value = linkperf::mutual_info(h, f, rho);
                    else
                    {
                        Rng noise_rng(derive_seed(sc.seed, {s, t, 1}));
                        value = linkperf::ber_qpsk(h, f, rho, noise_rng, sc.n_symbols).aggregate;
                    }
                    out.samples[s][j][t] = value;
                }
            }
        };
        const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_trials)));
        if (workers == 1)
            work(0, n_trials);
        else
        {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work, n_trials * w / workers, n_trials * (w + 1) / workers);
            for (auto &th : pool)
                th.join();
        }

        for (std::size_t j = 0; j < n_scheme; ++j)
        {
            const auto &x = out.samples[s][j];
            double sum = 0.0;
            for (double v : x)
                sum += v;
            const double mean = sum / static_cast<double>(n_trials);
            double ss = 0.0;
            for (double v : x)
                ss += (v - mean) * (v - mean);
            const double se =
                n_trials > 1 ? std::sqrt(ss / static_cast<double>(n_trials - 1) / static_cast<double>(n_trials)) : 0.0;
            out.table.rows.push_back({sc.snr_db[s], out.schemes[j], sc.metric, mean, se, sc.trials});
        }
    }
    return out;
}

inline ResultTable run(const Scenario &sc, unsigned threads = 1) { return run_detailed(sc, threads).table; }

inline std::string to_csv(const ResultTable &table)
{
    std::ostringstream os;
    os << "snr_db,scheme,metric,value,stderr,trials\n";
    char buf[256];
    for (const auto &r : table.rows)
    {
        std::snprintf(buf, sizeof buf, "%.10g,%s,%s,%.10g,%.10g,%lld\n", r.snr_db, r.scheme.c_str(),
                      to_string(r.metric).c_str(), r.value, r.stderr_, static_cast<long long>(r.trials));
        os << buf;
    }
    return os.str();
}

/// Paired mean difference a - b and its standard error over common draws.
struct Paired
{
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline Paired paired_difference(const std::vector<double> &a, const std::vector<double> &b)
{
    require(a.size() == b.size() && !a.empty(), "paired_difference: sample sizes differ");
    const auto n = static_cast<double>(a.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += a[i] - b[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    return {mean, a.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

/// First SNR (linear interpolation between grid points) at which a curve
/// reaches `level`. For a decreasing curve such as BER pass log values and
/// decreasing = true. Empty when the level is never reached.
inline std::optional<double> crossing_snr(const std::vector<double> &snr_db, const std::vector<double> &values,
                                          double level, bool decreasing = false)
{
    require(snr_db.size() == values.size(), "crossing_snr: size mismatch");
    auto reached = [&](double v) { return decreasing ? v <= level : v >= level; };
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (!reached(values[i]))
            continue;
        if (i == 0)
            return snr_db[0];
        const double t = (level - values[i - 1]) / (values[i] - values[i - 1]);
        return snr_db[i - 1] + t * (snr_db[i] - snr_db[i - 1]);
    }
    return std::nullopt;
}

/// Scheme curve over the SNR grid.
inline std::vector<double> curve(const ResultTable &table, const std::string &scheme)
{
    std::vector<double> out;
    for (const auto &r : table.rows)
        if (r.scheme == scheme)
            out.push_back(r.value);
    return out;
}

inline std::vector<double> default_snr_grid(int top_db = 25, int step_db = 5)
{
    std::vector<double> g;
    for (int db = -5; db <= top_db; db += step_db)
        g.push_back(db);
    return g;
}

inline SchemeSpec quantized_scheme(int b, double beta, Index rvq_reserve, RootParams root, Selector selector)
{
    SchemeSpec s;
    s.kind = SchemeKind::quantized;
    s.b = b;
    s.beta = beta;
    s.rvq_reserve = rvq_reserve;
    s.root = root;
    s.selector = selector;
    return s;
}

inline SchemeSpec simple_scheme(SchemeKind kind, int b = 0)
{
    SchemeSpec s;
    s.kind = kind;
    s.b = b;
    return s;
}

inline RealVector fig3_lambda_t() { return (RealVector(4) << 14.98, 0.50, 0.26, 0.26).finished(); }
inline RealVector fig3_lambda_r() { return (RealVector(4) << 15.5, 0.25, 0.15, 0.10).finished(); }

inline RealMatrix fig4_variance()
{
    return (RealMatrix(4, 4) << 1.24, 1.42, 7.49, 0.23, //
            0.41, 0.14, 0.42, 0.03,                     //
            0.72, 1.39, 0.07, 0.02,                     //
            0.28, 0.13, 0.50, 1.51)
        .finished();
}

/// 4x4 separable channel (DFT bases), M = 2, uniform power.
inline Scenario scenario_fig3(Metric metric)
{
    Scenario sc;
    sc.name = metric == Metric::mi ? "fig3-mi" : "fig3-ber";
    sc.model = channel::separable_model(fig3_lambda_t(), fig3_lambda_r(), channel::dft_matrix(4), channel::dft_matrix(4));
    sc.m = 2;
    // the BER curves need 35 dB for the statistical scheme to pass 1e-2
    sc.snr_db = metric == Metric::mi ? default_snr_grid(25) : default_snr_grid(35, 1);
    // 2e5 symbols per point either way; BER spends them on more channel draws
    sc.trials = metric == Metric::mi ? 2000 : 20000;
    sc.seed = 3;
    sc.metric = metric;
    sc.n_symbols = metric == Metric::mi ? 100 : 10;
    const RootParams root{4, 0.80, 20000};
    const Selector sel = metric == Metric::mi ? Selector::mi : Selector::distance;
    sc.schemes = {simple_scheme(SchemeKind::statistical),   quantized_scheme(1, 0.6, 1, root, sel),
                  quantized_scheme(2, 0.6, 2, root, sel),   quantized_scheme(4, 0.1, 5, root, sel),
                  simple_scheme(SchemeKind::perfect),       simple_scheme(SchemeKind::iid_codebook, 4)};
    sc.schemes.back().selector = sel;
    return sc;
}

/// 4x4 virtual-representation channel, M = 3, uniform power.
inline Scenario scenario_fig4()
{
    Scenario sc;
    sc.name = "fig4";
    sc.model = channel::virtual_model(fig4_variance());
    sc.m = 3;
    sc.snr_db = default_snr_grid();
    sc.trials = 2000;
    sc.seed = 4;
    sc.metric = Metric::mi;
    const RootParams root{4, 0.90, 20000};
    sc.schemes = {simple_scheme(SchemeKind::statistical), quantized_scheme(1, 0.6, 0, root, Selector::mi),
                  quantized_scheme(2, 0.6, 2, root, Selector::mi), quantized_scheme(4, 0.3, 5, root, Selector::mi),
                  simple_scheme(SchemeKind::perfect)};
    return sc;
}

} // namespace corrprecode::harness

#endif
