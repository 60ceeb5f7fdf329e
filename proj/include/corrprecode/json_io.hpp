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

#ifndef CORRPRECODE_JSON_IO_HPP
#define CORRPRECODE_JSON_IO_HPP

// JSON forms of models, codesets, codebooks and scenarios. Complex matrices
// are lists of rows, each entry a [re, im] pair.

#include "channel.hpp"
#include "codebook.hpp"
#include "grassmann.hpp"
#include "harness.hpp"
#include "matrix.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace corrprecode::json_io
{

using json = nlohmann::json;

inline json to_json(const ComplexMatrix &a)
{
    json rows = json::array();
    for (Index i = 0; i < a.rows(); ++i)
    {
        json row = json::array();
        for (Index j = 0; j < a.cols(); ++j)
            row.push_back({a(i, j).real(), a(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const RealMatrix &a)
{
    json rows = json::array();
    for (Index i = 0; i < a.rows(); ++i)
    {
        json row = json::array();
        for (Index j = 0; j < a.cols(); ++j)
            row.push_back(a(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const RealVector &v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

inline ComplexMatrix complex_matrix_from_json(const json &j)
{
    require(j.is_array() && !j.empty() && j[0].is_array(), "json: complex matrix must be a list of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j[0].size());
    ComplexMatrix a(rows, cols);
    for (Index r = 0; r < rows; ++r)
    {
        require(j[r].is_array() && static_cast<Index>(j[r].size()) == cols, "json: ragged complex matrix");
        for (Index c = 0; c < cols; ++c)
        {
            const auto &e = j[r][c];
            if (e.is_number())
                a(r, c) = cplx(e.get<double>(), 0.0);
            else
            {
                require(e.is_array() && e.size() == 2, "json: complex entries are [re, im] pairs");
                a(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            }
        }
    }
    return a;
}

inline RealMatrix real_matrix_from_json(const json &j)
{
    require(j.is_array() && !j.empty() && j[0].is_array(), "json: real matrix must be a list of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j[0].size());
    RealMatrix a(rows, cols);
    for (Index r = 0; r < rows; ++r)
    {
        require(j[r].is_array() && static_cast<Index>(j[r].size()) == cols, "json: ragged real matrix");
        for (Index c = 0; c < cols; ++c)
            a(r, c) = j[r][c].get<double>();
    }
    return a;
}

inline RealVector real_vector_from_json(const json &j)
{
    require(j.is_array() && !j.empty(), "json: expected a non-empty list of numbers");
    RealVector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i)
        v(i) = j[i].get<double>();
    return v;
}

// ---------------------------------------------------------------- models

inline json to_json(const channel::CanonicalModel &m)
{
    return {{"type", "explicit"}, {"u_t", to_json(m.u_t)}, {"u_r", to_json(m.u_r)}, {"var", to_json(m.var)}};
}

inline ComplexMatrix basis_from_name(const std::string &name, Index n, Rng &rng)
{
    if (name == "dft")
        return channel::dft_matrix(n);
    if (name == "identity")
        return ComplexMatrix::Identity(n, n);
    if (name == "haar")
        return numerics::haar_semiunitary(rng, n, n).matrix();
    throw invalid_input("json: unknown basis '" + name + "'");
}

/// Accepts {"type": "explicit" | "iid" | "separable" | "virtual" | "matched" | "preset", ...}.
inline channel::CanonicalModel model_from_json(const json &j)
{
    require(j.is_object() && j.contains("type"), "json: model needs a 'type'");
    const auto type = j.at("type").get<std::string>();
    Rng basis_rng(j.value("basis_seed", std::uint64_t{1}));
    const std::string bases = j.value("bases", std::string("dft"));
    if (type == "explicit")
        return channel::make_model(complex_matrix_from_json(j.at("u_t")), complex_matrix_from_json(j.at("u_r")),
                                   real_matrix_from_json(j.at("var")));
    if (type == "iid")
        return channel::iid_model(j.at("n_r").get<Index>(), j.at("n_t").get<Index>());
    if (type == "virtual")
        return channel::virtual_model(real_matrix_from_json(j.at("var")));
    if (type == "separable")
    {
        const RealVector lt = real_vector_from_json(j.at("lambda_t"));
        const RealVector lr = real_vector_from_json(j.at("lambda_r"));
        auto ut = basis_from_name(bases, lt.size(), basis_rng);
        auto ur = basis_from_name(bases, lr.size(), basis_rng);
        return channel::separable_model(lt, lr, std::move(ut), std::move(ur));
    }
    if (type == "matched")
    {
        const auto n_t = j.at("n_t").get<Index>();
        const auto n_r = j.at("n_r").get<Index>();
        const auto spec = channel::matched_statistics(n_t, n_r, j.at("m").get<Index>());
        auto ut = basis_from_name(bases, n_t, basis_rng);
        auto ur = basis_from_name(bases, n_r, basis_rng);
        return channel::separable_model(spec.lambda_t, spec.lambda_r, std::move(ut), std::move(ur));
    }
    if (type == "preset")
    {
        const auto name = j.at("name").get<std::string>();
        if (name == "fig3")
            return harness::scenario_fig3(harness::Metric::mi).model;
        if (name == "fig4")
            return harness::scenario_fig4().model;
        throw invalid_input("json: unknown model preset '" + name + "'");
    }
    throw invalid_input("json: unknown model type '" + type + "'");
}

// ---------------------------------------------------------------- codesets

inline json to_json(const grassmann::Codeset &cs)
{
    json members = json::array();
    for (const auto &v : cs.members)
        members.push_back(to_json(v.matrix()));
    return {{"n_t", cs.center().ambient_dim()}, {"m", cs.center().dim()}, {"theta", cs.theta},
            {"gamma", cs.gamma},                {"members", members}};
}

inline grassmann::Codeset codeset_from_json(const json &j)
{
    grassmann::Codeset cs;
    for (const auto &m : j.at("members"))
        cs.members.emplace_back(complex_matrix_from_json(m));
    require(!cs.members.empty(), "json: codeset has no members");
    cs.theta = j.at("theta").get<double>();
    cs.gamma = j.value("gamma", cs.members.size() >= 2 ? grassmann::min_dist(cs) : 1.0);
    return cs;
}

// ---------------------------------------------------------------- codebooks

inline json to_json(const codebook::Codebook &cb)
{
    json words = json::array();
    for (Index i = 0; i < cb.size(); ++i)
        words.push_back({{"tag", cb.tags[i].str()}, {"matrix", to_json(cb.codewords[i].matrix())}});
    json plan = {{"beta", cb.plan.beta},
                 {"n_stat", cb.plan.n_stat},
                 {"n_loc", cb.plan.n_loc},
                 {"n_rvq", cb.plan.n_rvq},
                 {"alphas", cb.plan.alphas}};
    return {{"b", cb.b}, {"power", to_json(cb.power)}, {"codewords", words}, {"plan", plan}};
}

inline codebook::Codebook codebook_from_json(const json &j)
{
    codebook::Codebook cb;
    cb.b = j.at("b").get<int>();
    cb.power = real_vector_from_json(j.at("power"));
    for (const auto &w : j.at("codewords"))
    {
        cb.tags.push_back(codebook::Tag::parse(w.at("tag").get<std::string>()));
        cb.codewords.emplace_back(complex_matrix_from_json(w.at("matrix")));
    }
    if (j.contains("plan"))
    {
        const auto &p = j.at("plan");
        cb.plan.b = cb.b;
        cb.plan.beta = p.value("beta", 0.0);
        cb.plan.n_stat = p.value("n_stat", Index{0});
        cb.plan.n_loc = p.value("n_loc", std::vector<Index>{});
        cb.plan.n_rvq = p.value("n_rvq", Index{0});
        cb.plan.alphas = p.value("alphas", std::vector<double>{});
    }
    codebook::validate(cb);
    return cb;
}

// ---------------------------------------------------------------- scenarios

inline json to_json(const harness::SchemeSpec &s)
{
    json j = {{"kind", harness::to_string(s.kind)}, {"label", s.name()}, {"policy", linkperf::to_string(s.policy)}};
    if (s.kind == harness::SchemeKind::quantized || s.kind == harness::SchemeKind::iid_codebook)
    {
        j["b"] = s.b;
        j["selector"] = harness::to_string(s.selector);
    }
    if (s.kind == harness::SchemeKind::quantized)
    {
        j["beta"] = s.beta;
        j["rvq_reserve"] = s.rvq_reserve;
        j["root"] = {{"n", s.root.n}, {"theta", s.root.theta}, {"trials", s.root.trials}};
    }
    return j;
}

inline harness::SchemeSpec scheme_from_json(const json &j)
{
    harness::SchemeSpec s;
    s.kind = harness::scheme_kind_from_string(j.at("kind").get<std::string>());
    s.label = j.value("label", std::string{});
    s.policy = linkperf::power_policy_from_string(j.value("policy", std::string("uniform")));
    s.b = j.value("b", 0);
    s.beta = j.value("beta", 0.5);
    s.rvq_reserve = j.value("rvq_reserve", Index{0});
    s.selector = harness::selector_from_string(j.value("selector", std::string("mi")));
    if (j.contains("root"))
    {
        const auto &r = j.at("root");
        s.root.n = r.value("n", s.root.n);
        s.root.theta = r.value("theta", s.root.theta);
        s.root.trials = r.value("trials", s.root.trials);
    }
    return s;
}

inline json to_json(const harness::Scenario &sc)
{
    json schemes = json::array();
    for (const auto &s : sc.schemes)
        schemes.push_back(to_json(s));
    return {{"name", sc.name},         {"model", to_json(sc.model)}, {"m", sc.m},
            {"snr_db", sc.snr_db},     {"schemes", schemes},         {"trials", sc.trials},
            {"seed", sc.seed},         {"metric", harness::to_string(sc.metric)},
            {"n_symbols", sc.n_symbols}};
}

inline harness::Scenario scenario_from_json(const json &j)
{
    harness::Scenario sc;
    sc.name = j.value("name", std::string("custom"));
    sc.model = model_from_json(j.at("model"));
    sc.m = j.at("m").get<Index>();
    sc.snr_db = j.at("snr_db").get<std::vector<double>>();
    for (const auto &s : j.at("schemes"))
        sc.schemes.push_back(scheme_from_json(s));
    sc.trials = j.value("trials", Index{1});
    sc.seed = j.value("seed", std::uint64_t{1});
    sc.metric = harness::metric_from_string(j.value("metric", std::string("mi")));
    sc.n_symbols = j.value("n_symbols", Index{100});
    harness::validate(sc);
    return sc;
}

inline json read_file(const std::string &path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open '" + path + "'");
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw invalid_input("'" + path + "': " + e.what());
    }
}

inline void write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write '" + path + "'");
    out << text;
}

} // namespace corrprecode::json_io

#endif
