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

// sim: command-line front end.
//
//   sim run --config scenario.json --out results.csv [--seed N] [--threads K]
//   sim codebook build --config codebook.json [--out book.json]
//   sim codebook inspect --config book.json
//   sim packing --nt 4 --m 2 --n 4 --theta 0.8 --trials 20000 --out root.json [--seed N]
//   sim preset fig3-mi|fig3-ber|fig4 --out scenario.json

#include <corrprecode.hpp>
#include <corrprecode/json_io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>

using namespace corrprecode;
using json_io::json;

namespace
{

grassmann::Codeset root_from_config(const json &cfg, Index n_t, Index m, std::uint64_t seed, unsigned threads)
{
    if (cfg.contains("root_file"))
        return json_io::codeset_from_json(json_io::read_file(cfg.at("root_file").get<std::string>()));
    const json root = cfg.value("root", json::object());
    Rng rng(derive_seed(seed, {harness::kRootStream}));
    return grassmann::make_root_codeset(rng, n_t, m, root.value("n", Index{4}), root.value("theta", 0.8),
                                        root.value("trials", Index{20000}), threads);
}

int cmd_codebook_build(const std::string &config, const std::string &out, unsigned threads)
{
    const json cfg = json_io::read_file(config);
    const auto model = json_io::model_from_json(cfg.at("model"));
    const Index m = cfg.at("m").get<Index>();
    const auto seed = cfg.value("seed", std::uint64_t{1});
    const auto root = root_from_config(cfg, model.n_t(), m, seed, threads);

    codebook::BuildOptions opt;
    opt.b = cfg.at("b").get<int>();
    opt.beta = cfg.value("beta", opt.beta);
    opt.rvq_reserve = cfg.value("rvq_reserve", Index{0});
    opt.policy = linkperf::power_policy_from_string(cfg.value("policy", std::string("uniform")));
    opt.rho = cfg.value("rho", 1.0);
    Rng rng(derive_seed(seed, {harness::kCodebookStream}));
    const auto cb = codebook::build_codebook(model, m, opt, root, rng);
    const std::string text = json_io::to_json(cb).dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        json_io::write_file(out, text);
    std::fprintf(stderr, "codebook: %lld codewords (stat %lld, rvq %lld), root gamma %.4f\n",
                 static_cast<long long>(cb.size()), static_cast<long long>(cb.plan.n_stat),
                 static_cast<long long>(cb.plan.n_rvq), root.gamma);
    return 0;
}

int cmd_codebook_inspect(const std::string &config)
{
    const auto cb = json_io::codebook_from_json(json_io::read_file(config));
    std::printf("b = %d, %lld codewords, N_t = %lld, M = %lld\n", cb.b, static_cast<long long>(cb.size()),
                static_cast<long long>(cb.codewords.front().ambient_dim()), static_cast<long long>(cb.streams()));
    std::printf("power:");
    for (Index k = 0; k < cb.power.size(); ++k)
        std::printf(" %.6f", cb.power(k));
    std::printf("\n\n%5s  %-14s  %12s  %12s\n", "index", "tag", "nearest", "pa_ratio");
    double overall = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < cb.size(); ++i)
    {
        double nearest = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < cb.size(); ++j)
            if (j != i)
                nearest = std::min(nearest, grassmann::dist(cb.codewords[i], cb.codewords[j]));
        overall = std::min(overall, nearest);
        std::printf("%5lld  %-14s  %12.6f  %12.6g\n", static_cast<long long>(i), cb.tags[i].str().c_str(), nearest,
                    codebook::pa_gain_ratio(cb.codewords[i]));
    }
    std::printf("\nminimum pairwise distance: %.6f\n", overall);
    return 0;
}

int cmd_packing(Index nt, Index m, Index n, double theta, Index trials, std::uint64_t seed, const std::string &out,
                unsigned threads)
{
    Rng rng(seed);
    const auto cs = grassmann::make_root_codeset(rng, nt, m, n, theta, trials, threads);
    json_io::write_file(out, json_io::to_json(cs).dump(2) + "\n");
    std::printf("G(%lld,%lld): %lld members, theta %.4f, gamma %.6f\n", static_cast<long long>(nt),
                static_cast<long long>(m), static_cast<long long>(n), theta, cs.gamma);
    return 0;
}

int cmd_preset(const std::string &name, const std::string &out)
{
    harness::Scenario sc;
    if (name == "fig3-mi")
        sc = harness::scenario_fig3(harness::Metric::mi);
    else if (name == "fig3-ber")
        sc = harness::scenario_fig3(harness::Metric::ber);
    else if (name == "fig4")
        sc = harness::scenario_fig4();
    else
        throw invalid_input("unknown preset '" + name + "' (fig3-mi, fig3-ber, fig4)");
    json_io::write_file(out, json_io::to_json(sc).dump(2) + "\n");
    return 0;
}

int cmd_run(const std::string &config, const std::string &out, std::optional<std::uint64_t> seed, unsigned threads)
{
    auto sc = json_io::scenario_from_json(json_io::read_file(config));
    if (seed)
        sc.seed = *seed;
    json_io::write_file(out, harness::to_csv(harness::run(sc, threads)));
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"corrprecode simulator"};
    app.require_subcommand(1);
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    auto *run = app.add_subcommand("run", "Monte Carlo sweep of a scenario to CSV");
    std::string run_config, run_out;
    std::optional<std::uint64_t> run_seed;
    run->add_option("--config", run_config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Output CSV")->required();
    run->add_option("--seed", run_seed, "Override the scenario seed");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto *cb = app.add_subcommand("codebook", "Build or inspect a codebook");
    cb->require_subcommand(1);
    auto *cb_build = cb->add_subcommand("build", "Build a codebook from a JSON config");
    std::string build_config, build_out;
    cb_build->add_option("--config", build_config, "Codebook config JSON")->required()->check(CLI::ExistingFile);
    cb_build->add_option("--out", build_out, "Output codebook JSON (stdout if omitted)");
    cb_build->add_option("--threads", threads, "Worker threads for the root search")->check(CLI::PositiveNumber);
    auto *cb_inspect = cb->add_subcommand("inspect", "Print provenance and distances of a codebook");
    std::string inspect_config;
    cb_inspect->add_option("--config", inspect_config, "Codebook JSON")->required()->check(CLI::ExistingFile);

    auto *pack = app.add_subcommand("packing", "Search for a root codeset");
    Index nt = 4, m = 2, n = 4, trials = 20000;
    double theta = 0.8;
    std::uint64_t pack_seed = 1;
    std::string pack_out;
    pack->add_option("--nt", nt, "Ambient dimension")->check(CLI::PositiveNumber);
    pack->add_option("--m", m, "Subspace dimension")->check(CLI::PositiveNumber);
    pack->add_option("--n", n, "Codeset size")->check(CLI::PositiveNumber);
    pack->add_option("--theta", theta, "Cap radius")->check(CLI::Range(0.0, 1.0));
    pack->add_option("--trials", trials, "Random restarts")->check(CLI::PositiveNumber);
    pack->add_option("--seed", pack_seed, "Seed");
    pack->add_option("--out", pack_out, "Output codeset JSON")->required();
    pack->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto *preset = app.add_subcommand("preset", "Write a scenario preset");
    std::string preset_name, preset_out;
    preset->add_option("name", preset_name, "fig3-mi | fig3-ber | fig4")
        ->required()
        ->check(CLI::IsMember({"fig3-mi", "fig3-ber", "fig4"}));
    preset->add_option("--out", preset_out, "Output scenario JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(run_config, run_out, run_seed, threads);
        if (cb_build->parsed())
            return cmd_codebook_build(build_config, build_out, threads);
        if (cb_inspect->parsed())
            return cmd_codebook_inspect(inspect_config);
        if (pack->parsed())
            return cmd_packing(nt, m, n, theta, trials, pack_seed, pack_out, threads);
        if (preset->parsed())
            return cmd_preset(preset_name, preset_out);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
