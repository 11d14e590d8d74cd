// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

// Command-line front end over the dmimo C API.
//
//   dmimo scene validate --config FILE
//   dmimo trace  --config FILE [--seed N] --out DIR [--dump-link AP,UE]
//   dmimo synth  --db FILE [--seed N] --out DIR
//   dmimo eval   --config FILE [scenario flags] --out DIR [--db FILE]
//   dmimo report --out DIR | --metrics FILE
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.

#include "dmimo/dmimo.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace
{

struct Failure
{
    int code;
};

int exit_code(dmimo_status s)
{
    switch (s)
    {
    case DMIMO_OK: return 0;
    case DMIMO_ERR_INVALID_ARGUMENT:
    case DMIMO_ERR_CONFIG:
    case DMIMO_ERR_OVERLAP: return 1;
    default: return 2;
    }
}

void check(dmimo_status s, const std::string &what)
{
    if (s == DMIMO_OK)
        return;
    std::cerr << "dmimo: " << what << ": " << dmimo_last_error() << "\n";
    throw Failure{exit_code(s)};
}

[[noreturn]] void usage_error(const std::string &msg)
{
    std::cerr << "dmimo: " << msg << "\n";
    throw Failure{1};
}

using ConfigPtr = std::unique_ptr<dmimo_config, decltype(&dmimo_config_free)>;
using DbPtr = std::unique_ptr<dmimo_channel_db, decltype(&dmimo_db_free)>;
using ResultPtr = std::unique_ptr<dmimo_result, decltype(&dmimo_result_free)>;

ConfigPtr load_config(const std::string &path)
{
    if (path.empty())
        usage_error("--config is required");
    dmimo_config *c = nullptr;
    check(dmimo_config_load(path.c_str(), &c), "loading " + path);
    return ConfigPtr(c, dmimo_config_free);
}

std::pair<int, int> parse_pair(const std::string &s, const char *flag)
{
    const auto comma = s.find(',');
    try
    {
        if (comma == std::string::npos)
            throw std::invalid_argument(s);
        std::size_t u1 = 0, u2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const int x = std::stoi(a, &u1), y = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size())
            throw std::invalid_argument(s);
        return {x, y};
    }
    catch (const std::exception &)
    {
        usage_error(std::string(flag) + " expects two integers 'a,b', got '" + s + "'");
    }
}

void make_dir(const std::string &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
    {
        std::cerr << "dmimo: cannot create " << dir << ": " << ec.message() << "\n";
        throw Failure{2};
    }
}

DbPtr trace(const dmimo_config *cfg, std::uint64_t seed)
{
    dmimo_channel_db *db = nullptr;
    check(dmimo_trace(cfg, seed, &db), "tracing");
    return DbPtr(db, dmimo_db_free);
}

// Reuses DIR/channels_rt.dmch when it matches the scene digest and seed.
DbPtr cached_trace(const dmimo_config *cfg, std::uint64_t seed, const std::string &dir)
{
    const std::string path = (fs::path(dir) / "channels_rt.dmch").string();
    if (fs::exists(path))
    {
        dmimo_channel_db *db = nullptr;
        if (dmimo_db_load(cfg, path.c_str(), &db) == DMIMO_OK)
        {
            DbPtr p(db, dmimo_db_free);
            if (dmimo_db_seed(db) == seed)
                return p;
        }
    }
    auto db = trace(cfg, seed);
    check(dmimo_db_save(db.get(), path.c_str()), "saving " + path);
    return db;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Indoor distributed-MIMO coverage and capacity simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dmimo_version()));

    std::string config_path, out_dir, db_path, metrics_path, dump_link;
    std::optional<std::uint64_t> seed;
    std::string deployment, tx_model, channel, link, precoder, coop;
    int layers = 0;

    auto add_config = [&](CLI::App *c) { c->add_option("--config", config_path, "Configuration file (YAML)"); };
    auto add_seed = [&](CLI::App *c) { c->add_option("--seed", seed, "Random seed (default: from config)"); };

    auto *scene = app.add_subcommand("scene", "Scene commands");
    scene->require_subcommand(1);
    auto *validate = scene->add_subcommand("validate", "Validate a configuration and print a summary");
    add_config(validate);

    auto *trace_cmd = app.add_subcommand("trace", "Ray-trace every AP x UE link into a channel database");
    add_config(trace_cmd);
    add_seed(trace_cmd);
    trace_cmd->add_option("--out", out_dir, "Output directory")->required();
    trace_cmd->add_option("--dump-link", dump_link, "Also dump the paths of link AP,UE");

    auto *synth = app.add_subcommand("synth", "Rayleigh database from a ray-traced one");
    synth->add_option("--db", db_path, "Ray-traced database")->required();
    add_config(synth);
    add_seed(synth);
    synth->add_option("--out", out_dir, "Output directory")->required();

    auto *eval = app.add_subcommand("eval", "Evaluate a scenario and export results");
    add_config(eval);
    add_seed(eval);
    eval->add_option("--deployment", deployment, "Deployment name");
    eval->add_option("--tx-model", tx_model, "per-ap | network")->check(CLI::IsMember({"per-ap", "network"}));
    eval->add_option("--channel", channel, "rt | rayleigh")->check(CLI::IsMember({"rt", "rayleigh"}));
    eval->add_option("--link", link, "dl | ul")->check(CLI::IsMember({"dl", "ul"}));
    eval->add_option("--precoder", precoder, "zf | svd")->check(CLI::IsMember({"zf", "svd"}));
    eval->add_option("--layers", layers, "Number of layers");
    eval->add_option("--coop", coop, "a,b: b APs active among a");
    eval->add_option("--db", db_path, "Ray-traced database (default: cached in the output directory)");
    eval->add_option("--out", out_dir, "Output directory")->required();

    auto *report_cmd = app.add_subcommand("report", "Summarize an existing metrics.csv");
    report_cmd->add_option("--out", out_dir, "Result directory containing metrics.csv");
    report_cmd->add_option("--metrics", metrics_path, "Path to metrics.csv");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "dmimo: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try
    {
        if (validate->parsed())
        {
            auto cfg = load_config(config_path);
            std::cout << dmimo_config_summary(cfg.get());
            return 0;
        }

        if (trace_cmd->parsed())
        {
            auto cfg = load_config(config_path);
            const std::uint64_t s = seed.value_or(dmimo_config_seed(cfg.get()));
            make_dir(out_dir);
            auto db = trace(cfg.get(), s);
            const std::string db_file = (fs::path(out_dir) / "channels_rt.dmch").string();
            check(dmimo_db_save(db.get(), db_file.c_str()), "saving " + db_file);
            const std::string coh = (fs::path(out_dir) / "coherence.csv").string();
            check(dmimo_db_write_coherence(db.get(), 0.9, coh.c_str()), "writing " + coh);
            if (!dump_link.empty())
            {
                const auto [ap, ue] = parse_pair(dump_link, "--dump-link");
                const std::string dump =
                    (fs::path(out_dir) / ("paths_ap" + std::to_string(ap) + "_ue" + std::to_string(ue) + ".txt"))
                        .string();
                check(dmimo_dump_link_paths(cfg.get(), db.get(), ap, ue, s, dump.c_str()), "dumping link");
            }
            std::cout << dmimo_db_summary(db.get());
            return 0;
        }

        if (synth->parsed())
        {
            ConfigPtr cfg(nullptr, dmimo_config_free);
            if (!config_path.empty())
                cfg = load_config(config_path);
            dmimo_channel_db *raw = nullptr;
            check(dmimo_db_load(cfg.get(), db_path.c_str(), &raw), "loading " + db_path);
            DbPtr rt(raw, dmimo_db_free);
            const std::uint64_t s = seed.value_or(cfg ? dmimo_config_seed(cfg.get()) : dmimo_db_seed(rt.get()));
            dmimo_channel_db *ray = nullptr;
            check(dmimo_db_synthesize_rayleigh(rt.get(), s, &ray), "synthesizing");
            DbPtr rayleigh(ray, dmimo_db_free);
            make_dir(out_dir);
            const std::string path = (fs::path(out_dir) / "channels_rayleigh.dmch").string();
            check(dmimo_db_save(rayleigh.get(), path.c_str()), "saving " + path);
            std::cout << dmimo_db_summary(rayleigh.get());
            return 0;
        }

        if (eval->parsed())
        {
            auto cfg = load_config(config_path);
            dmimo_scenario_options opt;
            dmimo_scenario_options_init(&opt);
            if (!deployment.empty())
                opt.deployment = deployment.c_str();
            if (!tx_model.empty())
                opt.tx_model = tx_model.c_str();
            if (!channel.empty())
                opt.channel = channel.c_str();
            if (!link.empty())
                opt.link = link.c_str();
            if (!precoder.empty())
                opt.precoder = precoder.c_str();
            if (eval->count("--layers"))
            {
                if (layers < 1)
                    usage_error("--layers must be >= 1");
                opt.layers = layers;
            }
            if (!coop.empty())
            {
                const auto [a, b] = parse_pair(coop, "--coop");
                if (a < 1 || b < 1)
                    usage_error("--coop values must be >= 1");
                if (b > a)
                    usage_error("--coop " + coop + ": b must not exceed a");
                opt.coop_a = a;
                opt.coop_b = b;
            }
            const std::uint64_t s = seed.value_or(dmimo_config_seed(cfg.get()));
            opt.has_seed = 1;
            opt.seed = s;

            make_dir(out_dir);
            DbPtr db(nullptr, dmimo_db_free);
            if (!db_path.empty())
            {
                dmimo_channel_db *raw = nullptr;
                check(dmimo_db_load(cfg.get(), db_path.c_str(), &raw), "loading " + db_path);
                db.reset(raw);
            }
            else
                db = cached_trace(cfg.get(), s, out_dir);

            dmimo_result *raw = nullptr;
            check(dmimo_eval(cfg.get(), db.get(), &opt, &raw), "evaluating");
            ResultPtr result(raw, dmimo_result_free);
            check(dmimo_result_export(result.get(), cfg.get(), out_dir.c_str()), "exporting");
            std::cout << dmimo_result_summary(result.get());
            return 0;
        }

        if (report_cmd->parsed())
        {
            if (metrics_path.empty())
            {
                if (out_dir.empty())
                    usage_error("report needs --out DIR or --metrics FILE");
                metrics_path = (fs::path(out_dir) / "metrics.csv").string();
            }
            std::string report_path;
            if (!out_dir.empty())
                report_path = (fs::path(out_dir) / "report.csv").string();
            check(dmimo_report(metrics_path.c_str(), nullptr), "reporting");
            if (!report_path.empty())
                check(dmimo_report(metrics_path.c_str(), report_path.c_str()), "writing " + report_path);
            return 0;
        }
    }
    catch (const Failure &f)
    {
        return f.code;
    }
    return 1;
}
