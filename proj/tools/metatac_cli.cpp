/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include "metatac/frontend/process.h"
#include "metatac/kernel/builtins.h"
#include "metatac/repl/session.h"
#include "metatac/search/search.h"

using namespace metatac;
namespace fs = std::filesystem;

namespace {

std::string slurp(std::string const &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw exception(error_kind::io_error, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// every sorry placeholder of the file, searched in order
int search_file(std::string const &path, search::mcts_config const &cfg, std::ostream *stats, bool quiet) {
    auto r = frontend::process(slurp(path), mk_builtin_environment());
    for (auto const &m : r.messages)
        if (m.severity == "error")
            std::cerr << path << ": error: " << m.text << "\n";
    int failed = 0;
    for (auto const &s : r.sorries) {
        auto t0 = std::chrono::steady_clock::now();
        auto res = search::mcts_run(s.state, cfg);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (stats)
            for (auto const &l : res.result.stats.log)
                *stats << l << "\n";
        bool ok = res.solved && sound(res.result.state);
        failed += !ok;
        if (!quiet) {
            std::cout << path << ": " << (ok ? "solved" : "unsolved") << " iterations=" << res.result.stats.iterations
                      << " nodes=" << res.tree.nodes << " time=" << secs << "s\n";
            if (ok)
                for (auto const &t : res.result.script)
                    std::cout << "  " << t << "\n";
        }
    }
    return failed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"metatac: process, search and benchmark .mt files"};
    app.require_subcommand(1);

    auto *proc = app.add_subcommand("process", "print the frontend extraction of a file as JSON");
    std::string proc_file;
    bool pp_all = false;
    proc->add_option("file", proc_file)->required()->check(CLI::ExistingFile);
    proc->add_option("--pp.all", pp_all, "print terms without notation (true|false)");

    auto *srch = app.add_subcommand("search", "run MCTS on every sorry of the given files");
    std::vector<std::string> files;
    search::mcts_config cfg;
    std::string stats_out;
    srch->add_option("files", files)->required()->check(CLI::ExistingPath);
    srch->add_option("--seed", cfg.seed);
    srch->add_option("--iterations", cfg.max_iterations)->check(CLI::PositiveNumber);
    srch->add_option("--c-uct", cfg.c_uct)->check(CLI::PositiveNumber);
    srch->add_option("--rollout-depth", cfg.rollout_depth);
    srch->add_option("--stats-out", stats_out);

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const &e) {
        return app.exit(e);
    } catch (CLI::ParseError const &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*proc) {
            repl::options o;
            o.pp_all = pp_all;
            repl::session s(mk_builtin_environment(), o);
            nlohmann::json req = {{"id", 0}, {"cmd", "frontend.process"}, {"payload", {{"path", proc_file}}}};
            auto r = s.handle(req);
            std::cout << r.dump(2) << "\n";
            return r["ok"].get<bool>() ? 0 : 1;
        }
        std::ofstream stats;
        if (!stats_out.empty())
            stats.open(stats_out);
        std::vector<std::string> paths;
        for (auto const &f : files) {
            if (fs::is_directory(f)) {
                for (auto const &e : fs::directory_iterator(f))
                    if (e.path().extension() == ".mt")
                        paths.push_back(e.path().string());
            } else {
                paths.push_back(f);
            }
        }
        std::sort(paths.begin(), paths.end());
        int failed = 0;
        for (auto const &p : paths)
            failed += search_file(p, cfg, stats_out.empty() ? nullptr : &stats, false);
        std::cout << (paths.size() - failed) << "/" << paths.size() << " solved\n";
        return failed ? 1 : 0;
    } catch (exception const &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
