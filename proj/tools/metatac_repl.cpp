/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include "metatac/frontend/process.h"
#include "metatac/kernel/builtins.h"
#include "metatac/repl/session.h"

using namespace metatac;

int main(int argc, char **argv) {
    CLI::App app{"metatac REPL: JSON-lines requests on stdin, one response per line on stdout"};
    bool pp_all = false, automatic = true;
    std::string env_file, stats_out;
    app.add_option("--pp.all", pp_all, "print terms without notation (true|false)");
    app.add_option("--automatic", automatic, "carry untouched goals into successor states (true|false)");
    app.add_option("--env", env_file, "preload the declarations of a .mt file")->check(CLI::ExistingFile);
    app.add_option("--stats-out", stats_out, "append search statistics to this file");
    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const &e) {
        return app.exit(e);
    } catch (CLI::ParseError const &e) {
        app.exit(e);
        return 2;
    }

    environment env = mk_builtin_environment();
    if (!env_file.empty()) {
        std::ifstream f(env_file, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            auto r = frontend::process(ss.str(), env);
            for (auto const &m : r.messages)
                std::cerr << env_file << ": " << m.severity << ": " << m.text << "\n";
            env = r.env;
        } catch (exception const &e) {
            std::cerr << env_file << ": " << e.what() << "\n";
            return 2;
        }
    }
    std::ofstream stats;
    if (!stats_out.empty()) {
        stats.open(stats_out, std::ios::app);
        if (!stats) {
            std::cerr << "cannot open " << stats_out << "\n";
            return 2;
        }
    }
    repl::options o;
    o.pp_all = pp_all;
    o.automatic = automatic;
    repl::session s(env, o, stats_out.empty() ? nullptr : &stats);
    std::ios::sync_with_stdio(false);
    return repl::serve(std::cin, std::cout, s);
}
