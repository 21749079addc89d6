/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <json.hpp>
#include "metatac/frontend/process.h"
#include "metatac/frontend/sexp.h"
#include "metatac/repl/session.h"
#include "metatac/search/search.h"
#include "support/suites.h"

using namespace metatac;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

// pinned limits
constexpr double replay_seconds = 1.0;
constexpr double soundness_seconds = 60.0;
constexpr double mcts_seconds = 120.0;
constexpr std::size_t soundness_cases = 1000;
constexpr std::size_t mode_cases = 50;
constexpr std::size_t coupling_cases = 200;
constexpr std::size_t roundtrip_cases = 1000;
constexpr std::size_t bench_required = 18;
constexpr std::uint64_t mcts_iterations = 10000;
constexpr std::size_t fuzz_commands = 200;

fs::path const root = METATAC_SOURCE_DIR;

environment const &env0() {
    static environment const e = mk_builtin_environment();
    return e;
}

std::string slurp(fs::path const &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim_nl(std::string s) {
    while (!s.empty() && s.back() == '\n')
        s.pop_back();
    return s;
}

struct check {
    bool ok = true;
    std::string why;
    void require(bool c, std::string const &msg) {
        if (!c && ok) {
            ok = false;
            why = msg;
        }
    }
};

struct client {
    repl::session s{env0()};
    int next = 1;
    json ok(std::string const &cmd, json payload = json::object()) {
        json r = s.handle({{"id", next++}, {"cmd", cmd}, {"payload", std::move(payload)}});
        if (!r["ok"].get<bool>())
            throw std::runtime_error(cmd + ": " + r.dump());
        return r["result"];
    }
};

std::string join_goals(json const &texts) {
    std::string r;
    for (std::size_t i = 0; i < texts.size(); ++i)
        r += (i ? "\n\n" : "") + texts[i].get<std::string>();
    return r;
}

std::string sorry_text(frontend::sorry_goal const &g) { return g.context + "\n|- " + g.target; }

std::string sorries_text(frontend::process_result const &r) {
    std::string s;
    for (auto const &g : r.sorries)
        s += (s.empty() ? "" : "\n") + sorry_text(g);
    return s;
}

frontend::process_result process_file(std::string const &name) {
    return frontend::process(slurp(root / "tests" / "data" / name), env0());
}

/* ---------- criteria ---------- */

char const *or_comm_stmt = "forall (p q : Prop), p \\/ q -> q \\/ p";

check proof_tree() {
    check c;
    // golden: "== tactic" headers followed by the open goals
    std::vector<std::pair<std::string, std::string>> nodes;
    std::istringstream in(slurp(root / "tests" / "golden" / "or_comm_tree.txt"));
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("#", 0) == 0)
            continue;
        if (line.rfind("== ", 0) == 0)
            nodes.push_back({line.substr(3), ""});
        else if (!nodes.empty())
            nodes.back().second += line + "\n";
    }
    c.require(nodes.size() == 9, "golden file has " + std::to_string(nodes.size()) + " nodes");
    if (!c.ok)
        return c;
    client cl;
    auto st = cl.ok("goal.start", {{"expr", or_comm_stmt}});
    c.require(join_goals(st["goalTexts"]) == trim_nl(nodes[0].second), "start node differs");
    json id = st["stateId"];
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        auto r = cl.ok("goal.tactic", {{"stateId", id}, {"tactic", nodes[i].first}});
        c.require(join_goals(r["goalTexts"]) == trim_nl(nodes[i].second), "node after '" + nodes[i].first + "' differs");
        id = r["nextStateId"];
    }
    auto pr = cl.ok("goal.print", {{"stateId", id}, {"sexp", true}});
    c.require(pr["solved"] == true, "not solved");
    // independent re-check of the printed term
    meta_store store;
    term stmt = frontend::elab_statement(env0(), or_comm_stmt, store);
    type_checker tc(env0(), {});
    c.require(tc.is_def_eq(tc.infer(frontend::sexp_parse(pr["sexp"].get<std::string>())), stmt),
              "root term does not check");
    return c;
}

check coupled_le() {
    check c;
    client cl;
    cl.ok("options.set", {{"automaticMode", false}});
    auto st = cl.ok("goal.start", {{"expr", "2 <= 5"}});
    auto a = cl.ok("goal.tactic", {{"stateId", st["stateId"]}, {"tactic", "apply Nat.le_trans"}});
    c.require(a["goals"].size() == 3, "expected 3 goals");
    c.require(a["coupling"].size() == 1 && a["coupling"][0].size() == 3, "expected one coupling group of 3");
    json z;
    for (std::size_t i = 0; i < a["goals"].size(); ++i)
        if (a["goalTexts"][i] == "⊢ Nat")
            z = a["goals"][i];
    c.require(!z.is_null(), "no witness goal");
    if (!c.ok)
        return c;
    auto b = cl.ok("goal.tactic", {{"stateId", a["nextStateId"]}, {"goalId", z}, {"tactic", "exact 3"}});
    c.require(b["goals"].empty(), "exact 3 left goals in manual mode");
    auto k = cl.ok("goal.continue", {{"targetStateId", b["nextStateId"]}, {"basisStateId", a["nextStateId"]}});
    c.require(k["goalTexts"] == json::array({"⊢ 2 ≤ 3", "⊢ 3 ≤ 5"}), "resumed goals: " + k["goalTexts"].dump());
    // manual mode: the second goal stays dormant until resumed
    auto d1 = cl.ok("goal.tactic", {{"stateId", k["nextStateId"]}, {"tactic", "decide"}});
    c.require(d1["goals"].empty(), "decide left goals");
    auto k2 = cl.ok("goal.continue", {{"targetStateId", d1["nextStateId"]}, {"basisStateId", k["nextStateId"]}});
    c.require(k2["goalTexts"] == json::array({"⊢ 3 ≤ 5"}), "second resume: " + k2["goalTexts"].dump());
    auto d2 = cl.ok("goal.tactic", {{"stateId", k2["nextStateId"]}, {"tactic", "decide"}});
    auto pr = cl.ok("goal.print", {{"stateId", d2["nextStateId"]}});
    c.require(pr["goals"].empty() && pr["solved"] == true, "not solved or soundness gate failed");
    return c;
}

check calc_partial() {
    check c;
    auto r = process_file("calc.mt");
    std::string want = slurp(root / "tests" / "golden" / "calc_remainder.txt");
    bool found = false;
    for (auto const &inv : r.invocations)
        if (inv.tactic == "calc a + b = a + a := sorry") {
            found = true;
            std::string got = inv.goal_after;
            if (auto p = got.find("⊢"); p != std::string::npos)
                got.replace(p, std::string("⊢").size(), "|-");
            c.require(got == trim_nl(want), "remainder goal: " + inv.goal_after);
        }
    c.require(found, "no invocation for the first calc step");
    return c;
}

check have_listing() {
    check c;
    auto r = process_file("have.mt");
    c.require(sorries_text(r) == trim_nl(slurp(root / "tests" / "golden" / "have_goals.txt")),
              "goals: " + sorries_text(r));
    return c;
}

check add_comm() {
    check c;
    auto r = process_file("add_comm.mt");
    c.require(r.sorries.size() == 6, std::to_string(r.sorries.size()) + " sorries");
    c.require(sorries_text(r) == trim_nl(slurp(root / "tests" / "golden" / "add_comm_sorries.txt")),
              "placeholder goals differ");
    for (auto const &g : r.sorries) {
        bool accepted = false;
        for (auto const &t : search::default_candidates(g.state, g.goal)) {
            try {
                tactic::run_tactic(g.state, g.goal, t);
                accepted = true;
                break;
            } catch (exception const &) {
            }
        }
        c.require(accepted, "handle rejects every tactic: " + g.target);
    }
    return c;
}

check triple() {
    check c;
    auto r = process_file("or_comm.mt");
    json want = json::parse(slurp(root / "tests" / "golden" / "or_comm_triple.json"));
    c.require(!r.invocations.empty(), "no triples");
    if (!c.ok)
        return c;
    auto const &t = r.invocations.front();
    json got = {{"goalBefore", t.goal_before}, {"goalAfter", t.goal_after}, {"tactic", t.tactic}};
    c.require(got == want, "first triple: " + got.dump());
    c.require(r.messages.empty(), "file has messages");
    return c;
}

check suite(suites::outcome const &o, std::size_t n) {
    check c;
    c.require(o.passed == n && o.all(), std::to_string(o.passed) + "/" + std::to_string(n) + "; " + o.first_failure);
    return c;
}

goal_state start(std::string const &stmt) {
    meta_store store;
    term t = frontend::elab_statement(env0(), stmt, store);
    return state_init(env0(), t, {}, store);
}

check mcts() {
    check c;
    search::mcts_config cfg;
    cfg.max_iterations = mcts_iterations;
    cfg.seed = 0;
    auto a = search::mcts_run(start(or_comm_stmt), cfg), b = search::mcts_run(start(or_comm_stmt), cfg);
    c.require(a.solved && sound(a.result.state), "or-commutativity not solved");
    c.require(a.result.stats.log == b.result.stats.log, "or-commutativity logs differ between runs");

    std::vector<fs::path> files;
    for (auto const &e : fs::directory_iterator(root / "data" / "minibench"))
        if (e.path().extension() == ".mt")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    c.require(files.size() == 20, std::to_string(files.size()) + " benchmark problems");
    std::size_t solved = 0;
    for (auto const &f : files) {
        auto r = frontend::process(slurp(f), env0());
        if (r.sorries.size() != 1) {
            c.require(false, f.filename().string() + " does not have exactly one placeholder");
            continue;
        }
        auto const &g = r.sorries.front();
        auto x = search::mcts_run(g.state, cfg), y = search::mcts_run(g.state, cfg);
        c.require(x.result.stats.log == y.result.stats.log && x.solved == y.solved,
                  f.filename().string() + ": runs differ");
        solved += x.solved && sound(x.result.state);
    }
    c.require(solved >= bench_required, std::to_string(solved) + "/20 solved");
    if (c.ok)
        c.why = std::to_string(solved) + "/20";
    return c;
}

check fuzz() {
    check c;
    fs::path req = root / "tests" / "golden" / "fuzz_requests.jsonl";
    std::string want = slurp(root / "tests" / "golden" / "fuzz_responses.jsonl");
    std::size_t commands = 0;
    {
        std::istringstream in(slurp(req));
        for (std::string l; std::getline(in, l);)
            ++commands;
    }
    c.require(commands == fuzz_commands, std::to_string(commands) + " commands in transcript");
    std::string cmd = std::string("\"") + METATAC_REPL_PATH + "\" < \"" + req.string() + "\"";
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) {
        c.require(false, "cannot start server");
        return c;
    }
    std::string got;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;)
        got.append(buf, n);
    int status = pclose(p);
    c.require(status == 0, "server exit status " + std::to_string(status));
    c.require(got == want, "responses differ from the recording");
    return c;
}

} // namespace

int main() {
    struct criterion {
        int n;
        char const *name;
        double limit; // seconds, 0 = none
        std::function<check()> run;
    };
    std::vector<criterion> all = {
        {1, "or-commutativity proof tree replay", replay_seconds, proof_tree},
        {2, "coupled le_trans goals and continue", replay_seconds, coupled_le},
        {3, "partial calc remainder", 0, calc_partial},
        {4, "have listing goals", 0, have_listing},
        {5, "add_comm placeholder extraction", 0, add_comm},
        {6, "tactic triple extraction", 0, triple},
        {7, "soundness of generated proofs", soundness_seconds,
         [] { return suite(suites::soundness(env0(), soundness_cases, 2), soundness_cases); }},
        {8, "automatic and manual mode agree", 0,
         [] { return suite(suites::mode_equivalence(env0(), mode_cases, 3), mode_cases); }},
        {9, "MCTS determinism and benchmark", mcts_seconds, mcts},
        {10, "coupling groups match brute force", 0,
         [] {
             auto o = suites::coupling(env0(), coupling_cases, 4);
             return suite(o, o.total);
         }},
        {11, "print/parse round-trips", 0,
         [] { return suite(suites::round_trips(env0(), roundtrip_cases, 1), roundtrip_cases); }},
        {12, "protocol fuzz transcript replay", 0, fuzz},
    };
    int failed = 0;
    for (auto const &cr : all) {
        auto t0 = std::chrono::steady_clock::now();
        check c;
        try {
            c = cr.run();
        } catch (std::exception const &e) {
            c.ok = false;
            c.why = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit > 0 && secs >= cr.limit && c.ok) {
            c.ok = false;
            c.why = "over the time limit";
        }
        failed += !c.ok;
        char time[32];
        std::snprintf(time, sizeof time, "%.3fs", secs);
        std::cout << (c.ok ? "PASS " : "FAIL ") << cr.n << " " << cr.name << " (" << time
                  << (cr.limit > 0 ? " < " + std::to_string(static_cast<int>(cr.limit)) + "s" : std::string()) << ")"
                  << (c.why.empty() ? "" : ": " + c.why) << "\n";
    }
    return failed;
}
