/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <doctest.h>
#include <random>
#include "metatac/search/search.h"
#include "support/helpers.h"

using namespace metatac;
using namespace metatac::search;
using namespace metatac::test;

namespace {

char const *or_comm_stmt = "forall (p q : Prop), p \\/ q -> q \\/ p";

bool has(std::vector<std::string> const &v, std::string const &x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::string target_of(goal_state const &s, mvar_id g) {
    return frontend::pp(s.store.instantiate(s.goal(g).target), s.goal(g).ctx, {}, &s.env);
}

} // namespace

TEST_CASE("default candidates") {
    auto s = start(or_comm_stmt);
    auto c = default_candidates(s, s.goals.front());
    REQUIRE_FALSE(c.empty());
    CHECK(c.front() == "intro p");

    auto s2 = step(step(step(step(s, "intro p"), "intro q"), "intro h"), "cases h");
    auto c2 = default_candidates(s2, s2.goals.front());
    CHECK(show(s2, s2.goals.front()) == "p q : Prop\nh_p : p\n⊢ q ∨ p");
    CHECK(has(c2, "apply Or.inr"));
    CHECK(has(c2, "apply Or.inl"));

    auto t = start("True");
    auto c3 = default_candidates(t, t.goals.front());
    CHECK(has(c3, "exact True.intro"));
    CHECK(has(c3, "decide"));

    CHECK(default_candidates(s2, s2.goals.front(), 2).size() == 2);
    // deterministic
    CHECK(default_candidates(s2, s2.goals.front()) == c2);
}

TEST_CASE("best-first search") {
    auto r = best_first(start(or_comm_stmt), policy{}, 200);
    CHECK(r.stats.nodes <= 200);
    CHECK(sound(r.state));
    // the hand-written script proves the same statement
    auto s = start(or_comm_stmt);
    for (auto t : {"intro p", "intro q", "intro h", "cases h", "apply Or.inr", "exact h_p", "apply Or.inl", "exact h_q"})
        s = step(s, t);
    CHECK(sound(s));
    type_checker tc(env0(), {});
    CHECK(tc.is_def_eq(tc.infer(r.proof), tc.infer(root_proof(s))));

    auto t = best_first(start("True"), policy{}, 5);
    CHECK(t.stats.nodes == 1);

    try {
        best_first(start("False"), policy{}, 100);
        FAIL("expected BudgetExhausted");
    } catch (exception const &e) {
        CHECK(e.kind() == error_kind::budget_exhausted);
    }
}

TEST_CASE("coupled goals are solved in id order") {
    // only offer le_trans at the root, as in the manual-mode walkthrough
    callback_policy p(nullptr, [](goal_state const &s, mvar_id g) {
        if (target_of(s, g) == "2 ≤ 5")
            return std::vector<std::string>{"apply Nat.le_trans"};
        return default_candidates(s, g);
    });
    auto s = start("2 <= 5");
    auto r1 = tactic::run_tactic(s, s.goals.front(), "apply Nat.le_trans");
    REQUIRE(r1.coupling.size() == 1);
    CHECK(p.choose_goal(r1.next) == *std::min_element(r1.next.goals.begin(), r1.next.goals.end()));
    auto r = best_first(s, p, 500);
    CHECK(r.script.front() == "apply Nat.le_trans");
    CHECK(sound(r.state));
}

TEST_CASE("mcts solves and is reproducible") {
    mcts_config cfg;
    cfg.seed = 0;
    cfg.c_uct = 1.414;
    auto a = mcts_run(start(or_comm_stmt), cfg);
    auto b = mcts_run(start(or_comm_stmt), cfg);
    REQUIRE(a.solved);
    CHECK(sound(a.result.state));
    CHECK(a.result.stats.log == b.result.stats.log);
    CHECK(a.result.stats.tactic_calls == b.result.stats.tactic_calls);
    CHECK(a.tree.nodes == b.tree.nodes);
    CHECK(a.result.script == b.result.script);

    auto d = mcts_run(start("2 <= 3"), cfg);
    REQUIRE(d.solved);
    CHECK(d.result.stats.iterations == 1);

    cfg.max_iterations = 5;
    try {
        mcts_search(start("forall (p q : Prop), p \\/ q -> p /\\ q"), cfg);
        FAIL("expected BudgetExhausted");
    } catch (exception const &e) {
        CHECK(e.kind() == error_kind::budget_exhausted);
    }
    auto f = mcts_run(start("forall (p q : Prop), p \\/ q -> p /\\ q"), cfg);
    CHECK(f.result.stats.iterations <= 5);
}

TEST_CASE("tree visits add up after any number of iterations") {
    for (char const *stmt : {"forall (p q : Prop), p \\/ q -> p /\\ q", "forall (p q r : Prop), (p -> q) -> r",
                             "exists x, x + 1 = 0", "forall (a b : Nat), a = b -> a + 1 = b"}) {
        for (std::uint64_t n : {1u, 2u, 3u, 7u, 20u, 60u}) {
            mcts_config cfg;
            cfg.max_iterations = n;
            cfg.seed = n;
            auto r = mcts_run(start(stmt), cfg);
            CHECK(r.tree.consistent);
            if (r.solved)
                CHECK(sound(r.result.state));
        }
    }
}

TEST_CASE("uct argmax is invariant under joint scaling") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t n = 1 + rng() % 6;
        std::vector<std::pair<double, std::uint64_t>> ch;
        std::uint64_t parent = 1;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t v = 1 + rng() % 20;
            double tot = static_cast<double>(rng() % (v + 1));
            ch.emplace_back(tot, v);
            parent += v;
        }
        double c = 0.25 + static_cast<double>(rng() % 16) / 8;
        std::size_t base = uct_select(ch, parent, c);
        for (double k : {0.5, 2.0, 4.0, 8.0}) {
            auto scaled = ch;
            for (auto &x : scaled)
                x.first *= k;
            CHECK(uct_select(scaled, parent, c * k) == base);
        }
    }
}
