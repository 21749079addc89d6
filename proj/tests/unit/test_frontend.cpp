/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <doctest.h>
#include "metatac/frontend/process.h"
#include "support/helpers.h"

using namespace metatac;
using namespace metatac::frontend;
using metatac::test::env0;

namespace {

char const *add_comm_draft = R"(theorem add_comm : forall n m : Nat, n + m = m + n := by
   intros n m
   induction n with
   | zero =>
     have h_base: 0 + m = m := sorry
     have h_symm: m + 0 = m := sorry
     sorry
   | succ n ih =>
     have h_inductive: n + m = m + n := sorry
     have h_pull_succ_out_from_right: m + Nat.succ n = Nat.succ (m + n) := sorry
     sorry
)";

std::string sorry_text(sorry_goal const &g) { return g.context + "\n|- " + g.target; }

std::size_t count(process_result const &r, std::string const &sev) {
    return std::count_if(r.messages.begin(), r.messages.end(), [&](message const &m) { return m.severity == sev; });
}

} // namespace

TEST_CASE("drafted add_comm yields six placeholder goals") {
    auto r = process(add_comm_draft, env0());
    std::vector<std::string> want = {
        "m : Nat\n|- 0 + m = m",
        "m : Nat\nh_base : 0 + m = m\n|- m + 0 = m",
        "m : Nat\nh_base : 0 + m = m\nh_symm : m + 0 = m\n|- 0 + m = m + 0",
        "m : Nat\nn : Nat\nih : n + m = m + n\n|- n + m = m + n",
        "m : Nat\nn : Nat\nih : n + m = m + n\nh_inductive : n + m = m + n\n|- m + n.succ = (m + n).succ",
        "m : Nat\nn : Nat\nih : n + m = m + n\nh_inductive : n + m = m + n\n"
        "h_pull_succ_out_from_right : m + n.succ = (m + n).succ\n|- n + 1 + m = m + (n + 1)",
    };
    REQUIRE(r.sorries.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(sorry_text(r.sorries[i]) == want[i]);
    CHECK(count(r, "error") == 0);
    CHECK(count(r, "warning") == 1);
    // admitted, so later declarations may use it
    CHECK(r.env.contains("add_comm"));
}

TEST_CASE("placeholder goals are live handles") {
    auto r = process(add_comm_draft, env0());
    REQUIRE(r.sorries.size() == 6);
    auto const &s = r.sorries[1].state; // m + 0 = m
    auto t = tactic::run_tactic(s, s.goals.front(), "rfl");
    CHECK(t.next.goals.empty());
    auto const &s4 = r.sorries[3].state; // closed by ih
    CHECK(tactic::run_tactic(s4, s4.goals.front(), "exact ih").next.goals.empty());
}

TEST_CASE("tactic triples for intro") {
    auto r = process("theorem or_comm : forall (p q : Prop), p \\/ q -> q \\/ p := by\n"
                     "  intro p\n  intro q h\n  cases h with\n"
                     "  | inl hp => exact Or.inr hp\n  | inr hq => exact Or.inl hq\n",
                     env0());
    REQUIRE(r.invocations.size() == 5);
    CHECK(r.invocations[0].goal_before == "⊢ ∀ (p q : Prop), p ∨ q → q ∨ p");
    CHECK(r.invocations[0].goal_after == "p : Prop\n⊢ ∀ (q : Prop), p ∨ q → q ∨ p");
    CHECK(r.invocations[0].tactic == "intro p");
    CHECK(r.invocations[2].tactic == "cases h with\n  | inl hp => exact Or.inr hp\n  | inr hq => exact Or.inl hq");
    CHECK(r.invocations[2].goal_after == "");
    CHECK(r.invocations[3].goal_before == "p q : Prop\nhp : p\n⊢ q ∨ p");
    CHECK(r.messages.empty());
    auto const *d = r.env.find("or_comm");
    REQUIRE(d);
    CHECK(d->kind == decl_kind::theorem);
}

TEST_CASE("consecutive triples chain in a linear script") {
    auto r = process("theorem t : forall (p q : Prop), p -> q -> p /\\ q := by\n"
                     "  intro p q\n  intro hp hq\n  apply And.intro\n  exact hp\n  exact hq\n",
                     env0());
    REQUIRE(r.invocations.size() == 5);
    for (std::size_t i = 0; i + 1 < r.invocations.size(); ++i) {
        auto const &a = r.invocations[i].goal_after;
        auto const &b = r.invocations[i + 1].goal_before;
        if (!a.empty())
            CHECK(a.substr(0, b.size()) == b);
    }
    CHECK(r.messages.empty());
}

TEST_CASE("partial calc and have listings") {
    auto r = process("example (a b c : Nat) : a + b = b + c := by\n"
                     "  calc a + b = a + a := sorry\n"
                     "    _ = b + b := sorry\n"
                     "  sorry\n",
                     env0());
    REQUIRE(r.sorries.size() == 3);
    CHECK(r.sorries[2].target == "b + b = b + c");
    // composite first, then its steps
    REQUIRE(r.invocations.size() == 4);
    CHECK(r.invocations[1].tactic == "calc a + b = a + a := sorry");
    CHECK(r.invocations[1].goal_after == "a b c : Nat\n⊢ a + a = b + c");

    auto h = process("example (n: Nat), n + 0 = 0 + n := by\n\thave h1 : n + 0 = n := sorry\n\tsorry\n", env0());
    REQUIRE(h.sorries.size() == 2);
    CHECK(sorry_text(h.sorries[0]) == "n : Nat\n|- n + 0 = n");
    CHECK(sorry_text(h.sorries[1]) == "n : Nat\nh1 : n + 0 = n\n|- n + 0 = 0 + n");
}

TEST_CASE("let then exists") {
    auto r = process("example : exists x, x + 2 = 8 := by\n  let a := 3 * 2\n  exists a\n", env0());
    CHECK(r.messages.empty());
    REQUIRE(r.invocations.size() == 2);
    CHECK(r.invocations[0].goal_after == "a : Nat := 3 * 2\n⊢ ∃ x, x + 2 = 8");
}

TEST_CASE("conv blocks and nested alternatives") {
    auto r = process("theorem z : forall n : Nat, 0 + n = n := by\n"
                     "  intro n\n"
                     "  induction n with\n"
                     "  | zero => rfl\n"
                     "  | succ k ih =>\n"
                     "    conv lhs =>\n"
                     "      rw [Nat.add_succ, ih]\n"
                     "    rfl\n",
                     env0());
    CHECK(r.messages.empty());
    CHECK(r.env.contains("z"));
}

TEST_CASE("errors stay inside their declaration") {
    auto r = process("theorem bad : 1 = 2 := by\n  rfl\n\n"
                     "theorem open_goal : 1 = 1 /\\ 2 = 2 := by\n  apply And.intro\n  rfl\n\n"
                     "theorem good : 2 = 2 := by\n  rfl\n\n"
                     "theorem bad : True := True.intro\n",
                     env0());
    REQUIRE(r.messages.size() == 2);
    CHECK(r.messages[0].unit == 0);
    REQUIRE(r.messages[0].pos);
    CHECK(r.messages[0].pos->line == 2);
    CHECK(r.messages[1].text.rfind("unsolved goals\n⊢ 2 = 2", 0) == 0);
    CHECK(r.env.contains("good"));
    CHECK(r.env.contains("bad")); // the term-mode one, since the first failed
    CHECK_FALSE(r.env.contains("open_goal"));
}

TEST_CASE("spans are exact source slices") {
    std::string src = "-- lead\ntheorem a : True := by\n  exact True.intro\n\n/- block -/\nexample : 1 = 1 := by rfl\n-- tail\n";
    auto us = parse_file(src);
    REQUIRE(us.size() == 3);
    CHECK(us[0].comments.size() == 1);
    CHECK(us[0].comments[0].text.find("lead") != std::string::npos);
    CHECK(us[1].comments.size() == 1);
    CHECK(us[2].kind == unit_kind::trailer);
    std::size_t prev = 0;
    for (auto const &u : us) {
        CHECK(u.where.begin >= prev);
        prev = u.where.end;
        for (auto const &t : u.tactics)
            CHECK(src.substr(t.where.begin, t.where.end - t.where.begin) == t.text);
    }
    CHECK(us[0].tactics.at(0).text == "exact True.intro");
    CHECK(us[1].tactics.at(0).text == "rfl");
    CHECK(src.substr(us[0].where.begin, us[0].where.end - us[0].where.begin) ==
          "theorem a : True := by\n  exact True.intro");
}

TEST_CASE("parse errors throw") {
    CHECK_THROWS_AS(parse_file("foo bar"), exception);
    CHECK_THROWS_AS(parse_file("theorem x True := by rfl"), exception);
}

TEST_CASE("semicolons split tactics") {
    auto r = process("theorem s : forall (p : Prop), p -> p := by\n  intro p; intro h; exact h\n", env0());
    CHECK(r.messages.empty());
    CHECK(r.invocations.size() == 3);
}
