/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <doctest.h>
#include "metatac/frontend/process.h"
#include "metatac/kernel/decide.h"
#include "support/gen.h"
#include "support/helpers.h"

using namespace metatac;
using namespace metatac::test;
namespace bi = metatac::builtin;

namespace {

// arithmetic expression together with its value computed directly on cpp_int
struct valued {
    term t;
    nat v;
};

valued arith(gen::rng_t &r, unsigned d) {
    switch (d == 0 ? gen::pick(r, 2) : gen::pick(r, 5)) {
    case 0: {
        nat n = gen::pick(r, 30);
        return {mk_lit(n), n};
    }
    case 1: {
        // occasionally well beyond 64 bits
        nat n = nat(r()) * nat(r()) * (gen::pick(r, 2) ? nat(r()) : nat(1));
        return {mk_lit(n), n};
    }
    case 2: {
        auto a = arith(r, d - 1);
        return {bi::nat_succ(a.t), a.v + 1};
    }
    case 3: {
        auto a = arith(r, d - 1), b = arith(r, d - 1);
        return {bi::nat_add(a.t, b.t), a.v + b.v};
    }
    default: {
        auto a = arith(r, d - 1), b = arith(r, d - 1);
        return {bi::nat_mul(a.t, b.t), a.v * b.v};
    }
    }
}

struct valued_prop {
    term t;
    bool v;
};

valued_prop comparison(gen::rng_t &r, unsigned d) {
    auto a = arith(r, d);
    // bias towards close values so equalities and boundaries come up
    valued b = gen::pick(r, 3) == 0 ? valued{mk_lit(a.v + gen::pick(r, 3)), a.v + gen::pick(r, 1)} : arith(r, d);
    if (b.t.is_lit())
        b.v = b.t.lit_value();
    switch (gen::pick(r, 3)) {
    case 0: return {bi::mk_eq(bi::nat(), a.t, b.t), a.v == b.v};
    case 1: return {bi::nat_le(a.t, b.t), a.v <= b.v};
    default: return {bi::nat_lt(a.t, b.t), a.v < b.v};
    }
}

valued_prop connective(gen::rng_t &r, unsigned d) {
    if (d == 0)
        return comparison(r, 2);
    auto a = connective(r, d - 1), b = connective(r, d - 1);
    switch (gen::pick(r, 5)) {
    case 0: return {bi::mk_and(a.t, b.t), a.v && b.v};
    case 1: return {bi::mk_or(a.t, b.t), a.v || b.v};
    case 2: return {bi::mk_not(a.t), !a.v};
    case 3: return {bi::mk_iff(a.t, b.t), a.v == b.v};
    default: return {mk_arrow(a.t, b.t), !a.v || b.v};
    }
}

decide_result expect(bool b) { return b ? decide_result::is_true : decide_result::is_false; }

} // namespace

TEST_CASE("decide agrees with big-integer arithmetic") {
    gen::rng_t r(11);
    for (int i = 0; i < 500; ++i) {
        auto c = comparison(r, 1 + gen::pick(r, 3));
        INFO(frontend::pp(c.t, {}, {}, &env0()));
        CHECK(eval_decide(env0(), c.t) == expect(c.v));
    }
    for (int i = 0; i < 200; ++i) {
        auto c = connective(r, gen::pick(r, 3));
        CHECK(eval_decide(env0(), c.t) == expect(c.v));
    }
}

TEST_CASE("decide is stuck on open or quantified propositions") {
    CHECK(eval_decide(env0(), mk_pi("n", bi::nat(), bi::nat_le(mk_lit(0), mk_bvar(0)))) == decide_result::stuck);
    meta_store st;
    mvar_id m = st.mk_mvar({}, bi::nat(), mvar_kind::natural);
    CHECK(eval_decide(env0(), bi::nat_le(mk_mvar(m), mk_lit(3))) == decide_result::stuck);
    CHECK(eval_decide(env0(), bi::mk_exists(bi::nat(), "x", bi::mk_eq(bi::nat(), mk_bvar(0), mk_lit(1)))) == decide_result::stuck);
}

TEST_CASE("DecideCert is accepted exactly for true closed propositions") {
    type_checker tc(env0(), {});
    term yes = bi::nat_lt(bi::nat_mul(mk_lit(12), mk_lit(12)), mk_lit(145));
    term no = bi::nat_lt(bi::nat_mul(mk_lit(12), mk_lit(12)), mk_lit(144));
    CHECK(tc.infer(bi::mk_decide_cert(yes)) == yes);
    CHECK_THROWS_AS(tc.infer(bi::mk_decide_cert(no)), type_error);
    CHECK_THROWS_AS(tc.infer(bi::mk_decide_cert(mk_lit(3))), type_error);
    CHECK_THROWS_AS(tc.infer(bi::mk_decide_cert(mk_pi("n", bi::nat(), bi::nat_le(mk_lit(0), mk_bvar(0))))), type_error);
    // a cert for one proposition does not prove another
    CHECK_FALSE(tc.is_def_eq(tc.infer(bi::mk_decide_cert(yes)), no));
}

TEST_CASE("reduction preserves types") {
    gen::rng_t r(12);
    for (int i = 0; i < 500; ++i) {
        gen::term_gen g(r);
        term t = g.any(1 + gen::pick(r, 4));
        type_checker tc(env0(), {});
        term ty = tc.infer(t);
        INFO(frontend::pp(t, {}, {}, &env0()));
        CHECK(tc.is_def_eq(tc.infer(tc.whnf(t)), ty));
        term n = tc.normalize(t);
        CHECK(tc.is_def_eq(tc.infer(n), ty));
        CHECK(tc.is_def_eq(n, t));
    }
}

TEST_CASE("closed Nat terms evaluate to the oracle value") {
    gen::rng_t r(13);
    for (int i = 0; i < 300; ++i) {
        auto a = arith(r, 1 + gen::pick(r, 3));
        type_checker tc(env0(), {});
        auto v = tc.eval_nat(a.t);
        REQUIRE(v);
        CHECK(*v == a.v);
        CHECK(tc.is_def_eq(a.t, mk_lit(a.v)));
        CHECK_FALSE(tc.is_def_eq(a.t, mk_lit(a.v + 1)));
    }
}

TEST_CASE("add_decl is persistent and checked") {
    environment e0 = env0();
    declaration d;
    d.name = "two";
    d.type = bi::nat();
    d.value = bi::nat_succ(mk_lit(1));
    d.kind = decl_kind::definition;
    environment e1 = add_decl(e0, d);
    CHECK(e1.contains("two"));
    CHECK_FALSE(e0.contains("two"));
    CHECK(e1.size() == e0.size() + 1);
    type_checker tc(e1, {});
    CHECK(tc.is_def_eq(mk_const("two"), mk_lit(2)));

    try {
        add_decl(e1, d);
        FAIL("duplicate accepted");
    } catch (exception const &ex) {
        CHECK(ex.kind() == error_kind::duplicate_name);
    }

    declaration bad;
    bad.name = "bad";
    bad.type = bi::mk_eq(bi::nat(), mk_lit(1), mk_lit(2));
    bad.value = mk_app(mk_const("Eq.refl"), {bi::nat(), mk_lit(1)});
    bad.kind = decl_kind::theorem;
    try {
        add_decl(e1, bad);
        FAIL("ill-typed value accepted");
    } catch (exception const &ex) {
        CHECK(ex.kind() == error_kind::type_error);
    }
    CHECK_FALSE(e1.contains("bad"));

    declaration notype;
    notype.name = "notype";
    notype.type = mk_lit(3);
    CHECK_THROWS_AS(add_decl(e1, notype), type_error);

    declaration unknown;
    unknown.name = "u";
    unknown.type = mk_const("Nope");
    try {
        add_decl(e1, unknown);
        FAIL("unknown constant accepted");
    } catch (exception const &ex) {
        CHECK(ex.kind() == error_kind::unknown_constant);
    }
}

TEST_CASE("successful unification yields definitionally equal sides") {
    gen::rng_t r(14);
    int solved = 0;
    for (int i = 0; i < 300; ++i) {
        auto a = arith(r, 2), b = arith(r, 2), c = arith(r, 1);
        meta_store st;
        term m1 = mk_mvar(st.mk_mvar({}, bi::nat(), mvar_kind::natural));
        term m2 = mk_mvar(st.mk_mvar({}, bi::nat(), mvar_kind::natural));
        term lhs = bi::nat_add(a.t, bi::nat_mul(b.t, c.t));
        term rhs;
        switch (gen::pick(r, 4)) {
        case 0: rhs = bi::nat_add(m1, bi::nat_mul(b.t, m2)); break;
        case 1: rhs = bi::nat_add(m1, m2); break;
        case 2: rhs = m1; break;
        default: rhs = bi::nat_add(m1, bi::nat_mul(m2, m2)); break;
        }
        auto u = unify(env0(), {}, lhs, rhs, st);
        if (!u)
            continue;
        ++solved;
        term l = u.store->instantiate(lhs), rr = u.store->instantiate(rhs);
        CHECK_FALSE(rr.has_mvar());
        type_checker tc(env0(), {});
        CHECK(tc.is_def_eq(l, rr));
    }
    CHECK(solved >= 150);
}

TEST_CASE("unification refuses the occurs check") {
    meta_store st;
    mvar_id m = st.mk_mvar({}, bi::nat(), mvar_kind::natural);
    auto u = unify(env0(), {}, mk_mvar(m), bi::nat_succ(mk_mvar(m)), st);
    CHECK_FALSE(u);
    CHECK(u.failure == unify_failure::occurs_check);
}

TEST_CASE("tactics never mutate their input state") {
    gen::rng_t r(15);
    gen::goal_gen gg(r);
    char const *extra[] = {"intro z", "rfl", "decide", "simp", "apply And.intro", "exact True.intro", "cases h0",
                           "induction n0", "exists 2", "frobnicate"};
    for (int i = 0; i < 100; ++i) {
        auto g = gg.next(1 + gen::pick(r, 3));
        goal_state s = start(g.statement);
        for (auto const &tac : g.script) {
            std::string before = show_all(s);
            auto version = s.store.version();
            auto size = s.store.size();
            term root = s.store.instantiate(mk_mvar(s.root));
            // a failing tactic first, then the scripted one
            try {
                tactic::run_tactic(s, s.goals.front(), extra[gen::pick(r, 10)], gen::pick(r, 2));
            } catch (exception const &) {
            }
            goal_state next = tactic::run_tactic(s, s.goals.front(), tac, true).next;
            CHECK(show_all(s) == before);
            CHECK(s.store.version() == version);
            CHECK(s.store.size() == size);
            CHECK(is_identical(s.store.instantiate(mk_mvar(s.root)), root));
            s = next;
        }
        CHECK(is_solved(s));
    }
}

TEST_CASE("every sorry in a file yields one placeholder goal") {
    gen::rng_t r(16);
    for (int i = 0; i < 40; ++i) {
        std::string src;
        std::size_t expected = 0;
        unsigned units = 1 + gen::pick(r, 4);
        for (unsigned u = 0; u < units; ++u) {
            src += "theorem t" + std::to_string(u) + " (n : Nat) : n + 0 = n /\\ 0 <= n := by\n";
            unsigned haves = gen::pick(r, 3);
            for (unsigned h = 0; h < haves; ++h) {
                bool s = gen::pick(r, 2);
                expected += s;
                std::string k = std::to_string(h + 1);
                src += "  have q" + std::to_string(h) + " : 0 <= " + k + " := " + (s ? "sorry" : "Nat.zero_le " + k) +
                       "\n";
            }
            src += "  apply And.intro\n";
            bool a = gen::pick(r, 2), b = gen::pick(r, 2);
            src += a ? "  sorry\n" : "  rfl\n";
            src += b ? "  sorry\n" : "  apply Nat.zero_le\n";
            expected += a + b;
        }
        auto res = frontend::process(src, env0());
        INFO(src);
        CHECK(res.sorries.size() == expected);
        for (auto const &m : res.messages)
            CHECK(m.severity == "warning");
        for (auto const &sg : res.sorries)
            CHECK(sg.state.goals.size() == 1);
    }
}
