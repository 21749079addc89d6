/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <sstream>
#include "gen.h"
#include "metatac/frontend/elab.h"
#include "metatac/frontend/pp.h"
#include "metatac/frontend/sexp.h"
#include "metatac/frontend/syntax.h"
#include "metatac/kernel/type_checker.h"

// Property suites: each returns how many of `n` generated cases passed, plus the first failure.
namespace metatac::suites {

struct outcome {
    std::size_t passed = 0, total = 0;
    std::string first_failure;

    bool all() const { return total > 0 && passed == total; }
    void record(bool ok, std::string const &what) {
        ++total;
        if (ok)
            ++passed;
        else if (first_failure.empty())
            first_failure = what;
    }
};

inline goal_state start(environment const &env, std::string const &stmt) {
    meta_store store;
    term t = frontend::elab_statement(env, stmt, store);
    return state_init(env, t, {}, store);
}

/** \brief pp(all) then parse is defeq; sexp print then parse is identical. */
inline outcome round_trips(environment const &env, std::size_t n, std::uint64_t seed) {
    gen::rng_t r(seed);
    outcome o;
    frontend::pp_options all;
    all.all = true;
    for (std::size_t i = 0; i < n; ++i) {
        gen::term_gen g(r);
        term t = g.any(1 + gen::pick(r, 4));
        std::string s = frontend::pp(t, {}, all, &env);
        bool ok = false;
        try {
            meta_store store;
            auto stx = frontend::parse_term_string(s);
            frontend::elaborator el(env, store, {}, s);
            term back = store.instantiate(el.elab(*stx));
            type_checker tc(env, {});
            ok = !back.has_mvar() && tc.is_def_eq(back, t);
            std::string sx = frontend::sexp_print(t);
            ok = ok && is_identical(frontend::sexp_parse(sx), t) && frontend::sexp_print(frontend::sexp_parse(sx)) == sx;
        } catch (std::exception const &e) {
            s += std::string("  [") + e.what() + "]";
        }
        o.record(ok, s);
    }
    return o;
}

/** \brief Generated provable goals: the script solves them and the root proof re-checks. */
inline outcome soundness(environment const &env, std::size_t n, std::uint64_t seed) {
    gen::rng_t r(seed);
    gen::goal_gen gg(r);
    outcome o;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = gg.next(1 + gen::pick(r, 4));
        bool ok = false;
        std::string why = g.statement;
        try {
            goal_state s = gen::run_automatic(start(env, g.statement), g.script);
            ok = is_solved(s) && sound(s);
        } catch (std::exception const &e) {
            why += std::string("  [") + e.what() + "]";
        }
        o.record(ok, why);
    }
    return o;
}

/** \brief Automatic mode and manual mode with continuations build the same proof. */
inline outcome mode_equivalence(environment const &env, std::size_t n, std::uint64_t seed) {
    gen::rng_t r(seed);
    gen::goal_gen gg(r);
    outcome o;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = gg.next(2 + gen::pick(r, 3));
        bool ok = false;
        std::string why = g.statement;
        try {
            goal_state a = gen::run_automatic(start(env, g.statement), g.script);
            goal_state m = gen::run_manual(start(env, g.statement), g.script);
            ok = is_solved(a) && is_solved(m) && root_proof(a) == root_proof(m) && sound(m);
        } catch (std::exception const &e) {
            why += std::string("  [") + e.what() + "]";
        }
        o.record(ok, why);
    }
    return o;
}

/** \brief Engine coupling groups equal the brute-force connected components. */
inline outcome coupling(environment const &env, std::size_t n, std::uint64_t seed) {
    gen::rng_t r(seed);
    outcome o;
    std::size_t coupled = 0;
    for (std::size_t i = 0; i < n; ++i) {
        goal_state s = gen::coupling_instance(env, r, [&](std::string const &st) { return start(env, st); });
        auto a = gen::engine_components(s), b = gen::brute_force_components(s);
        for (auto const &c : a)
            coupled += c.size() >= 2;
        o.record(a == b, "instance " + std::to_string(i));
    }
    // the generator must actually produce coupled goals
    o.record(coupled >= n / 4, "only " + std::to_string(coupled) + " coupled groups generated");
    return o;
}

} // namespace metatac::suites
