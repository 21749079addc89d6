/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>
#include "metatac/kernel/builtins.h"
#include "metatac/meta/goal_state.h"
#include "metatac/tactic/tactic.h"

// Random generators shared by the property tests and the acceptance binary.
namespace metatac::gen {

using rng_t = std::mt19937_64;

inline unsigned pick(rng_t &r, unsigned n) { return static_cast<unsigned>(r() % n); }

/* ---------- closed well-typed terms ---------- */

class term_gen {
    rng_t &m_r;
    // binders in scope, innermost last: true = Nat variable, false = Prop variable
    std::vector<bool> m_scope;
    unsigned m_fresh = 0;

    std::string name() { return "x" + std::to_string(m_fresh++); }

    std::optional<term> var(bool nat) {
        std::vector<unsigned> idx;
        for (std::size_t i = 0; i < m_scope.size(); ++i)
            if (m_scope[i] == nat)
                idx.push_back(static_cast<unsigned>(m_scope.size() - 1 - i));
        if (idx.empty())
            return std::nullopt;
        return mk_bvar(idx[pick(m_r, idx.size())]);
    }

    template <class F>
    term bind(bool nat, F body) {
        m_scope.push_back(nat);
        term b = body();
        m_scope.pop_back();
        return b;
    }

public:
    explicit term_gen(rng_t &r) : m_r(r) {}

    term nat(unsigned d) {
        unsigned k = pick(m_r, d == 0 ? 3 : 8);
        switch (k) {
        case 0: return mk_lit(pick(m_r, 12));
        case 1:
            if (auto v = var(true))
                return *v;
            return mk_lit(pick(m_r, 5));
        case 2: return builtin::nat_zero();
        case 3: return builtin::nat_succ(nat(d - 1));
        case 4: return builtin::nat_add(nat(d - 1), nat(d - 1));
        case 5: return builtin::nat_mul(nat(d - 1), nat(d - 1));
        case 6: { // beta redex
            std::string n = name();
            term body = bind(true, [&] { return nat(d - 1); });
            return mk_app(mk_lambda(n, builtin::nat(), body), nat(d - 1));
        }
        default: {
            std::string n = name();
            term v = nat(d - 1);
            term body = bind(true, [&] { return nat(d - 1); });
            return mk_let(n, builtin::nat(), v, body);
        }
        }
    }

    term prop(unsigned d) {
        unsigned k = pick(m_r, d == 0 ? 4 : 14);
        switch (k) {
        case 0: return builtin::mk_true();
        case 1: return builtin::mk_false();
        case 2:
            if (auto v = var(false))
                return *v;
            return builtin::mk_true();
        case 3: return builtin::nat_le(nat(0), nat(0));
        case 4: return builtin::mk_and(prop(d - 1), prop(d - 1));
        case 5: return builtin::mk_or(prop(d - 1), prop(d - 1));
        case 6: return builtin::mk_not(prop(d - 1));
        case 7: return builtin::mk_iff(prop(d - 1), prop(d - 1));
        case 8: return mk_arrow(prop(d - 1), prop(d - 1));
        case 9: {
            std::string n = name();
            return mk_pi(n, builtin::nat(), bind(true, [&] { return prop(d - 1); }));
        }
        case 10: {
            std::string n = name();
            return builtin::mk_exists(builtin::nat(), n, bind(true, [&] { return prop(d - 1); }));
        }
        case 11: {
            std::string n = name();
            return mk_pi(n, mk_prop(), bind(false, [&] { return prop(d - 1); }));
        }
        case 12: return builtin::mk_eq(builtin::nat(), nat(d - 1), nat(d - 1));
        default: return builtin::nat_lt(nat(d - 1), nat(d - 1));
        }
    }

    /** \brief Props, numerals and functions on Nat. */
    term any(unsigned d) {
        switch (pick(m_r, 4)) {
        case 0: return nat(d);
        case 1: {
            std::string n = name();
            return mk_lambda(n, builtin::nat(), bind(true, [&] { return nat(d); }));
        }
        case 2: {
            std::string n = name();
            return mk_lambda(n, mk_prop(), bind(false, [&] { return prop(d); }));
        }
        default: return prop(d);
        }
    }
};

/* ---------- provable goals with a proof script ---------- */

struct scripted_goal {
    std::string statement;
    std::vector<std::string> script; // every tactic acts on the first goal
};

class goal_gen {
    rng_t &m_r;
    unsigned m_atoms;
    std::vector<std::string> m_hyps; // hypothesis statements, named h0, h1, ...
    unsigned m_local = 0;

    std::string atom() { return "p" + std::to_string(pick(m_r, m_atoms)); }

    std::string hyp(std::string const &s) {
        m_hyps.push_back(s);
        return "h" + std::to_string(m_hyps.size() - 1);
    }

    std::string noise(unsigned d) {
        if (d == 0 || pick(m_r, 2) == 0)
            return atom();
        return "(" + noise(d - 1) + (pick(m_r, 2) ? " /\\ " : " \\/ ") + noise(d - 1) + ")";
    }

    // returns the proposition; appends its proof to `s`
    std::string prove(unsigned d, std::vector<std::string> &s) {
        unsigned k = d == 0 ? pick(m_r, 5) : d >= 2 ? 5 + pick(m_r, 6) : pick(m_r, 11);
        switch (k) {
        case 0: {
            std::string p = atom();
            s.push_back("exact " + hyp(p));
            return p;
        }
        case 1: s.push_back("exact True.intro"); return "True";
        case 2: {
            unsigned a = pick(m_r, 20), b = a + pick(m_r, 20);
            s.push_back("decide");
            return std::to_string(a) + " <= " + std::to_string(b);
        }
        case 3: {
            unsigned w = pick(m_r, 15), c = pick(m_r, 10);
            s.push_back("exists " + std::to_string(w));
            return "(exists x, x + " + std::to_string(c) + " = " + std::to_string(w + c) + ")";
        }
        case 4: {
            unsigned a = pick(m_r, 9), b = pick(m_r, 9);
            s.push_back("rfl");
            return std::to_string(a) + " + " + std::to_string(b) + " = " + std::to_string(a + b);
        }
        case 5:
        case 6: {
            std::vector<std::string> sa, sb;
            std::string a = prove(d - 1, sa), b = prove(d - 1, sb);
            s.push_back("apply And.intro");
            s.insert(s.end(), sa.begin(), sa.end());
            s.insert(s.end(), sb.begin(), sb.end());
            return "(" + a + " /\\ " + b + ")";
        }
        case 7: {
            std::vector<std::string> sa;
            std::string a = prove(d - 1, sa);
            bool left = pick(m_r, 2);
            s.push_back(left ? "apply Or.inl" : "apply Or.inr");
            s.insert(s.end(), sa.begin(), sa.end());
            return left ? "(" + a + " \\/ " + noise(1) + ")" : "(" + noise(1) + " \\/ " + a + ")";
        }
        case 8: { // backward chaining through a hypothesis
            std::vector<std::string> sa;
            std::string a = prove(d - 1, sa);
            std::string p = atom();
            s.push_back("apply " + hyp("(" + a + " -> " + p + ")"));
            s.insert(s.end(), sa.begin(), sa.end());
            return p;
        }
        case 9: { // implication; the antecedent may be used
            std::string x = noise(1);
            std::string h = "k" + std::to_string(m_local++);
            s.push_back("intro " + h);
            if (pick(m_r, 2)) {
                s.push_back("exact " + h);
                return "(" + x + " -> " + x + ")";
            }
            std::vector<std::string> sb;
            std::string b = prove(d - 1, sb);
            s.insert(s.end(), sb.begin(), sb.end());
            return "(" + x + " -> " + b + ")";
        }
        default: { // universally quantified number that is then ignored or reflexive
            std::string n = "n" + std::to_string(m_local++);
            s.push_back("intro " + n);
            if (pick(m_r, 2)) {
                s.push_back("rfl");
                return "(forall " + n + " : Nat, " + n + " + 0 = " + n + ")";
            }
            std::vector<std::string> sb;
            std::string b = prove(d - 1, sb);
            s.insert(s.end(), sb.begin(), sb.end());
            return "(forall " + n + " : Nat, " + b + ")";
        }
        }
    }

public:
    goal_gen(rng_t &r, unsigned atoms = 3) : m_r(r), m_atoms(atoms) {}

    scripted_goal next(unsigned depth) {
        m_hyps.clear();
        m_local = 0;
        std::vector<std::string> body;
        std::string concl = prove(depth, body);
        scripted_goal g;
        g.statement = "forall (";
        for (unsigned i = 0; i < m_atoms; ++i)
            g.statement += (i ? " p" : "p") + std::to_string(i);
        g.statement += " : Prop), ";
        for (std::size_t i = 0; i < m_hyps.size(); ++i)
            g.statement += m_hyps[i] + " -> ";
        g.statement += concl;
        for (unsigned i = 0; i < m_atoms; ++i)
            g.script.push_back("intro p" + std::to_string(i));
        for (std::size_t i = 0; i < m_hyps.size(); ++i)
            g.script.push_back("intro h" + std::to_string(i));
        g.script.insert(g.script.end(), body.begin(), body.end());
        return g;
    }
};

/* ---------- the two ways of running a linear script ---------- */

inline goal_state run_automatic(goal_state s, std::vector<std::string> const &script) {
    for (auto const &t : script)
        s = tactic::run_tactic(s, s.goals.front(), t, true).next;
    return s;
}

/** \brief Manual mode: siblings go dormant and come back through explicit continuations. */
inline goal_state run_manual(goal_state s, std::vector<std::string> const &script) {
    std::vector<goal_state> bases;
    for (auto const &t : script) {
        while (s.goals.empty() && !bases.empty()) {
            goal_state b = bases.back();
            bases.pop_back();
            try {
                s = continue_state(s, b);
            } catch (exception const &e) {
                if (e.kind() != error_kind::nothing_to_resume)
                    throw;
            }
        }
        if (s.goals.size() > 1)
            bases.push_back(s);
        s = tactic::run_tactic(s, s.goals.front(), t, false).next;
    }
    return s;
}

/* ---------- coupling instances and the brute-force oracle ---------- */

/** \brief A state reached by random le_trans / Exists.intro / And.intro / exact steps. */
inline goal_state coupling_instance(environment const &env, rng_t &r, std::function<goal_state(std::string)> start) {
    std::string stmt;
    unsigned parts = 2 + pick(r, 3);
    for (unsigned i = 0; i < parts; ++i) {
        if (i)
            stmt += " /\\ ";
        if (pick(r, 2)) {
            unsigned a = pick(r, 10);
            stmt += std::to_string(a) + " <= " + std::to_string(a + 2 + pick(r, 10));
        } else {
            stmt += "(exists x, x + " + std::to_string(pick(r, 5)) + " = " + std::to_string(5 + pick(r, 5)) + ")";
        }
    }
    goal_state s = start(stmt);
    (void)env;
    unsigned steps = 2 + pick(r, 8);
    for (unsigned i = 0; i < steps && !s.goals.empty(); ++i) {
        mvar_id g = s.goals[pick(r, s.goals.size())];
        std::vector<std::string> moves = {"apply And.intro", "apply Nat.le_trans", "apply Exists.intro",
                                          "apply Nat.le_succ"};
        // closing a witness removes coupling, so offer it less often
        if (pick(r, 4) == 0)
            moves.push_back("exact 3");
        std::shuffle(moves.begin(), moves.end(), r);
        bool automatic = pick(r, 4) != 0;
        for (auto const &t : moves) {
            try {
                s = tactic::run_tactic(s, g, t, automatic).next;
                break;
            } catch (exception const &) {
            }
        }
    }
    return s;
}

/** \brief Components of the "share an unassigned metavariable" graph, computed pairwise. */
inline std::set<std::set<std::uint64_t>> brute_force_components(goal_state const &s) {
    std::size_t n = s.goals.size();
    std::vector<std::set<std::uint64_t>> mv(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto const &d = s.store.get(s.goals[i]);
        mv[i].insert(s.goals[i].idx);
        auto add = [&](term const &t) {
            for (mvar_id m : collect_mvars(s.store.instantiate(t)))
                if (!s.store.is_assigned(m))
                    mv[i].insert(m.idx);
        };
        add(d.target);
        for (auto const &e : d.ctx.decls()) {
            add(e.type);
            if (e.value)
                add(*e.value);
        }
    }
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (auto m : mv[i])
                if (mv[j].count(m))
                    adj[i][j] = true;
    std::vector<int> comp(n, -1);
    int c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0)
            continue;
        std::vector<std::size_t> stack{i};
        comp[i] = c;
        while (!stack.empty()) {
            auto k = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j)
                if (adj[k][j] && comp[j] < 0) {
                    comp[j] = c;
                    stack.push_back(j);
                }
        }
        ++c;
    }
    std::set<std::set<std::uint64_t>> out;
    for (int k = 0; k < c; ++k) {
        std::set<std::uint64_t> g;
        for (std::size_t i = 0; i < n; ++i)
            if (comp[i] == k)
                g.insert(s.goals[i].idx);
        out.insert(g);
    }
    return out;
}

inline std::set<std::set<std::uint64_t>> engine_components(goal_state const &s) {
    std::set<std::set<std::uint64_t>> out;
    for (auto const &g : coupling_groups(s)) {
        std::set<std::uint64_t> ids;
        for (mvar_id m : g.goals)
            ids.insert(m.idx);
        out.insert(ids);
    }
    return out;
}

} // namespace metatac::gen
