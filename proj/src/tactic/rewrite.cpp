/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <algorithm>
#include "detail.h"
#include "metatac/kernel/builtins.h"

namespace metatac::tactic {
namespace detail {
namespace {

struct eq_rule {
    term proof; // of alpha-typed `lhs = rhs`, already oriented
    term alpha, lhs, rhs;
};

/* Instantiate the leading binders of `proof`'s type with fresh natural metavariables until an
   equation appears; orient it. */
eq_rule instantiate_rule(tactic_ctx &c, local_context const &ctx, term proof, bool reverse) {
    type_checker tc(c.env, ctx, &c.store);
    term ty = c.store.instantiate(tc.infer(proof));
    for (unsigned i = 0; i < 64; ++i) {
        term w = tc.whnf_core(ty);
        if (is_app_of(w, "Eq", 3)) {
            ty = w;
            break;
        }
        if (!w.is_pi()) {
            w = tc.whnf(ty);
            if (!w.is_pi())
                break;
        }
        mvar_id m = c.store.mk_mvar(ctx, w.binder_type(), mvar_kind::natural, "rw");
        proof = mk_app(proof, mk_mvar(m));
        ty = instantiate(w.binder_body(), mk_mvar(m));
    }
    if (!is_app_of(ty, "Eq", 3))
        c.fail("rewrite failed: the rule is not an equation\n  " + c.show(ty, ctx), error_kind::not_an_equality);
    auto a = get_app_args(ty);
    if (!reverse)
        return {proof, a[0], a[1], a[2]};
    return {mk_app(mk_const("Eq.symm"), {a[0], a[1], a[2], proof}), a[0], a[2], a[1]};
}

/* Abstract every instance of `p` in `e`. Candidates must share `p`'s head and arity; their
   arguments are unified with `p`'s, and the first success fixes `p`'s metavariables. */
std::optional<term> kabstract(tactic_ctx &c, local_context const &ctx, term const &e, term const &p) {
    term const &ph = get_app_fn(p);
    if (ph.is_mvar())
        c.fail("rewrite failed: the pattern is a metavariable\n  " + c.show(p, ctx) + "\n(the rule is too general)",
               error_kind::rewrite_no_match);
    unsigned n = get_app_num_args(p);
    auto pargs = get_app_args(p);
    bool found = false;
    term r = replace(e, [&](term const &s, unsigned off) -> std::optional<term> {
        if (s.has_loose_bvars() || get_app_num_args(s) != n || !(get_app_fn(s) == ph))
            return std::nullopt;
        meta_store saved = c.store;
        auto sargs = get_app_args(s);
        bool ok = true;
        for (unsigned i = 0; ok && i < n; ++i)
            ok = c.unify(ctx, sargs[i], pargs[i]);
        if (!ok) {
            c.store = saved;
            return std::nullopt;
        }
        found = true;
        return mk_bvar(off);
    });
    if (!found)
        return std::nullopt;
    return r;
}

[[noreturn]] void no_match(tactic_ctx &c, local_context const &ctx, term const &l) {
    c.fail("rewrite failed: did not find an instance of the pattern\n  " + c.show(l, ctx) + "\nin the target",
           error_kind::rewrite_no_match);
}

} // namespace

std::vector<mvar_id> rewrite_goal(tactic_ctx &c, term const &proof, bool reverse) {
    local_context ctx = c.ctx();
    auto const before = c.store.next_id();
    eq_rule rl = instantiate_rule(c, ctx, proof, reverse);
    term T = c.target();
    auto conv = c.decl().conv;
    term focus = T;
    if (conv)
        focus = get_app_args(T)[1];
    auto abst = kabstract(c, ctx, focus, rl.lhs);
    if (!abst)
        no_match(c, ctx, c.store.instantiate(rl.lhs));
    term lhs = c.store.instantiate(rl.lhs), rhs = c.store.instantiate(rl.rhs), alpha = c.store.instantiate(rl.alpha);
    term h = c.store.instantiate(rl.proof);
    term body = c.store.instantiate(*abst);
    term motive = mk_lambda("x", alpha, body);
    term rewritten = instantiate(body, rhs);
    mvar_id g2;
    try {
        if (conv) {
            auto ta = get_app_args(T);
            g2 = c.new_goal(ctx, builtin::mk_eq(ta[0], rewritten, ta[2]));
            c.store.set_conv_frame(g2, *conv);
            term p = mk_app(mk_const("Eq.congrArg"), {alpha, ta[0], lhs, rhs, motive, h});
            c.close(mk_app(mk_const("Eq.trans"), {ta[0], ta[1], rewritten, ta[2], p, mk_mvar(g2)}));
        } else {
            g2 = c.new_goal(ctx, rewritten);
            term symm = mk_app(mk_const("Eq.symm"), {alpha, lhs, rhs, h});
            c.close(mk_app(mk_const("Eq.subst"), {alpha, motive, rhs, lhs, symm, mk_mvar(g2)}));
        }
    } catch (type_error const &) {
        c.fail("rewrite failed: motive is not type correct");
    }
    c.goal = g2;
    std::vector<mvar_id> rest;
    for (mvar_id m : c.store.unassigned_mvars(h))
        if (m.idx >= before)
            rest.push_back(m);
    return rest;
}

bool close_syntactic(tactic_ctx &c) {
    if (c.decl().conv)
        return false;
    term T = c.target();
    if (T.is_constant() && T.const_name() == "True") {
        c.close(mk_const("True.intro"));
        return true;
    }
    if (is_app_of(T, "Eq", 3)) {
        auto a = get_app_args(T);
        if (a[1] == a[2]) {
            c.close(mk_app(mk_const("Eq.refl"), {a[0], a[1]}));
            return true;
        }
    }
    return false;
}

void run_rw(tactic_ctx &c, tactic_expr const &t) {
    std::vector<mvar_id> extra;
    for (auto const &r : t.rules) {
        auto before = c.store.next_id();
        auto el = c.elaborator();
        term p = el.elab(*r.term);
        auto holes = c.collect(el, p, before);
        auto rest = rewrite_goal(c, p, r.reverse);
        extra.insert(extra.end(), holes.begin(), holes.end());
        extra.insert(extra.end(), rest.begin(), rest.end());
    }
    if (!close_syntactic(c))
        c.produced.push_back(c.goal);
    for (mvar_id m : extra)
        if (std::find(c.produced.begin(), c.produced.end(), m) == c.produced.end())
            c.produced.push_back(m);
}

void run_conv_enter(tactic_ctx &c, bool rhs) {
    local_context ctx = c.ctx();
    term T = c.target();
    if (!is_app_of(T, "Eq", 3))
        c.fail("conv failed: the goal is not an equality\n" + c.show(T, ctx), error_kind::not_an_equality);
    auto a = get_app_args(T);
    term alpha = a[0], A = a[1], B = a[2];
    term r = mk_mvar(c.store.mk_mvar(ctx, alpha, mvar_kind::natural, "conv"));
    using builtin::mk_eq;
    mvar_id m = c.new_goal(ctx, rhs ? mk_eq(alpha, A, r) : mk_eq(alpha, r, B));
    mvar_id f = c.new_goal(ctx, mk_eq(alpha, rhs ? B : A, r));
    c.store.set_conv_frame(f, conv_frame{rhs, r.mvar(), m, rhs ? A : B});
    term proof = rhs ? mk_app(mk_const("Eq.trans"),
                              {alpha, A, r, B, mk_mvar(m), mk_app(mk_const("Eq.symm"), {alpha, B, r, mk_mvar(f)})})
                     : mk_app(mk_const("Eq.trans"), {alpha, A, r, B, mk_mvar(f), mk_mvar(m)});
    c.close(proof);
    c.produced.push_back(f);
}

void run_conv_done(tactic_ctx &c) {
    auto conv = c.decl().conv;
    if (!conv)
        c.fail("done failed: no conv block is open on this goal");
    local_context ctx = c.ctx();
    auto a = get_app_args(c.target());
    if (!c.unify(ctx, a[2], a[1]))
        c.fail("done failed: the conv result is already fixed to a different term");
    c.close(mk_app(mk_const("Eq.refl"), {a[0], a[1]}));
    c.produced.push_back(conv->main);
}

// ---- simp ------------------------------------------------------------------------------

namespace {

struct simp_rule {
    term proof;
    unsigned nvars; // leading binders, pattern variables are bvars < nvars
    term alpha, lhs, rhs;
};

std::optional<simp_rule> mk_simp_rule(tactic_ctx &c, term const &proof) {
    type_checker tc(c.env, c.ctx(), &c.store);
    term ty = c.store.instantiate(tc.infer(proof));
    unsigned k = 0;
    while (ty.is_pi()) {
        ty = ty.binder_body();
        ++k;
    }
    if (!is_app_of(ty, "Eq", 3))
        return std::nullopt;
    auto a = get_app_args(ty);
    if (!lpo_greater(a[1], a[2]))
        return std::nullopt;
    return simp_rule{proof, k, a[0], a[1], a[2]};
}

bool match(term const &p, term const &s, std::vector<std::optional<term>> &sub, unsigned nvars) {
    if (p.is_bvar() && p.bvar_idx() < nvars) {
        auto &slot = sub[p.bvar_idx()];
        if (slot)
            return *slot == s;
        if (s.has_loose_bvars())
            return false;
        slot = s;
        return true;
    }
    if (p.is_app()) {
        // `succ ?x` against a positive numeral
        if (s.is_lit() && is_app_of(p, "Nat.succ", 1) && s.lit_value() > 0)
            return match(p.app_arg(), mk_lit(s.lit_value() - 1), sub, nvars);
        return s.is_app() && match(p.app_fn(), s.app_fn(), sub, nvars) && match(p.app_arg(), s.app_arg(), sub, nvars);
    }
    return p == s;
}

// first redex in pre-order: instance proof and its closed lhs
std::optional<term> find_redex(term const &t, std::vector<simp_rule> const &rules) {
    std::optional<term> found;
    for_each(t, [&](term const &s, unsigned) {
        if (found)
            return false;
        if (s.has_loose_bvars())
            return true;
        for (auto const &r : rules) {
            std::vector<std::optional<term>> sub(r.nvars);
            if (!match(r.lhs, s, sub, r.nvars))
                continue;
            if (std::any_of(sub.begin(), sub.end(), [](auto const &x) { return !x; }))
                continue;
            term pf = r.proof;
            for (unsigned i = r.nvars; i-- > 0;)
                pf = mk_app(pf, *sub[i]);
            found = pf;
            return false;
        }
        return true;
    });
    return found;
}

constexpr unsigned simp_max_steps = 256;

} // namespace

std::vector<term> simp_lemmas(tactic_ctx &c, tactic_expr const &t) {
    std::vector<term> r;
    if (t.rules.empty()) {
        for (auto const &n : default_simp_lemmas())
            if (c.env.contains(n))
                r.push_back(mk_const(n));
        return r;
    }
    for (auto const &rule : t.rules) {
        auto el = c.elaborator();
        r.push_back(el.elab(*rule.term));
    }
    return r;
}

void run_simp(tactic_ctx &c, std::vector<term> const &lemmas) {
    std::vector<simp_rule> rules;
    for (auto const &l : lemmas) {
        if (auto r = mk_simp_rule(c, l))
            rules.push_back(*r);
        else
            c.messages.push_back("simp: ignoring " + c.show(l) + " (not an equation decreasing left to right)");
    }
    for (unsigned i = 0; i < simp_max_steps && !c.decl().conv; ++i) {
        auto pf = find_redex(c.target(), rules);
        if (!pf)
            break;
        rewrite_goal(c, *pf, false);
    }
    if (!close_syntactic(c))
        c.produced.push_back(c.goal);
}

// ---- path order ------------------------------------------------------------------------

namespace {

int sym_rank(term const &h) {
    if (h.is_lit())
        return 0;
    if (h.is_constant()) {
        std::string const &n = h.const_name();
        if (n == "Nat.mul")
            return 4;
        if (n == "Nat.add")
            return 3;
        if (n == "Nat.succ")
            return 2;
    }
    return 1;
}

// total order on atomic heads; nullopt when a head is not atomic
std::optional<int> sym_cmp(term const &f, term const &g) {
    auto atomic = [](term const &h) { return h.is_lit() || h.is_constant() || h.is_fvar(); };
    if (!atomic(f) || !atomic(g))
        return std::nullopt;
    int rf = sym_rank(f), rg = sym_rank(g);
    if (rf != rg)
        return rf < rg ? -1 : 1;
    if (f.is_lit() && g.is_lit())
        return f.lit_value() == g.lit_value() ? 0 : (f.lit_value() < g.lit_value() ? -1 : 1);
    if (f.kind() != g.kind())
        return f.is_constant() ? 1 : -1;
    if (f.is_constant())
        return f.const_name().compare(g.const_name()) < 0 ? -1 : (f.const_name() == g.const_name() ? 0 : 1);
    if (f.is_fvar())
        return f.fvar() == g.fvar() ? 0 : (f.fvar() < g.fvar() ? -1 : 1);
    return std::nullopt;
}

} // namespace

} // namespace detail

bool lpo_greater(term const &s, term const &t) {
    if (t.is_bvar())
        return !(s == t) && has_loose_bvar(s, t.bvar_idx());
    if (s.is_bvar())
        return false;
    auto ss = get_app_args(s), ts = get_app_args(t);
    for (auto const &si : ss)
        if (si == t || lpo_greater(si, t))
            return true;
    auto cmp = detail::sym_cmp(get_app_fn(s), get_app_fn(t));
    if (!cmp)
        return false;
    auto all_below = [&] {
        return std::all_of(ts.begin(), ts.end(), [&](term const &tj) { return lpo_greater(s, tj); });
    };
    if (*cmp > 0)
        return all_below();
    if (*cmp == 0 && ss.size() == ts.size() && all_below()) {
        for (std::size_t i = 0; i < ss.size(); ++i) {
            if (ss[i] == ts[i])
                continue;
            return lpo_greater(ss[i], ts[i]);
        }
    }
    return false;
}

} // namespace metatac::tactic
