/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "detail.h"
#include "metatac/kernel/builtins.h"

namespace metatac::tactic::detail {
namespace {

enum class rel { eq, le };

struct rel_inst {
    rel r;
    term alpha; // Nat for ≤
    term lhs, rhs;
};

std::optional<rel_inst> as_rel(term const &t) {
    if (is_app_of(t, "Eq", 3)) {
        auto a = get_app_args(t);
        return rel_inst{rel::eq, a[0], a[1], a[2]};
    }
    if (is_app_of(t, "Nat.le", 2)) {
        auto a = get_app_args(t);
        return rel_inst{rel::le, builtin::nat(), a[0], a[1]};
    }
    return std::nullopt;
}

} // namespace

void run_calc(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T = c.target();
    type_checker tc(c.env, ctx, &c.store);
    auto goal = as_rel(tc.whnf_core(T));
    if (!goal)
        c.fail("calc failed: the goal is not a chainable relation (= or ≤)\n" + c.show(T, ctx),
               error_kind::relation_mismatch);
    auto before = c.store.next_id();
    auto el = c.elaborator(ctx);
    term S = el.elab(*t.term, mk_prop());
    auto step = as_rel(c.store.instantiate(S));
    if (!step)
        c.fail("calc failed: the step is not an equation or ≤\n  " + c.show(S, ctx), error_kind::relation_mismatch);
    if (goal->r == rel::eq && step->r == rel::le)
        c.fail("calc failed: a ≤ step cannot establish an equation", error_kind::relation_mismatch);
    if (!c.unify(ctx, step->lhs, goal->lhs))
        c.fail("calc failed: the step's left-hand side\n  " + c.show(step->lhs, ctx) +
                   "\ndoes not match the goal's left-hand side\n  " + c.show(goal->lhs, ctx),
               error_kind::lhs_mismatch);
    S = c.store.instantiate(S);
    step = as_rel(S);
    std::vector<mvar_id> holes;
    term pv;
    if (t.value) {
        auto b2 = c.store.next_id();
        pv = el.elab(*t.value, S);
        holes = c.collect(el, pv, b2);
    } else {
        mvar_id p = c.new_goal(ctx, S);
        pv = mk_mvar(p);
        holes.push_back(p);
    }
    for (mvar_id m : c.collect(el, S, before))
        if (std::find(holes.begin(), holes.end(), m) == holes.end())
            holes.push_back(m);

    term A = c.store.instantiate(goal->lhs), B = c.store.instantiate(goal->rhs), b = c.store.instantiate(step->rhs);
    term N = builtin::nat();
    auto le = [](term const &x, term const &y) { return builtin::nat_le(x, y); };
    std::optional<mvar_id> rem;
    if (c.unify(ctx, b, B)) {
        b = c.store.instantiate(b);
        if (goal->r == step->r) {
            c.close(pv);
        } else { // ≤ goal, = step: A ≤ A transported along A = b
            term motive = mk_lambda("x", N, le(A, mk_bvar(0)));
            c.close(mk_app(mk_const("Eq.subst"), {N, motive, A, b, pv, mk_app(mk_const("Nat.le_refl"), {A})}));
        }
    } else if (goal->r == rel::eq) {
        rem = c.new_goal(ctx, builtin::mk_eq(goal->alpha, b, B));
        c.close(mk_app(mk_const("Eq.trans"), {goal->alpha, A, b, B, pv, mk_mvar(*rem)}));
    } else if (step->r == rel::le) {
        rem = c.new_goal(ctx, le(b, B));
        c.close(mk_app(mk_const("Nat.le_trans"), {A, b, B, pv, mk_mvar(*rem)}));
    } else {
        rem = c.new_goal(ctx, le(b, B));
        term motive = mk_lambda("x", N, le(mk_bvar(0), lift_loose_bvars(B, 0, 1)));
        term symm = mk_app(mk_const("Eq.symm"), {N, A, b, pv});
        c.close(mk_app(mk_const("Eq.subst"), {N, motive, b, A, symm, mk_mvar(*rem)}));
    }
    if (rem)
        c.produced.push_back(*rem);
    c.produced.insert(c.produced.end(), holes.begin(), holes.end());
}

} // namespace metatac::tactic::detail
