/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <algorithm>
#include "detail.h"
#include "metatac/frontend/pp.h"
#include "metatac/kernel/builtins.h"
#include "metatac/kernel/decide.h"

namespace metatac::tactic {
namespace detail {

std::string tactic_ctx::show(term const &t) const { return show(t, ctx()); }
std::string tactic_ctx::show(term const &t, local_context const &lctx) const {
    return frontend::pp(store.instantiate(t), lctx, {}, &env);
}

frontend::elaborator tactic_ctx::elaborator(local_context const &lctx) {
    return frontend::elaborator(env, store, lctx, src ? std::string_view(*src) : std::string_view());
}

std::vector<mvar_id> tactic_ctx::collect(frontend::elaborator const &el, term const &v, std::uint64_t before) {
    auto const &ss = el.sorries();
    for (mvar_id m : ss)
        if (std::find(sorries.begin(), sorries.end(), m) == sorries.end())
            sorries.push_back(m);
    std::vector<mvar_id> r;
    for (mvar_id m : store.unassigned_mvars(v))
        if (m.idx >= before && std::find(ss.begin(), ss.end(), m) == ss.end())
            r.push_back(m);
    std::sort(r.begin(), r.end());
    return r;
}

mvar_id tactic_ctx::new_goal(local_context lctx, term t, std::string origin) {
    return store.mk_mvar(std::move(lctx), std::move(t), mvar_kind::synthetic, std::move(origin));
}

bool tactic_ctx::unify(local_context const &lctx, term const &a, term const &b) {
    meta_store saved = store;
    bool ok = false;
    try {
        type_checker tc(env, lctx, store, true);
        ok = tc.is_def_eq(a, b);
    } catch (exception const &) {
        ok = false;
    }
    if (!ok)
        store = saved;
    return ok;
}

void tactic_ctx::assign(mvar_id g, term const &value) {
    if (!trusted) {
        auto const &d = store.get(g);
        local_context lctx = store.instantiate(d.ctx);
        type_checker tc(env, lctx, &store);
        term ty = tc.infer(value);
        if (!tc.is_def_eq(ty, d.target))
            fail("type mismatch: the constructed term has type\n  " + show(ty, lctx) + "\nbut the goal is\n  " +
                 show(d.target, lctx));
    }
    store.assign(g, value);
}

term zeta_fvars(local_context const &ctx, term const &t) {
    return replace(t, [&](term const &e, unsigned) -> std::optional<term> {
        if (!e.has_fvar())
            return e;
        if (e.is_fvar())
            if (auto const *d = ctx.find(e.fvar()); d && d->value)
                return zeta_fvars(ctx, *d->value);
        return std::nullopt;
    });
}

namespace {

using namespace builtin;

std::string binder_base(term const &pi) {
    std::string const &n = pi.binder_name();
    if (n.empty() || n == "_" || (n == "a" && !has_loose_bvar(pi.binder_body(), 0)))
        return "h";
    return n;
}

/** Introduce up to `count` binders (all leading ones when count is unset) of goal `g`. */
mvar_id intro_core(tactic_ctx &c, mvar_id g, std::vector<std::string> const &names, std::optional<std::size_t> count,
                   bool unfold) {
    auto const &d = c.store.get(g);
    local_context ctx = c.store.instantiate(d.ctx);
    term T = c.store.instantiate(d.target);
    std::vector<fvar_id> xs;
    for (std::size_t i = 0; !count || i < *count; ++i) {
        type_checker tc(c.env, ctx, &c.store);
        term w = tc.whnf_core(T);
        if (!w.is_pi() && unfold)
            w = tc.whnf(T);
        if (!w.is_pi()) {
            if (!count)
                break;
            c.fail("intro expects a Pi/implication goal, got\n" + c.show(T, ctx));
        }
        std::string nm = i < names.size() && names[i] != "_" ? names[i] : ctx.fresh_name(binder_base(w));
        fvar_id x = c.store.mk_fvar_id();
        ctx.push_back(local_decl{x, nm, w.binder_type(), std::nullopt});
        xs.push_back(x);
        T = instantiate(w.binder_body(), mk_fvar(x));
    }
    if (xs.empty())
        return g;
    mvar_id g2 = c.new_goal(ctx, T);
    c.assign(g, mk_lambda_fvars(c.store, ctx, xs, mk_mvar(g2)));
    return g2;
}

void tac_intro(tactic_ctx &c, tactic_expr const &t) {
    std::size_t n = t.names.empty() ? 1 : t.names.size();
    c.produced.push_back(intro_core(c, c.goal, t.names, n, true));
}

void tac_intros(tactic_ctx &c, tactic_expr const &t) {
    if (!t.names.empty())
        c.produced.push_back(intro_core(c, c.goal, t.names, t.names.size(), true));
    else
        c.produced.push_back(intro_core(c, c.goal, {}, std::nullopt, false));
}

void tac_exact(tactic_ctx &c, tactic_expr const &t, bool holes_ok) {
    auto before = c.store.next_id();
    auto el = c.elaborator();
    term v = el.elab(*t.term, c.target());
    auto holes = c.collect(el, v, before);
    if (!holes_ok && !holes.empty())
        c.fail("exact failed: the term\n  " + c.show(v) + "\ncontains unresolved placeholders");
    c.close(v);
    c.produced = holes;
}

unsigned pi_arity(tactic_ctx &c, local_context const &ctx, term ty) {
    type_checker tc(c.env, ctx, &c.store);
    unsigned n = 0;
    for (; n < 64; ++n) {
        term w = tc.whnf(ty);
        if (!w.is_pi())
            break;
        ty = instantiate(w.binder_body(), mk_fvar(fvar_id{(1ull << 62) + n}));
    }
    return n;
}

void tac_apply(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T = c.target();
    auto before = c.store.next_id();
    auto el = c.elaborator(ctx);
    term f = el.elab(*t.term);
    term fty = c.store.instantiate(el.infer(f));
    unsigned nf = pi_arity(c, ctx, fty), nt = pi_arity(c, ctx, T);
    std::vector<unsigned> order;
    if (nf >= nt)
        order.push_back(nf - nt);
    for (unsigned k = 0; k <= nf; ++k)
        if (order.empty() || k != order.front())
            order.push_back(k);
    meta_store saved = c.store;
    std::optional<term> found;
    for (unsigned k : order) {
        term ty = fty, app = f;
        for (unsigned i = 0; i < k; ++i) {
            type_checker tc(c.env, ctx, &c.store);
            term w = tc.whnf(ty);
            mvar_id m = c.store.mk_mvar(ctx, w.binder_type(), mvar_kind::natural, "apply");
            app = mk_app(app, mk_mvar(m));
            ty = instantiate(w.binder_body(), mk_mvar(m));
        }
        if (c.unify(ctx, ty, T)) {
            found = c.store.instantiate(app);
            break;
        }
        c.store = saved;
    }
    if (!found)
        c.fail("apply failed: could not unify the conclusion of\n  " + c.show(fty, ctx) + "\nwith the goal\n  " +
               c.show(T, ctx));
    auto news = c.collect(el, *found, before);
    c.close(*found);
    // dependent goals (those mentioned by another new goal) go last
    std::vector<mvar_id> indep, dep;
    for (mvar_id m : news) {
        bool is_dep = false;
        for (mvar_id o : news)
            if (o != m && occurs_mvar(c.store.instantiate(c.store.get(o).target), m))
                is_dep = true;
        (is_dep ? dep : indep).push_back(m);
    }
    c.produced = indep;
    c.produced.insert(c.produced.end(), dep.begin(), dep.end());
}

std::string branch_name(local_context const &ctx, term const &a, char const *dflt) {
    if (a.is_fvar())
        if (auto const *d = ctx.find(a.fvar()))
            return "h_" + d->user_name;
    if (a.is_constant())
        return "h_" + a.const_name();
    return std::string("h_") + dflt;
}

void tac_cases(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T = c.target();
    auto const *h = ctx.find_by_name(t.name);
    if (!h)
        c.fail("cases failed: unknown hypothesis '" + t.name + "'");
    fvar_id hid = h->id;
    bool used = occurs_fvar(T, hid);
    for (auto const &d : ctx.decls())
        if (d.id != hid && (occurs_fvar(d.type, hid) || (d.value && occurs_fvar(*d.value, hid))))
            used = true;
    if (used)
        c.fail("cases failed: '" + t.name + "' is used by other hypotheses or the goal");
    type_checker tc(c.env, ctx, &c.store);
    term hty = tc.whnf(h->type);
    local_context base = ctx.without({hid});
    bool prop_goal = tc.is_prop(T);
    auto name = [&](std::size_t i, std::string d) { return i < t.names.size() ? t.names[i] : base.fresh_name(d); };
    term hv = mk_fvar(hid);
    if (is_app_of(hty, "Or", 2)) {
        if (!prop_goal)
            c.fail("cases failed: the goal is not a proposition");
        auto args = get_app_args(hty);
        std::vector<term> minors;
        for (int i = 0; i < 2; ++i) {
            fvar_id x = c.store.mk_fvar_id();
            local_context ci = base.with(local_decl{
                x, name(i, branch_name(ctx, args[i], i == 0 ? "inl" : "inr")), args[i], std::nullopt});
            mvar_id g = c.new_goal(ci, T);
            c.produced.push_back(g);
            minors.push_back(mk_lambda_fvars(c.store, ci, {x}, mk_mvar(g)));
        }
        c.close(mk_app(mk_const("Or.cases"), {args[0], args[1], T, hv, minors[0], minors[1]}));
    } else if (is_app_of(hty, "And", 2)) {
        auto args = get_app_args(hty);
        fvar_id l = c.store.mk_fvar_id(), r = c.store.mk_fvar_id();
        local_context ci = base.with(local_decl{l, name(0, "left"), args[0], std::nullopt});
        ci.push_back(local_decl{r, name(1, ci.fresh_name("right")), args[1], std::nullopt});
        mvar_id g = c.new_goal(ci, T);
        c.produced.push_back(g);
        term lam = mk_lambda_fvars(c.store, ci, {l, r}, mk_mvar(g));
        c.close(mk_app(lam, {mk_app(mk_const("And.left"), {args[0], args[1], hv}),
                             mk_app(mk_const("And.right"), {args[0], args[1], hv})}));
    } else if (is_app_of(hty, "Exists", 2)) {
        if (!prop_goal)
            c.fail("cases failed: the goal is not a proposition");
        auto args = get_app_args(hty);
        std::string wn = args[1].is_lambda() ? args[1].binder_name() : "w";
        fvar_id w = c.store.mk_fvar_id(), hw = c.store.mk_fvar_id();
        local_context ci = base.with(local_decl{w, name(0, wn), args[0], std::nullopt});
        ci.push_back(local_decl{hw, name(1, ci.fresh_name("h_" + ci.find(w)->user_name)),
                                head_beta(mk_app(args[1], mk_fvar(w))), std::nullopt});
        mvar_id g = c.new_goal(ci, T);
        c.produced.push_back(g);
        c.close(mk_app(mk_const("Exists.cases"),
                       {args[0], args[1], T, hv, mk_lambda_fvars(c.store, ci, {w, hw}, mk_mvar(g))}));
    } else if (hty.is_constant() && hty.const_name() == "False") {
        if (!prop_goal)
            c.fail("cases failed: the goal is not a proposition");
        c.close(mk_app(mk_const("False.elim"), {T, hv}));
    } else {
        c.fail("cases failed: unsupported hypothesis type\n  " + c.show(h->type, ctx));
    }
}

void tac_rfl(tactic_ctx &c) {
    local_context ctx = c.ctx();
    term T = c.target();
    type_checker tc(c.env, ctx, &c.store);
    term w = tc.whnf_core(T);
    auto args = get_app_args(w);
    if (is_app_of(w, "Eq", 3)) {
        if (!c.unify(ctx, args[1], args[2]))
            c.fail("The rfl tactic failed. The left-hand side\n  " + c.show(args[1], ctx) +
                   "\nis not definitionally equal to the right-hand side\n  " + c.show(args[2], ctx));
        c.close(mk_app(mk_const("Eq.refl"), {args[0], c.store.instantiate(args[1])}));
    } else if (is_app_of(w, "Nat.le", 2)) {
        if (!c.unify(ctx, args[0], args[1]))
            c.fail("The rfl tactic failed: the two sides of ≤ are not definitionally equal");
        c.close(mk_app(mk_const("Nat.le_refl"), {c.store.instantiate(args[0])}));
    } else if (is_app_of(w, "Iff", 2)) {
        if (!c.unify(ctx, args[0], args[1]))
            c.fail("The rfl tactic failed: the two sides of ↔ are not definitionally equal");
        term a = c.store.instantiate(args[0]);
        term id = mk_lambda("h", a, mk_bvar(0));
        c.close(mk_app(mk_const("Iff.intro"), {a, a, id, id}));
    } else {
        c.fail("The rfl tactic failed: the goal is not a reflexive relation\n" + c.show(T, ctx));
    }
}

void tac_decide(tactic_ctx &c) {
    local_context ctx = c.ctx();
    term T = c.target();
    term p = zeta_fvars(ctx, T);
    if (p.has_fvar() || p.has_mvar())
        c.fail("decide failed: the proposition\n  " + c.show(T, ctx) + "\nhas free variables or metavariables");
    switch (eval_decide(c.env, p)) {
    case decide_result::is_true: c.close(mk_decide_cert(p)); return;
    case decide_result::is_false: c.fail("decide failed: the proposition\n  " + c.show(T, ctx) + "\nis false");
    case decide_result::stuck:
        c.fail("decide failed to reduce the proposition\n  " + c.show(T, ctx) + "\nto true or false");
    }
}

void tac_assumption(tactic_ctx &c) {
    local_context ctx = c.ctx();
    term T = c.target();
    auto const &ds = ctx.decls();
    for (std::size_t i = ds.size(); i-- > 0;)
        if (c.unify(ctx, ds[i].type, T)) {
            c.close(mk_fvar(ds[i].id));
            return;
        }
    c.fail("assumption failed: no hypothesis matches the goal\n" + c.show(T, ctx));
}

void tac_sorry(tactic_ctx &c) {
    mvar_id m = c.store.mk_mvar(c.ctx(), c.target(), mvar_kind::synthetic, "sorry");
    c.close(mk_mvar(m));
    c.sorries.push_back(m);
}

void tac_exists(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    mvar_id cur = c.goal;
    for (auto const &w : t.terms) {
        term T = c.store.instantiate(c.store.get(cur).target);
        type_checker tc(c.env, ctx, &c.store);
        term wt = tc.whnf(T);
        if (!is_app_of(wt, "Exists", 2))
            c.fail("exists failed: the goal is not an existential\n" + c.show(T, ctx));
        auto args = get_app_args(wt);
        auto before = c.store.next_id();
        auto el = c.elaborator(ctx);
        term v = el.elab(*w, args[0]);
        if (!c.collect(el, v, before).empty())
            c.fail("exists failed: the witness\n  " + c.show(v, ctx) + "\ncontains unresolved placeholders");
        mvar_id hg = c.new_goal(ctx, head_beta(mk_app(args[1], v)));
        c.assign(cur, mk_app(mk_const("Exists.intro"), {args[0], args[1], v, mk_mvar(hg)}));
        cur = hg;
    }
    c.goal = cur;
    if (!try_close_trivial(c))
        c.produced.push_back(cur);
}

void tac_have(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T0 = c.target();
    auto before = c.store.next_id();
    auto el = c.elaborator(ctx);
    term ty = el.elab_type(*t.term);
    if (!c.collect(el, ty, before).empty())
        c.fail("have failed: the statement\n  " + c.show(ty, ctx) + "\ncontains unresolved placeholders");
    type_checker tc(c.env, ctx, &c.store);
    if (tc.sort_of(ty) != sort_level::prop)
        throw type_error("have expects a proposition, but\n  " + c.show(ty, ctx) + "\nis not a Prop", "have.type");
    term pv;
    std::vector<mvar_id> holes;
    if (t.value) {
        auto b2 = c.store.next_id();
        pv = el.elab(*t.value, ty);
        holes = c.collect(el, pv, b2);
    } else {
        mvar_id p = c.new_goal(ctx, ty);
        pv = mk_mvar(p);
        holes.push_back(p);
    }
    fvar_id x = c.store.mk_fvar_id();
    local_context ctx2 = ctx.with(local_decl{x, t.name, ty, std::nullopt});
    mvar_id g2 = c.new_goal(ctx2, T0);
    c.close(mk_app(mk_lambda_fvars(c.store, ctx2, {x}, mk_mvar(g2)), pv));
    c.produced = holes;
    c.produced.push_back(g2);
}

void tac_let(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T0 = c.target();
    auto before = c.store.next_id();
    auto el = c.elaborator(ctx);
    std::optional<term> ty;
    if (t.term)
        ty = el.elab_type(*t.term);
    term v = el.elab(*t.value, ty);
    if (!ty)
        ty = c.store.instantiate(el.infer(v));
    if (!c.collect(el, mk_app(*ty, v), before).empty())
        c.fail("let failed: the definition contains unresolved placeholders");
    fvar_id x = c.store.mk_fvar_id();
    local_context ctx2 = ctx.with(local_decl{x, t.name, *ty, v});
    mvar_id g2 = c.new_goal(ctx2, T0);
    c.close(mk_let_fvar(c.store, ctx2, x, mk_mvar(g2)));
    c.produced.push_back(g2);
}

void tac_induction(tactic_ctx &c, tactic_expr const &t) {
    local_context ctx = c.ctx();
    term T = c.target();
    auto const *nd = ctx.find_by_name(t.name);
    if (!nd)
        c.fail("induction failed: unknown variable '" + t.name + "'");
    fvar_id n = nd->id;
    std::string nname = nd->user_name;
    type_checker tc(c.env, ctx, &c.store);
    term nty = tc.whnf(nd->type);
    if (nd->value || !(nty.is_constant() && nty.const_name() == "Nat"))
        c.fail("induction failed: only induction on a natural-number variable is supported");
    // hypotheses mentioning n (directly or through another reverted one) move into the motive
    std::vector<fvar_id> deps;
    auto const &ds = ctx.decls();
    for (std::size_t i = *ctx.index_of(n) + 1; i < ds.size(); ++i) {
        bool d = occurs_fvar(ds[i].type, n) || (ds[i].value && occurs_fvar(*ds[i].value, n));
        for (fvar_id y : deps)
            d = d || occurs_fvar(ds[i].type, y) || (ds[i].value && occurs_fvar(*ds[i].value, y));
        if (d) {
            if (ds[i].value)
                c.fail("induction failed: a let-bound hypothesis depends on '" + t.name + "'");
            deps.push_back(ds[i].id);
        }
    }
    std::vector<std::string> dep_names;
    for (fvar_id y : deps)
        dep_names.push_back(ctx.find(y)->user_name);
    term motive = mk_lambda_fvars(c.store, ctx, {n}, mk_pi_fvars(c.store, ctx, deps, T));
    std::vector<fvar_id> removed = deps;
    removed.push_back(n);
    local_context base = ctx.without(removed);

    mvar_id g0 = c.new_goal(base, head_beta(mk_app(motive, mk_lit(0))));
    std::string n2 = !t.names.empty() ? t.names[0] : base.fresh_name(nname);
    fvar_id x = c.store.mk_fvar_id();
    local_context cs = base.with(local_decl{x, n2, builtin::nat(), std::nullopt});
    std::string ihn = t.names.size() > 1 ? t.names[1] : cs.fresh_name(n2 + "_ih");
    fvar_id ih = c.store.mk_fvar_id();
    cs.push_back(local_decl{ih, ihn, head_beta(mk_app(motive, mk_fvar(x))), std::nullopt});
    mvar_id gs = c.new_goal(cs, head_beta(mk_app(motive, nat_add(mk_fvar(x), mk_lit(1)))));
    term step = mk_lambda_fvars(c.store, cs, {x, ih}, mk_mvar(gs));
    term proof = mk_app(mk_const("Nat.rec"), {motive, mk_mvar(g0), step, mk_fvar(n)});
    for (fvar_id y : deps)
        proof = mk_app(proof, mk_fvar(y));
    c.close(proof);
    c.produced.push_back(intro_core(c, g0, dep_names, deps.size(), false));
    c.produced.push_back(intro_core(c, gs, dep_names, deps.size(), false));
}

} // namespace

bool try_close_trivial(tactic_ctx &c) {
    for (int i = 0; i < 3; ++i) {
        meta_store saved = c.store;
        try {
            if (i == 0) {
                tac_rfl(c);
            } else if (i == 1) {
                term T = c.target();
                if (!(T.is_constant() && T.const_name() == "True"))
                    continue;
                c.close(mk_const("True.intro"));
            } else {
                tac_decide(c);
            }
            return true;
        } catch (exception const &) {
            c.store = saved;
        }
    }
    return false;
}

void run_core(tactic_ctx &c, tactic_expr const &t) {
    switch (t.kind) {
    case tactic_kind::intro: tac_intro(c, t); break;
    case tactic_kind::intros: tac_intros(c, t); break;
    case tactic_kind::exact: tac_exact(c, t, false); break;
    case tactic_kind::refine: tac_exact(c, t, true); break;
    case tactic_kind::apply: tac_apply(c, t); break;
    case tactic_kind::cases: tac_cases(c, t); break;
    case tactic_kind::exists: tac_exists(c, t); break;
    case tactic_kind::have: tac_have(c, t); break;
    case tactic_kind::let: tac_let(c, t); break;
    case tactic_kind::rfl: tac_rfl(c); break;
    case tactic_kind::decide: tac_decide(c); break;
    case tactic_kind::assumption: tac_assumption(c); break;
    case tactic_kind::sorry: tac_sorry(c); break;
    case tactic_kind::induction: tac_induction(c, t); break;
    default: c.fail(std::string("internal: unexpected tactic ") + to_string(t.kind));
    }
}

void run_any(tactic_ctx &c, tactic_expr const &t) {
    switch (t.kind) {
    case tactic_kind::rw: run_rw(c, t); break;
    case tactic_kind::conv_enter: run_conv_enter(c, t.rhs); break;
    case tactic_kind::conv_done: run_conv_done(c); break;
    case tactic_kind::simp: run_simp(c, simp_lemmas(c, t)); break;
    case tactic_kind::calc_step: run_calc(c, t); break;
    case tactic_kind::hammer: run_hammer(c, t.budget.value_or(default_hammer_budget)); break;
    default: run_core(c, t);
    }
}

} // namespace detail

tactic_result run_tactic(goal_state const &s, mvar_id goal, tactic_expr const &t, bool automatic) {
    if (!s.has_goal(goal) || s.store.is_assigned(goal))
        throw exception(error_kind::unknown_goal, "goal ?m." + std::to_string(goal.idx) + " is not active in this state");
    detail::tactic_ctx c(s.env, s.store, goal, t.src);
    detail::run_any(c, t);
    tactic_result r;
    auto add = [&](std::vector<mvar_id> &v, mvar_id g) {
        if (!c.store.is_assigned(g) && std::find(v.begin(), v.end(), g) == v.end())
            v.push_back(g);
    };
    for (mvar_id g : c.produced)
        add(r.produced, g);
    std::vector<mvar_id> goals = r.produced;
    if (automatic)
        for (mvar_id g : s.goals)
            if (g != goal)
                add(goals, g);
    r.coupling.clear();
    for (auto &grp : coupling_groups(c.store, goals))
        if (grp.goals.size() >= 2)
            r.coupling.push_back(std::move(grp));
    r.messages = std::move(c.messages);
    r.sorries = std::move(c.sorries);
    r.hammer_nodes = c.hammer_nodes;
    r.next = make_state(s.env, std::move(c.store), std::move(goals), s.root);
    return r;
}

tactic_result run_tactic(goal_state const &s, mvar_id goal, std::string_view src, bool automatic) {
    return run_tactic(s, goal, parse_tactic(src), automatic);
}

} // namespace metatac::tactic
