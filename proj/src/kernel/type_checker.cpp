/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/type_checker.h"
#include <algorithm>
#include <unordered_set>
#include "metatac/kernel/builtins.h"
#include "metatac/kernel/decide.h"
#include "metatac/kernel/error.h"

namespace metatac {

namespace {
constexpr unsigned max_def_eq_depth = 2000;

bool is_nat_zero(term const &t) {
    return (t.is_lit() && t.lit_value() == 0) || (t.is_constant() && t.const_name() == "Nat.zero");
}
} // namespace

char const *to_string(unify_failure f) {
    switch (f) {
    case unify_failure::none: return "none";
    case unify_failure::mismatch: return "UnifyFailure";
    case unify_failure::occurs_check: return "OccursCheck";
    case unify_failure::out_of_fragment: return "OutOfFragment";
    }
    return "?";
}

class type_checker::scope_guard {
    type_checker &m_tc;
    unsigned m_n = 0;

public:
    explicit scope_guard(type_checker &tc) : m_tc(tc) {}
    ~scope_guard() {
        while (m_n-- > 0)
            m_tc.pop_local();
    }
    fvar_id push(std::string name, term type, std::optional<term> value = std::nullopt) {
        ++m_n;
        return m_tc.push_local(std::move(name), std::move(type), std::move(value));
    }
};

type_checker::type_checker(environment env, local_context lctx, meta_store const *store)
    : m_env(std::move(env)), m_lctx(std::move(lctx)), m_store(store) {}

type_checker::type_checker(environment env, local_context lctx, meta_store &store, bool assign)
    : m_env(std::move(env)), m_lctx(std::move(lctx)), m_store(&store), m_mut(assign ? &store : nullptr) {}

fvar_id type_checker::push_local(std::string name, term type, std::optional<term> value) {
    fvar_id id{m_next_tmp++};
    m_lctx.push_back(local_decl{id, std::move(name), std::move(type), std::move(value)});
    return id;
}

void type_checker::pop_local() { m_lctx.pop_back(); }

// ---------------------------------------------------------------------------
// reduction

term type_checker::whnf_core(term const &t0) {
    term t = t0;
    while (true) {
        switch (t.kind()) {
        case term_kind::fvar: {
            auto d = m_lctx.find(t.fvar());
            if (d && d->value) {
                t = *d->value;
                continue;
            }
            return t;
        }
        case term_kind::mvar: {
            if (m_store) {
                auto d = m_store->find(t.mvar());
                if (d && d->assignment) {
                    t = *d->assignment;
                    continue;
                }
            }
            return t;
        }
        case term_kind::let:
            t = instantiate(t.let_body(), t.let_value());
            continue;
        case term_kind::app: {
            term const &f = get_app_fn(t);
            term f2 = whnf_core(f);
            if (f2.is_lambda()) {
                auto args = get_app_args(t);
                t = beta(f2, args);
                continue;
            }
            if (f2.is_mvar() && m_store) {
                auto d = m_store->find(f2.mvar());
                if (d && d->delayed) {
                    term r = m_store->instantiate(mk_app(f2, get_app_args(t)));
                    if (!get_app_fn(r).is_mvar() || get_app_fn(r).mvar() != f2.mvar()) {
                        t = r;
                        continue;
                    }
                }
            }
            if (f2.is_shared_with(f))
                return t;
            return mk_app(f2, get_app_args(t));
        }
        default: return t;
        }
    }
}

std::optional<nat> type_checker::fold_nat(term const &t0) {
    term t = whnf_core(t0);
    if (t.is_lit())
        return t.lit_value();
    if (is_nat_zero(t))
        return nat(0);
    if (is_app_of(t, "Nat.succ", 1)) {
        auto v = fold_nat(t.app_arg());
        return v ? std::optional<nat>(*v + 1) : std::nullopt;
    }
    if (is_app_of(t, "Nat.add", 2) || is_app_of(t, "Nat.mul", 2)) {
        auto args = get_app_args(t);
        auto a = fold_nat(args[0]);
        if (!a)
            return std::nullopt;
        auto b = fold_nat(args[1]);
        if (!b)
            return std::nullopt;
        return is_app_of(t, "Nat.add", 2) ? nat(*a + *b) : nat(*a * *b);
    }
    // definitions, Nat.rec: one round of full whnf, then structural again
    term w = whnf(t);
    if (is_identical(w, t))
        return std::nullopt;
    return fold_nat(w);
}

std::optional<nat> type_checker::eval_nat(term const &t) { return fold_nat(t); }

term type_checker::whnf(term const &t0) {
    term t = t0;
    while (true) {
        t = whnf_core(t);
        term const &f = get_app_fn(t);
        if (!f.is_constant())
            return t;
        std::string const &n = f.const_name();
        auto args = get_app_args(t);
        auto rest = [&](term r, std::size_t used) {
            return mk_app(r, std::span<term const>(args.data() + used, args.size() - used));
        };
        if (auto d = m_env.find(n); d && d->kind == decl_kind::definition && d->value) {
            t = beta(*d->value, args);
            continue;
        }
        if ((n == "Nat.add" || n == "Nat.mul") && args.size() >= 2) {
            bool add = n == "Nat.add";
            // closed operands fold in binary, never through unary unfolding
            if (auto va = fold_nat(args[0])) {
                if (auto vb = fold_nat(args[1])) {
                    t = rest(mk_lit(add ? nat(*va + *vb) : nat(*va * *vb)), 2);
                    continue;
                }
            }
            term b = whnf(args[1]);
            if (b.is_lit()) {
                nat k = b.lit_value();
                term a = whnf(args[0]);
                if (a.is_lit()) {
                    t = rest(mk_lit(add ? nat(a.lit_value() + k) : nat(a.lit_value() * k)), 2);
                    continue;
                }
                if (k == 0) {
                    t = rest(add ? args[0] : mk_lit(0), 2);
                    continue;
                }
                term prev = mk_lit(k - 1);
                t = rest(add ? builtin::nat_succ(mk_app(f, {args[0], prev}))
                             : mk_app(mk_const("Nat.add"), {mk_app(f, {args[0], prev}), args[0]}),
                         2);
                continue;
            }
            if (is_nat_zero(b)) {
                t = rest(add ? args[0] : mk_lit(0), 2);
                continue;
            }
            if (is_app_of(b, "Nat.succ", 1)) {
                term const &p = b.app_arg();
                t = rest(add ? builtin::nat_succ(mk_app(f, {args[0], p}))
                             : mk_app(mk_const("Nat.add"), {mk_app(f, {args[0], p}), args[0]}),
                         2);
                continue;
            }
            return t;
        }
        if (n == "Nat.rec" && args.size() >= 4) {
            term major = whnf(args[3]);
            if (is_nat_zero(major)) {
                t = rest(args[1], 4);
                continue;
            }
            std::optional<term> pred;
            if (major.is_lit())
                pred = mk_lit(major.lit_value() - 1);
            else if (is_app_of(major, "Nat.succ", 1))
                pred = major.app_arg();
            if (pred) {
                term ih = mk_app(f, {args[0], args[1], args[2], *pred});
                t = rest(mk_app(args[2], {*pred, ih}), 4);
                continue;
            }
            return t;
        }
        return t;
    }
}

term type_checker::normalize(term const &t) {
    term w = whnf(t);
    switch (w.kind()) {
    case term_kind::app: {
        auto args = get_app_args(w);
        for (auto &a : args)
            a = normalize(a);
        return mk_app(normalize(get_app_fn(w)), args);
    }
    case term_kind::lambda:
        return mk_lambda(w.binder_name(), normalize(w.binder_type()), normalize(w.binder_body()));
    case term_kind::pi:
        return mk_pi(w.binder_name(), normalize(w.binder_type()), normalize(w.binder_body()));
    default: return w;
    }
}

// ---------------------------------------------------------------------------
// inference

std::optional<sort_level> type_checker::sort_of(term const &ty) {
    term w = whnf(ty);
    if (w.is_sort() && w.sort() == sort_level::type)
        return sort_level::type;
    term s;
    try {
        s = whnf(infer_core(ty, false));
    } catch (type_error &) {
        return std::nullopt;
    }
    if (!s.is_sort())
        return std::nullopt;
    return s.sort();
}

sort_level type_checker::sort_of_type(term const &ty, char const *what) {
    term w = whnf(ty);
    if (w.is_sort() && w.sort() == sort_level::type)
        return sort_level::type;
    term s = whnf(infer_core(ty, true));
    if (!s.is_sort())
        throw type_error(std::string("type expected for ") + what + ", got " + describe_term(ty, m_lctx), what);
    return s.sort();
}

bool type_checker::is_prop(term const &type) {
    auto s = sort_of(type);
    return s && *s == sort_level::prop;
}

term type_checker::ensure_pi(term const &t) {
    if (t.is_pi())
        return t;
    term w = whnf(t);
    if (w.is_pi())
        return w;
    throw type_error("function expected, got term of type " + describe_term(t, m_lctx), "app.fn");
}

term type_checker::infer_core(term const &t, bool check) {
    switch (t.kind()) {
    case term_kind::sort:
        if (t.sort() == sort_level::prop)
            return mk_type();
        throw type_error("Type is the top sort and has no type", "sort");
    case term_kind::constant: {
        if (t.const_name() == decide_cert_name)
            throw type_error("DecideCert must be applied to a proposition", "const");
        auto d = m_env.find(t.const_name());
        if (!d)
            throw type_error("unknown constant '" + t.const_name() + "'", "const", error_kind::unknown_constant);
        return d->type;
    }
    case term_kind::bvar: throw type_error("loose bound variable #" + std::to_string(t.bvar_idx()), "bvar");
    case term_kind::fvar: {
        auto d = m_lctx.find(t.fvar());
        if (!d)
            throw type_error("unknown free variable _uniq." + std::to_string(t.fvar().idx), "fvar");
        return d->type;
    }
    case term_kind::mvar: {
        auto d = m_store ? m_store->find(t.mvar()) : nullptr;
        if (!d)
            throw type_error("unknown metavariable ?m." + std::to_string(t.mvar().idx), "mvar");
        return d->target;
    }
    case term_kind::app: return infer_app(t, check);
    case term_kind::lambda:
    case term_kind::pi: return infer_binding(t, check);
    case term_kind::let: return infer_let(t, check);
    case term_kind::lit: return mk_const("Nat");
    }
    throw type_error("unreachable");
}

term type_checker::infer_app(term const &t, bool check) {
    term const &f = get_app_fn(t);
    auto args = get_app_args(t);
    if (f.is_constant() && f.const_name() == decide_cert_name) {
        if (args.size() != 1)
            throw type_error("DecideCert expects exactly one argument", "app");
        term p = m_store ? m_store->instantiate(args[0]) : args[0];
        if (check && sort_of_type(p, "app.arg") != sort_level::prop)
            throw type_error("DecideCert argument must be a proposition", "app.arg");
        if (eval_decide(m_env, p) != decide_result::is_true)
            throw type_error("decide failed to prove " + describe_term(p, m_lctx), "app.arg");
        return p;
    }
    term ft = infer_core(f, check);
    for (std::size_t i = 0; i < args.size(); ++i) {
        term pi = ensure_pi(ft);
        if (check) {
            term at = infer_core(args[i], check);
            if (!is_def_eq(at, pi.binder_type()))
                throw type_error("application type mismatch: argument " + describe_term(args[i], m_lctx) +
                                     " has type " + describe_term(at, m_lctx) + " but is expected to have type " +
                                     describe_term(pi.binder_type(), m_lctx),
                                 "app.arg");
        }
        ft = instantiate(pi.binder_body(), args[i]);
    }
    return ft;
}

term type_checker::infer_binding(term const &t, bool check) {
    scope_guard g(*this);
    if (check)
        sort_of_type(t.binder_type(), t.is_lambda() ? "lam.type" : "pi.type");
    fvar_id x = g.push(t.binder_name(), t.binder_type());
    term body = instantiate(t.binder_body(), mk_fvar(x));
    if (t.is_lambda()) {
        term bt = infer_core(body, check);
        return mk_pi(t.binder_name(), t.binder_type(), abstract(bt, x));
    }
    term w = whnf(body);
    if (w.is_sort() && w.sort() == sort_level::type)
        throw type_error("universe too large: codomain is Type", "pi.body");
    term s = whnf(infer_core(body, check));
    if (!s.is_sort())
        throw type_error("type expected for pi.body, got " + describe_term(body, m_lctx), "pi.body");
    return s;
}

term type_checker::infer_let(term const &t, bool check) {
    scope_guard g(*this);
    if (check) {
        sort_of_type(t.let_type(), "let.type");
        term vt = infer_core(t.let_value(), check);
        if (!is_def_eq(vt, t.let_type()))
            throw type_error("let value has type " + describe_term(vt, m_lctx) + " but is expected to have type " +
                                 describe_term(t.let_type(), m_lctx),
                             "let.value");
    }
    fvar_id x = g.push(t.let_name(), t.let_type(), t.let_value());
    term bt = infer_core(instantiate(t.let_body(), mk_fvar(x)), check);
    return instantiate(abstract(bt, x), t.let_value());
}

term type_checker::infer(term const &t) { return infer_core(t, true); }
term type_checker::infer_only(term const &t) { return infer_core(t, false); }

void type_checker::check(term const &t, term const &expected) {
    term ty = infer(t);
    if (!is_def_eq(ty, expected))
        throw type_error("type mismatch: " + describe_term(t, m_lctx) + " has type " + describe_term(ty, m_lctx) +
                             " but is expected to have type " + describe_term(expected, m_lctx),
                         "root");
}

// ---------------------------------------------------------------------------
// definitional equality and unification

bool type_checker::fail(unify_failure f, std::string msg) {
    if (m_failure == unify_failure::none || m_failure == unify_failure::mismatch) {
        m_failure = f;
        m_failure_msg = std::move(msg);
    }
    return false;
}

bool type_checker::is_def_eq(term const &a, term const &b) {
    m_failure = unify_failure::none;
    m_failure_msg.clear();
    return is_def_eq_core(a, b);
}

bool type_checker::is_def_eq_args(term const &a, term const &b) {
    auto as = get_app_args(a), bs = get_app_args(b);
    if (as.size() != bs.size())
        return false;
    for (std::size_t i = 0; i < as.size(); ++i)
        if (!is_def_eq_core(as[i], bs[i]))
            return false;
    return true;
}

bool type_checker::is_def_eq_binding(term const &a, term const &b) {
    if (!is_def_eq_core(a.binder_type(), b.binder_type()))
        return false;
    scope_guard g(*this);
    fvar_id x = g.push(a.binder_name(), a.binder_type());
    return is_def_eq_core(instantiate(a.binder_body(), mk_fvar(x)), instantiate(b.binder_body(), mk_fvar(x)));
}

bool type_checker::try_eta(term const &a, term const &b) {
    // a is a lambda, b is not
    scope_guard g(*this);
    fvar_id x = g.push(a.binder_name(), a.binder_type());
    return is_def_eq_core(instantiate(a.binder_body(), mk_fvar(x)), mk_app(b, mk_fvar(x)));
}

bool type_checker::lit_vs_succ(term const &lit, term const &other) {
    nat const &k = lit.lit_value();
    if (other.is_constant() && other.const_name() == "Nat.zero")
        return k == 0;
    if (is_app_of(other, "Nat.succ", 1) && k > 0)
        return is_def_eq_core(mk_lit(k - 1), other.app_arg());
    return false;
}

std::optional<bool> type_checker::try_assign(term const &lhs, term const &rhs) {
    term const &head = get_app_fn(lhs);
    if (!head.is_mvar() || !m_mut)
        return std::nullopt;
    auto d = m_mut->find(head.mvar());
    if (!d || d->is_assigned())
        return std::nullopt;
    mvar_id m = head.mvar();
    auto args = get_app_args(lhs);
    std::vector<fvar_id> xs;
    for (auto const &a : args) {
        term w = whnf_core(a);
        if (!w.is_fvar() || std::find(xs.begin(), xs.end(), w.fvar()) != xs.end())
            return fail(unify_failure::out_of_fragment,
                        "?m." + std::to_string(m.idx) + " is applied to arguments that are not distinct local variables");
        xs.push_back(w.fvar());
    }
    term v = m_mut->instantiate(rhs);
    if (occurs_mvar(v, m)) {
        term v2 = m_mut->instantiate(whnf(v));
        if (occurs_mvar(v2, m))
            return fail(unify_failure::occurs_check, "occurs check failed: ?m." + std::to_string(m.idx) +
                                                         " occurs in " + describe_term(v, m_lctx));
        v = v2;
    }
    local_context const &mctx = d->ctx;
    auto in_scope = [&](fvar_id x) {
        return mctx.contains(x) || std::find(xs.begin(), xs.end(), x) != xs.end();
    };
    for (fvar_id x : collect_fvars(v)) {
        if (!in_scope(x)) {
            auto ld = m_lctx.find(x);
            return fail(unify_failure::mismatch, "variable " + (ld ? ld->user_name : std::string("?")) +
                                                     " is not in scope for ?m." + std::to_string(m.idx));
        }
    }
    for (mvar_id n : m_mut->unassigned_mvars(v)) {
        auto nd = m_mut->find(n);
        if (!nd)
            continue;
        for (auto const &e : nd->ctx.decls())
            if (!in_scope(e.id))
                return fail(unify_failure::out_of_fragment, "?m." + std::to_string(n.idx) +
                                                                " depends on variables outside the scope of ?m." +
                                                                std::to_string(m.idx));
    }
    term val = abstract(v, xs);
    for (std::size_t i = xs.size(); i-- > 0;) {
        auto ld = m_lctx.find(xs[i]);
        if (!ld)
            return fail(unify_failure::out_of_fragment, "pattern variable is not in the local context");
        term ty = abstract(m_mut->instantiate(ld->type), std::span<fvar_id const>(xs.data(), i));
        val = mk_lambda(ld->user_name, ty, val);
    }
    // the assignment must have the declared type
    term target = d->target;
    try {
        type_checker sub(m_env, mctx, *m_mut, true);
        term vt = sub.infer(val);
        // a metavariable standing for an unknown binder type accepts any sort
        bool sorts = sub.whnf(target).is_sort() && sub.whnf(vt).is_sort();
        if (!sorts && !sub.is_def_eq(vt, target))
            return fail(unify_failure::mismatch, "type mismatch when assigning ?m." + std::to_string(m.idx));
    } catch (type_error &e) {
        return fail(unify_failure::mismatch, e.what());
    }
    if (m_mut->is_assigned(m))
        return is_def_eq_core(lhs, rhs);
    m_mut->assign(m, val);
    return true;
}

bool type_checker::is_def_eq_core(term const &a0, term const &b0) {
    if (a0.is_shared_with(b0) || a0 == b0)
        return true;
    if (m_depth > max_def_eq_depth)
        return fail(unify_failure::mismatch, "definitional equality check exceeded its depth limit");
    ++m_depth;
    struct depth_guard {
        unsigned &d;
        ~depth_guard() { --d; }
    } dg{m_depth};

    term a = whnf_core(a0), b = whnf_core(b0);
    if (a == b)
        return true;
    if (m_mut) {
        if (auto r = try_assign(a, b))
            return *r;
        if (auto r = try_assign(b, a))
            return *r;
    }
    if (a.is_sort() && b.is_sort())
        return a.sort() == b.sort() || fail(unify_failure::mismatch, "sort mismatch");
    if ((a.is_lambda() && b.is_lambda()) || (a.is_pi() && b.is_pi()))
        return is_def_eq_binding(a, b) || fail(unify_failure::mismatch, "binder mismatch");
    if (a.is_lambda() && !b.is_lambda())
        return try_eta(a, b);
    if (b.is_lambda() && !a.is_lambda())
        return try_eta(b, a);
    if (a.is_lit() && b.is_lit())
        return a.lit_value() == b.lit_value() || fail(unify_failure::mismatch, "numerals differ");

    if (a.is_app() && b.is_app()) {
        term const &fa = get_app_fn(a), &fb = get_app_fn(b);
        bool same_head = (fa.is_constant() && fb.is_constant() && fa.const_name() == fb.const_name()) ||
                         (fa.is_fvar() && fb.is_fvar() && fa.fvar() == fb.fvar());
        if (same_head && get_app_num_args(a) == get_app_num_args(b)) {
            std::optional<meta_store> saved;
            if (m_mut)
                saved = *m_mut;
            if (is_def_eq_args(a, b))
                return true;
            if (m_mut)
                *m_mut = std::move(*saved);
        }
    }

    term a2 = whnf(a), b2 = whnf(b);
    if (!(a2 == a) || !(b2 == b))
        return is_def_eq_core(a2, b2);

    if (a.is_lit())
        return lit_vs_succ(a, b) || fail(unify_failure::mismatch, "numeral mismatch");
    if (b.is_lit())
        return lit_vs_succ(b, a) || fail(unify_failure::mismatch, "numeral mismatch");
    switch (a.kind()) {
    case term_kind::constant:
        if (b.is_constant() && a.const_name() == b.const_name())
            return true;
        break;
    case term_kind::fvar:
        if (b.is_fvar() && a.fvar() == b.fvar())
            return true;
        break;
    case term_kind::mvar:
        if (b.is_mvar() && a.mvar() == b.mvar())
            return true;
        break;
    case term_kind::app:
        if (b.is_app() && get_app_num_args(a) == get_app_num_args(b)) {
            if (is_def_eq_core(get_app_fn(a), get_app_fn(b)) && is_def_eq_args(a, b))
                return true;
        }
        break;
    default: break;
    }
    return fail(unify_failure::mismatch,
                describe_term(a, m_lctx) + " is not definitionally equal to " + describe_term(b, m_lctx));
}

// ---------------------------------------------------------------------------

term whnf(environment const &env, local_context const &ctx, term const &t) { return type_checker(env, ctx).whnf(t); }

term infer(environment const &env, local_context const &ctx, term const &t, meta_store const *store) {
    return type_checker(env, ctx, store).infer(t);
}

bool defeq(environment const &env, local_context const &ctx, term const &a, term const &b, meta_store const *store) {
    return type_checker(env, ctx, store).is_def_eq(a, b);
}

environment add_decl(environment const &env, declaration d) {
    if (env.contains(d.name))
        throw exception(error_kind::duplicate_name, "'" + d.name + "' has already been declared");
    type_checker tc(env, {});
    if (!tc.sort_of(d.type)) {
        tc.infer(d.type); // surfaces the underlying error if there is one
        throw type_error("type expected for declaration '" + d.name + "'", "decl.type");
    }
    if (d.value) {
        term vt = tc.infer(*d.value);
        if (!tc.is_def_eq(vt, d.type))
            throw type_error("type mismatch in declaration '" + d.name + "': value has type " +
                                 describe_term(vt, {}) + " but is declared with type " + describe_term(d.type, {}),
                             "decl.value");
    }
    return env.add_unchecked(std::move(d));
}

unify_result unify(environment const &env, local_context const &ctx, term const &a, term const &b, meta_store store) {
    type_checker tc(env, ctx, store, true);
    unify_result r;
    if (tc.is_def_eq(a, b)) {
        r.store = std::move(store);
    } else {
        r.failure = tc.last_failure() == unify_failure::none ? unify_failure::mismatch : tc.last_failure();
        r.message = tc.last_failure_message();
    }
    return r;
}

} // namespace metatac
