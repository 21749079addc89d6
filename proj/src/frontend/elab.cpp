/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/frontend/elab.h"
#include "metatac/frontend/pp.h"
#include "metatac/kernel/builtins.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/meta/binding.h"

namespace metatac::frontend {

source_pos pos_at(std::string_view src, std::size_t offset) {
    source_pos p;
    p.offset = offset;
    for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
        if (src[i] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

elaborator::elaborator(environment env, meta_store &store, local_context lctx, std::string_view src)
    : m_env(std::move(env)), m_store(store), m_lctx(std::move(lctx)), m_src(src) {}

void elaborator::fail(syntax const &s, std::string const &msg) const {
    std::optional<source_pos> pos;
    if (!m_src.empty())
        pos = pos_at(m_src, s.begin);
    throw exception(error_kind::elab_error, msg, pos);
}

std::string elaborator::show(term const &t) const { return pp(m_store.instantiate(t), m_lctx); }

term elaborator::whnf(term const &t) { return type_checker(m_env, m_lctx, &m_store).whnf(m_store.instantiate(t)); }

term elaborator::infer(term const &t) { return type_checker(m_env, m_lctx, &m_store).infer(t); }

bool elaborator::unify(term const &a, term const &b) {
    meta_store saved = m_store;
    bool ok = false;
    try {
        type_checker tc(m_env, m_lctx, m_store, true);
        ok = tc.is_def_eq(a, b);
    } catch (exception const &) {
        ok = false;
    }
    if (!ok)
        m_store = saved;
    return ok;
}

fvar_id elaborator::push_local(std::string const &name, term const &type, std::optional<term> const &value) {
    fvar_id x = m_store.mk_fvar_id();
    m_lctx.push_back(local_decl{x, name, type, value});
    return x;
}

void elaborator::pop_to(std::size_t n) {
    while (m_lctx.size() > n)
        m_lctx.pop_back();
}

term elaborator::fresh_type_mvar() { return mk_mvar(m_store.mk_mvar(m_lctx, mk_type(), mvar_kind::natural, "type")); }

term elaborator::elab(syntax const &s, std::optional<term> const &expected) {
    return m_store.instantiate(check(s, expected));
}

term elaborator::elab_type(syntax const &s) {
    if (s.kind == stx_kind::type)
        return mk_type();
    if (s.kind == stx_kind::hole)
        return fresh_type_mvar();
    typed r = go(s, std::nullopt);
    term w = whnf(r.type);
    if (w.is_sort())
        return m_store.instantiate(r.value);
    if (w.is_mvar() && unify(w, mk_type()))
        return m_store.instantiate(r.value);
    fail(s, "type expected, got " + show(r.value) + " : " + show(r.type));
}

term elaborator::check(syntax const &s, std::optional<term> const &expected) {
    typed r = go(s, expected);
    if (expected && !unify(r.type, *expected))
        fail(s, "type mismatch: " + show(r.value) + " has type " + show(r.type) + " but is expected to have type " +
                    show(*expected));
    return r.value;
}

elaborator::typed elaborator::go(syntax const &s, std::optional<term> const &expected) {
    switch (s.kind) {
    case stx_kind::ident:
    case stx_kind::explicit_ident:
    case stx_kind::proj: {
        head_info h = resolve_head(s);
        return {h.fn, h.type};
    }
    case stx_kind::num: return {mk_lit(s.num), builtin::nat()};
    case stx_kind::hole:
    case stx_kind::synth_hole:
    case stx_kind::sorry: return go_hole(s, expected);
    case stx_kind::prop: return {mk_prop(), mk_type()};
    case stx_kind::type: fail(s, "Type has no type");
    case stx_kind::app: return go_app(s, expected);
    case stx_kind::lambda:
    case stx_kind::pi:
    case stx_kind::exists: return go_binder(s, expected);
    case stx_kind::arrow:
    case stx_kind::binop: return go_binop(s);
    case stx_kind::neg: return {builtin::mk_not(check(*s.args[0], mk_prop())), mk_prop()};
    case stx_kind::ascription: {
        term ty = elab_type(*s.args[1]);
        return {check(*s.args[0], ty), ty};
    }
    case stx_kind::let_term: return go_let(s, expected);
    }
    fail(s, "unsupported syntax");
}

elaborator::typed elaborator::go_hole(syntax const &s, std::optional<term> const &expected) {
    if (s.kind == stx_kind::synth_hole && !s.text.empty()) {
        // `?m.12` names an existing metavariable
        if (s.text.rfind("m.", 0) == 0 && s.text.size() > 2 &&
            s.text.find_first_not_of("0123456789", 2) == std::string::npos) {
            mvar_id m{std::stoull(s.text.substr(2))};
            if (m_store.contains(m))
                return {mk_mvar(m), m_store.get(m).target};
        }
        if (auto it = m_named.find(s.text); it != m_named.end())
            return {mk_mvar(it->second), m_store.get(it->second).target};
    }
    term ty = expected ? *expected : fresh_type_mvar();
    switch (s.kind) {
    case stx_kind::hole: return {mk_mvar(m_store.mk_mvar(m_lctx, ty, mvar_kind::natural, "user")), ty};
    case stx_kind::sorry: {
        mvar_id m = m_store.mk_mvar(m_lctx, ty, mvar_kind::synthetic, "sorry");
        m_sorries.push_back(m);
        return {mk_mvar(m), ty};
    }
    default: {
        mvar_id m = m_store.mk_mvar(m_lctx, ty, mvar_kind::synthetic, "user");
        if (!s.text.empty())
            m_named.emplace(s.text, m);
        m_holes.push_back(m);
        return {mk_mvar(m), ty};
    }
    }
}

void elaborator::insert_implicits(head_info &h) {
    if (h.explicit_mode || !h.decl)
        return;
    while (h.decl->is_implicit(h.next_arg)) {
        term t = whnf(h.type);
        if (!t.is_pi())
            return;
        term m = mk_mvar(m_store.mk_mvar(m_lctx, t.binder_type(), mvar_kind::natural, "implicit"));
        h.fn = mk_app(h.fn, m);
        h.type = instantiate(t.binder_body(), m);
        ++h.next_arg;
    }
}

std::optional<elaborator::head_info> elaborator::resolve_const(std::string const &name, bool explicit_mode) {
    for (std::string const &c : {name, "Nat." + name}) {
        if (auto const *d = m_env.find(c)) {
            head_info h{mk_const(c), d->type, d, 0, explicit_mode};
            insert_implicits(h);
            return h;
        }
    }
    return std::nullopt;
}

elaborator::head_info elaborator::project(syntax const &s, typed obj, std::string const &field) {
    term ty = whnf(obj.type);
    term const &c = get_app_fn(ty);
    if (!c.is_constant())
        fail(s, "invalid field notation: the type of " + show(obj.value) + " is not of the form C ...");
    std::string name = c.const_name() + "." + field;
    auto h = resolve_const(name, false);
    if (!h)
        fail(s, "unknown constant '" + name + "'");
    term t = whnf(h->type);
    if (!t.is_pi())
        fail(s, "invalid field notation: '" + name + "' takes no explicit argument");
    if (!unify(t.binder_type(), obj.type))
        fail(s, "invalid field notation: " + show(obj.value) + " does not fit the first argument of '" + name + "'");
    h->fn = mk_app(h->fn, obj.value);
    h->type = instantiate(t.binder_body(), obj.value);
    ++h->next_arg;
    insert_implicits(*h);
    return *h;
}

elaborator::head_info elaborator::resolve_head(syntax const &s) {
    if (s.kind == stx_kind::ident || s.kind == stx_kind::explicit_ident) {
        std::string const &name = s.text;
        bool expl = s.kind == stx_kind::explicit_ident;
        if (auto const *ld = m_lctx.find_by_name(name))
            return head_info{mk_fvar(ld->id), ld->type, nullptr, 0, expl};
        if (name == decide_cert_name)
            fail(s, "DecideCert must be applied to a proposition");
        if (auto h = resolve_const(name, expl))
            return *h;
        // `h.symm`, `n.succ`: field access on a local
        for (std::size_t dot = name.find('.'); dot != std::string::npos; dot = name.find('.', dot + 1)) {
            auto const *ld = m_lctx.find_by_name(name.substr(0, dot));
            if (!ld)
                continue;
            typed obj{mk_fvar(ld->id), ld->type};
            std::string rest = name.substr(dot + 1);
            head_info h;
            for (;;) {
                std::size_t nd = rest.find('.');
                h = project(s, obj, rest.substr(0, nd));
                if (nd == std::string::npos)
                    break;
                obj = typed{h.fn, h.type};
                rest = rest.substr(nd + 1);
            }
            return h;
        }
        fail(s, "unknown identifier '" + name + "'");
    }
    if (s.kind == stx_kind::proj)
        return project(s, go(*s.args[0], std::nullopt), s.text);
    typed t = go(s, std::nullopt);
    return head_info{t.value, t.type, nullptr, 0, false};
}

elaborator::typed elaborator::go_app(syntax const &s, std::optional<term> const &expected) {
    syntax const &head = *s.args[0];
    std::vector<syntax_ptr> args(s.args.begin() + 1, s.args.end());
    if (head.kind == stx_kind::ident && head.text == decide_cert_name && args.size() == 1) {
        term p = check(*args[0], mk_prop());
        return {builtin::mk_decide_cert(p), p};
    }
    return apply_args(s, resolve_head(head), args, expected);
}

elaborator::typed elaborator::apply_args(syntax const &s, head_info h, std::vector<syntax_ptr> const &args,
                                         std::optional<term> const &expected) {
    auto implicit_at = [&](unsigned j) { return !h.explicit_mode && h.decl && h.decl->is_implicit(j); };
    // first-order propagation of the expected type into the head's metavariables
    if (expected && !args.empty()) {
        meta_store saved = m_store;
        bool ok = true;
        term t = h.type;
        unsigned j = h.next_arg;
        for (std::size_t k = 0; k < args.size() && ok; ++k) {
            for (;;) {
                t = whnf(t);
                if (!t.is_pi()) {
                    ok = false;
                    break;
                }
                if (!implicit_at(j))
                    break;
                t = instantiate(t.binder_body(),
                                mk_mvar(m_store.mk_mvar(m_lctx, t.binder_type(), mvar_kind::natural, "implicit")));
                ++j;
            }
            if (!ok)
                break;
            t = instantiate(t.binder_body(),
                            mk_mvar(m_store.mk_mvar(m_lctx, t.binder_type(), mvar_kind::natural, "placeholder")));
            ++j;
        }
        if (ok)
            ok = unify(t, *expected);
        if (!ok)
            m_store = saved;
    }
    for (auto const &a : args) {
        insert_implicits(h);
        term t = whnf(h.type);
        if (!t.is_pi())
            fail(s, "function expected: " + show(h.fn) + " : " + show(h.type) + " cannot take more arguments");
        term v = check(*a, m_store.instantiate(t.binder_type()));
        h.fn = mk_app(h.fn, v);
        h.type = instantiate(t.binder_body(), v);
        ++h.next_arg;
    }
    return {h.fn, h.type};
}

elaborator::typed elaborator::go_binop(syntax const &s) {
    syntax const &a = *s.args[0], &b = *s.args[1];
    term P = mk_prop(), N = builtin::nat();
    if (s.kind == stx_kind::arrow) {
        term x = elab_type(a), y = elab_type(b);
        auto lvl = type_checker(m_env, m_lctx, &m_store).sort_of(m_store.instantiate(y));
        return {mk_arrow(x, y), lvl == sort_level::prop ? P : mk_type()};
    }
    std::string const &op = s.text;
    if (op == "=" || op == "≠") {
        typed l = go(a, std::nullopt);
        term r = check(b, l.type);
        term eq = builtin::mk_eq(m_store.instantiate(l.type), l.value, r);
        return {op == "=" ? eq : builtin::mk_not(eq), P};
    }
    if (op == "≤" || op == "<" || op == "≥" || op == ">") {
        term l = check(a, N), r = check(b, N);
        if (op == "≥" || op == ">")
            std::swap(l, r);
        return {op == "≤" || op == "≥" ? builtin::nat_le(l, r) : builtin::nat_lt(l, r), P};
    }
    if (op == "+" || op == "*") {
        term l = check(a, N), r = check(b, N);
        return {op == "+" ? builtin::nat_add(l, r) : builtin::nat_mul(l, r), N};
    }
    term l = check(a, P), r = check(b, P);
    if (op == "∧")
        return {builtin::mk_and(l, r), P};
    if (op == "∨")
        return {builtin::mk_or(l, r), P};
    return {builtin::mk_iff(l, r), P};
}

elaborator::typed elaborator::go_binder(syntax const &s, std::optional<term> const &expected) {
    std::size_t saved = m_lctx.size();
    std::vector<fvar_id> xs;
    std::optional<term> exp = expected ? std::optional<term>(m_store.instantiate(*expected)) : std::nullopt;
    bool lambda = s.kind == stx_kind::lambda;
    for (auto const &b : s.binders) {
        std::optional<term> dom;
        if (lambda && exp) {
            term w = whnf(*exp);
            if (w.is_pi())
                dom = w.binder_type();
            exp = w.is_pi() ? std::optional<term>(w) : std::nullopt;
        }
        term ty;
        if (b.type) {
            ty = elab_type(*b.type);
            if (dom && !unify(ty, *dom))
                fail(*b.type, "binder type mismatch: " + show(ty) + " but the expected type has " + show(*dom));
        } else {
            ty = dom ? *dom : fresh_type_mvar();
        }
        fvar_id x = push_local(b.name, ty);
        xs.push_back(x);
        if (lambda && exp)
            exp = instantiate(exp->binder_body(), mk_fvar(x));
    }
    syntax const &body = *s.args[0];
    typed r;
    if (lambda) {
        typed bt = go(body, exp);
        if (exp && !unify(bt.type, *exp))
            fail(body, "type mismatch: " + show(bt.value) + " has type " + show(bt.type) +
                           " but is expected to have type " + show(*exp));
        r.value = mk_lambda_fvars(m_store, m_lctx, xs, bt.value);
        r.type = mk_pi_fvars(m_store, m_lctx, xs, bt.type);
    } else if (s.kind == stx_kind::pi) {
        term bt = elab_type(body);
        auto lvl = type_checker(m_env, m_lctx, &m_store).sort_of(m_store.instantiate(bt));
        r.value = mk_pi_fvars(m_store, m_lctx, xs, bt);
        r.type = lvl == sort_level::prop ? mk_prop() : mk_type();
    } else {
        term v = check(body, mk_prop());
        for (std::size_t i = xs.size(); i-- > 0;) {
            term ty = m_store.instantiate(m_lctx.find(xs[i])->type);
            v = mk_app(mk_const("Exists"), {ty, mk_lambda_fvars(m_store, m_lctx, {xs[i]}, v)});
        }
        r.value = v;
        r.type = mk_prop();
    }
    pop_to(saved);
    return r;
}

elaborator::typed elaborator::go_let(syntax const &s, std::optional<term> const &expected) {
    auto const &b = s.binders[0];
    term val, ty;
    if (b.type) {
        ty = elab_type(*b.type);
        val = check(*s.args[0], ty);
    } else {
        typed v = go(*s.args[0], std::nullopt);
        val = v.value;
        ty = v.type;
    }
    std::size_t saved = m_lctx.size();
    fvar_id x = push_local(b.name, m_store.instantiate(ty), m_store.instantiate(val));
    typed bt = go(*s.args[1], expected);
    typed r;
    r.value = mk_let_fvar(m_store, m_lctx, x, bt.value);
    r.type = instantiate(abstract(elim_mvar_deps(m_store, {x}, bt.type), x), m_store.instantiate(val));
    pop_to(saved);
    return r;
}

term elab_statement(environment const &env, std::string_view src, meta_store &store) {
    syntax_ptr stx = parse_term_string(src);
    elaborator e(env, store, {}, src);
    term t = e.elab_type(*stx);
    if (!store.unassigned_mvars(t).empty())
        throw exception(error_kind::elab_error, "statement contains unresolved placeholders: " + pp(t, {}));
    return t;
}

} // namespace metatac::frontend
