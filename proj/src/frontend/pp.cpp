/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/frontend/pp.h"
#include <sstream>
#include "metatac/frontend/syntax.h"
#include "metatac/kernel/type_checker.h"

namespace metatac {

std::string describe_term(term const &t, local_context const &ctx) { return frontend::pp(t, ctx); }

namespace frontend {
namespace {

constexpr unsigned max_prec = 1025;
constexpr unsigned app_prec = 1024;

struct doc {
    std::string s;
    unsigned prec;
};

struct binop_info {
    char const *sym;
    unsigned prec;
    int assoc; // -1 left, 1 right, 0 none
};

std::optional<binop_info> binop_of(std::string const &c, unsigned nargs) {
    if (c == "Eq" && nargs == 3)
        return binop_info{"=", 50, 0};
    if (nargs != 2)
        return std::nullopt;
    if (c == "Nat.le")
        return binop_info{"≤", 50, 0};
    if (c == "Nat.lt")
        return binop_info{"<", 50, 0};
    if (c == "Nat.add")
        return binop_info{"+", 65, -1};
    if (c == "Nat.mul")
        return binop_info{"*", 70, -1};
    if (c == "And")
        return binop_info{"∧", 35, 1};
    if (c == "Or")
        return binop_info{"∨", 30, 1};
    if (c == "Iff")
        return binop_info{"↔", 20, 0};
    return std::nullopt;
}

class printer {
    local_context const &m_ctx;
    pp_options m_opts;
    environment const *m_env;
    std::vector<std::string> m_bound; // innermost last

    static std::string paren(doc const &d, unsigned need) { return d.prec < need ? "(" + d.s + ")" : d.s; }

    std::string fvar_name(fvar_id x) const {
        if (auto const *d = m_ctx.find(x)) {
            auto const *latest = m_ctx.find_by_name(d->user_name);
            return latest && latest->id != x ? d->user_name + "✝" : d->user_name;
        }
        return "_uniq." + std::to_string(x.idx);
    }

    bool name_used(term const &body, std::string const &n) const {
        bool used = false;
        for_each(body, [&](term const &e, unsigned off) {
            if (used)
                return false;
            if (e.is_fvar()) {
                used = fvar_name(e.fvar()) == n;
            } else if (e.is_bvar() && e.bvar_idx() > off) {
                unsigned k = e.bvar_idx() - off - 1;
                used = k < m_bound.size() && m_bound[m_bound.size() - 1 - k] == n;
            }
            return !used && (e.has_fvar() || e.has_loose_bvars());
        });
        return used;
    }

    std::string fresh(std::string base, term const &body) const {
        if (base.empty() || base == "_" || is_keyword_text(base))
            base = "x";
        if (!name_used(body, base))
            return base;
        for (unsigned i = 1;; ++i) {
            std::string n = base + "_" + std::to_string(i);
            if (!name_used(body, n))
                return n;
        }
    }

    std::string at(term const &t, unsigned need) { return paren(go(t), need); }

    doc go_const(std::string const &c, bool applied) {
        (void)applied;
        if (m_opts.all && m_env)
            if (auto const *d = m_env->find(c); d && d->num_implicit_prefix() > 0)
                return {"@" + c, max_prec};
        return {c, max_prec};
    }

    doc go_app(term const &t) {
        term const &f = get_app_fn(t);
        auto args = get_app_args(t);
        if (!m_opts.all && f.is_constant()) {
            std::string const &c = f.const_name();
            if (auto op = binop_of(c, static_cast<unsigned>(args.size()))) {
                term const &a = args[args.size() - 2], &b = args.back();
                unsigned lp = op->assoc == -1 ? op->prec : op->prec + 1;
                unsigned rp = op->assoc == 1 ? op->prec : op->prec + 1;
                return {at(a, lp) + " " + op->sym + " " + at(b, rp), op->prec};
            }
            if (c == "Not" && args.size() == 1)
                return {"¬" + at(args[0], 40), 40};
            if (c == "Exists" && args.size() == 2 && args[1].is_lambda())
                return go_exists(args[1]);
            if (c == "Nat.succ" && args.size() == 1 && !args[0].is_lit() && !args[0].is_mvar()) {
                doc a = go(args[0]);
                return {paren(a, max_prec) + ".succ", max_prec};
            }
        }
        std::string s = f.is_constant() ? go_const(f.const_name(), true).s : at(f, max_prec);
        for (auto const &a : args)
            s += " " + at(a, max_prec);
        return {s, app_prec};
    }

    doc go_exists(term lam) {
        std::vector<std::string> names;
        std::size_t pushed = 0;
        for (;;) {
            std::string n = fresh(lam.binder_name(), lam.binder_body());
            names.push_back(n);
            m_bound.push_back(n);
            ++pushed;
            term body = lam.binder_body();
            if (is_app_of(body, "Exists", 2) && get_app_args(body)[1].is_lambda()) {
                lam = get_app_args(body)[1];
                continue;
            }
            std::string s = "∃";
            for (auto const &x : names)
                s += " " + x;
            s += ", " + go(body).s;
            m_bound.resize(m_bound.size() - pushed);
            return {s, 0};
        }
    }

    doc go_pi(term const &t) {
        bool dep = has_loose_bvar(t.binder_body(), 0);
        if (!dep) {
            std::string a = at(t.binder_type(), 26);
            m_bound.push_back("");
            std::string b = at(t.binder_body(), 25);
            m_bound.pop_back();
            return {a + " → " + b, 25};
        }
        // group `∀ (p q : Prop)` while binders are dependent and share a type
        term cur = t;
        std::string s = "∀";
        std::size_t pushed = 0;
        for (;;) {
            term const &ty = cur.binder_type();
            std::string tys = go(ty).s;
            std::vector<std::string> names;
            for (;;) {
                std::string n = fresh(cur.binder_name(), cur.binder_body());
                names.push_back(n);
                m_bound.push_back(n);
                ++pushed;
                term body = cur.binder_body();
                if (m_opts.all || !body.is_pi() || !has_loose_bvar(body.binder_body(), 0))
                    break;
                term const &ty2 = body.binder_type();
                if (has_loose_bvar(ty2, 0) || !(lower_loose_bvars(ty2, 1, 1) == ty))
                    break;
                cur = body;
            }
            s += " (";
            for (std::size_t i = 0; i < names.size(); ++i)
                s += (i ? " " : "") + names[i];
            s += " : " + tys + ")";
            term body = cur.binder_body();
            if (!m_opts.all && body.is_pi() && has_loose_bvar(body.binder_body(), 0)) {
                cur = body;
                continue;
            }
            s += ", " + go(body).s;
            break;
        }
        m_bound.resize(m_bound.size() - pushed);
        return {s, 0};
    }

    doc go_lambda(term const &t) {
        term cur = t;
        std::string s = "fun";
        std::size_t pushed = 0;
        for (;;) {
            std::string n = fresh(cur.binder_name(), cur.binder_body());
            if (m_opts.all)
                s += " (" + n + " : " + go(cur.binder_type()).s + ")";
            else
                s += " " + n;
            m_bound.push_back(n);
            ++pushed;
            if (!cur.binder_body().is_lambda())
                break;
            cur = cur.binder_body();
        }
        s += " => " + go(cur.binder_body()).s;
        m_bound.resize(m_bound.size() - pushed);
        return {s, 0};
    }

    doc go(term const &t) {
        switch (t.kind()) {
        case term_kind::sort: return {t.sort() == sort_level::prop ? "Prop" : "Type", max_prec};
        case term_kind::constant: return go_const(t.const_name(), false);
        case term_kind::bvar: {
            unsigned i = t.bvar_idx();
            if (i < m_bound.size() && !m_bound[m_bound.size() - 1 - i].empty())
                return {m_bound[m_bound.size() - 1 - i], max_prec};
            return {"#" + std::to_string(i), max_prec};
        }
        case term_kind::fvar: return {fvar_name(t.fvar()), max_prec};
        case term_kind::mvar: return {"?m." + std::to_string(t.mvar().idx), max_prec};
        case term_kind::app: return go_app(t);
        case term_kind::lambda: return go_lambda(t);
        case term_kind::pi: return go_pi(t);
        case term_kind::let: {
            std::string n = fresh(t.let_name(), t.let_body());
            std::string s = "let " + n;
            if (m_opts.all)
                s += " : " + go(t.let_type()).s;
            s += " := " + go(t.let_value()).s + "; ";
            m_bound.push_back(n);
            s += go(t.let_body()).s;
            m_bound.pop_back();
            return {s, 0};
        }
        case term_kind::lit: return {t.lit_value().str(), max_prec};
        }
        return {"?", max_prec};
    }

public:
    printer(local_context const &ctx, pp_options const &o, environment const *env)
        : m_ctx(ctx), m_opts(o), m_env(env) {}

    std::string run(term const &t) { return go(t).s; }
};

std::string hyp_lines(local_context const &ctx, pp_options const &o, environment const *env) {
    std::vector<std::string> lines;
    auto const &ds = ctx.decls();
    // each hypothesis is printed in the context of its predecessors
    for (std::size_t i = 0; i < ds.size();) {
        auto const &d = ds[i];
        printer p(ctx, o, env);
        std::string ty = p.run(d.type);
        if (d.value) {
            lines.push_back(d.user_name + " : " + ty + " := " + p.run(*d.value));
            ++i;
            continue;
        }
        std::string names = d.user_name;
        std::size_t j = i + 1;
        while (o.group_hyps && j < ds.size() && !ds[j].value && ds[j].type == d.type &&
               !occurs_fvar(ds[j].type, d.id)) {
            names += " " + ds[j].user_name;
            ++j;
        }
        lines.push_back(names + " : " + ty);
        i = j;
    }
    std::string r;
    for (std::size_t i = 0; i < lines.size(); ++i)
        r += (i ? "\n" : "") + lines[i];
    return r;
}

} // namespace

std::string pp(term const &t, local_context const &ctx, pp_options const &o, environment const *env) {
    return printer(ctx, o, env).run(t);
}

std::string pp_hyps(meta_store const &store, mvar_id g, pp_options const &o, environment const *env) {
    auto const &d = store.get(g);
    return hyp_lines(store.instantiate(d.ctx), o, env);
}

std::string pp_goal(meta_store const &store, mvar_id g, pp_options const &o, environment const *env) {
    auto const &d = store.get(g);
    local_context ctx = store.instantiate(d.ctx);
    std::string h = hyp_lines(ctx, o, env);
    term target = store.instantiate(d.target);
    std::string line;
    if (d.conv && is_app_of(target, "Eq", 3))
        line = "| " + pp(get_app_args(target)[1], ctx, o, env);
    else
        line = std::string(o.ascii ? "|-" : "⊢") + " " + pp(target, ctx, o, env);
    return h.empty() ? line : h + "\n" + line;
}

} // namespace frontend
} // namespace metatac
