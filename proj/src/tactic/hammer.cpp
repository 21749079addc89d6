/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <algorithm>
#include "detail.h"
#include "metatac/kernel/builtins.h"

namespace metatac::tactic::detail {
namespace {

using frontend::syntax;
using frontend::syntax_ptr;

syntax_ptr ident(std::string const &n) {
    auto s = std::make_shared<syntax>();
    s->kind = frontend::stx_kind::ident;
    s->text = n;
    return s;
}

tactic_expr mk(tactic_kind k) {
    tactic_expr t;
    t.kind = k;
    return t;
}

tactic_expr mk_rw(std::string const &n, bool reverse) {
    tactic_expr t = mk(tactic_kind::rw);
    t.rules.push_back(rw_rule{ident(n), reverse});
    return t;
}

tactic_expr mk_apply(std::string const &n) {
    tactic_expr t = mk(tactic_kind::apply);
    t.term = ident(n);
    return t;
}

struct node {
    meta_store store;
    std::vector<mvar_id> goals;
};

std::optional<std::string> concl_head(term ty) {
    while (ty.is_pi())
        ty = ty.binder_body();
    if (auto c = get_app_const(ty))
        return c;
    return std::nullopt;
}

class hammer {
    environment m_env;
    std::uint64_t m_budget;
    std::uint64_t m_nodes = 0;
    std::vector<std::pair<std::string, std::string>> m_lemmas; // (head, name)
    std::vector<tactic_expr> m_closers;

    // run `t` on the first goal; nullopt on failure or when nothing changed
    std::optional<node> step(node const &n, tactic_expr const &t) {
        mvar_id g = n.goals.front();
        tactic_ctx c(m_env, n.store, g, nullptr);
        try {
            run_any(c, t);
        } catch (std::exception const &) {
            return std::nullopt;
        }
        node r{std::move(c.store), {}};
        auto add = [&](mvar_id m) {
            if (!r.store.is_assigned(m) && std::find(r.goals.begin(), r.goals.end(), m) == r.goals.end())
                r.goals.push_back(m);
        };
        for (mvar_id m : c.produced)
            add(m);
        if (r.goals.size() == 1 && r.goals.front() == g)
            return std::nullopt; // no progress
        for (std::size_t i = 1; i < n.goals.size(); ++i)
            add(n.goals[i]);
        return r;
    }

    void tick() {
        if (++m_nodes > m_budget)
            throw exception(error_kind::hammer_exhausted,
                            "hammer exhausted its budget of " + std::to_string(m_budget) + " nodes");
    }

    // closers never branch: the first success is kept
    node close_easy(node n) {
        while (!n.goals.empty()) {
            bool closed = false;
            for (auto const &t : m_closers) {
                tick();
                auto r = step(n, t);
                if (r && r->goals.size() < n.goals.size()) {
                    n = std::move(*r);
                    closed = true;
                    break;
                }
            }
            if (!closed)
                break;
        }
        return n;
    }

    std::vector<tactic_expr> expansions(node const &n) {
        std::vector<tactic_expr> out;
        auto const &d = n.store.get(n.goals.front());
        local_context ctx = n.store.instantiate(d.ctx);
        term T = n.store.instantiate(d.target);
        type_checker tc(m_env, ctx, &n.store);
        term w = tc.whnf(T);
        if (w.is_pi()) {
            out.push_back(mk(tactic_kind::intro));
            return out;
        }
        auto const &ds = ctx.decls();
        std::vector<std::string> hyps;
        for (std::size_t i = ds.size(); i-- > 0;)
            if (ctx.find_by_name(ds[i].user_name) == &ds[i] && !ds[i].value)
                hyps.push_back(ds[i].user_name);
        bool eq = is_app_of(T, "Eq", 3);
        for (auto const &h : hyps)
            if (is_app_of(tc.whnf_core(ctx.find_by_name(h)->type), "Eq", 3)) {
                out.push_back(mk_rw(h, false));
                out.push_back(mk_rw(h, true));
            }
        out.push_back(mk(tactic_kind::simp));
        for (auto const &l : default_simp_lemmas()) {
            out.push_back(mk_rw(l, false));
            out.push_back(mk_rw(l, true));
        }
        auto head = get_app_const(w);
        for (auto const &h : hyps)
            if (auto hh = concl_head(n.store.instantiate(ctx.find_by_name(h)->type)); hh && head && *hh == *head)
                out.push_back(mk_apply(h));
        if (head)
            for (auto const &[lh, name] : m_lemmas)
                if (lh == *head && !(eq && name == "Eq.trans"))
                    out.push_back(mk_apply(name));
        if (eq && head)
            out.push_back(mk_apply("Eq.trans"));
        return out;
    }

    std::optional<node> dfs(node const &n0, unsigned depth) {
        node n = close_easy(n0);
        if (n.goals.empty())
            return n;
        if (depth == 0)
            return std::nullopt;
        for (auto const &t : expansions(n)) {
            tick();
            auto r = step(n, t);
            if (!r)
                continue;
            if (auto s = dfs(*r, depth - 1))
                return s;
        }
        return std::nullopt;
    }

public:
    hammer(environment env, std::uint64_t budget) : m_env(std::move(env)), m_budget(budget) {
        for (auto const &name : m_env.order()) {
            auto const *d = m_env.find(name);
            if (d->kind == decl_kind::definition)
                continue;
            if (auto h = concl_head(d->type); h && *h != "Nat.rec")
                m_lemmas.emplace_back(*h, name);
        }
        m_closers.push_back(mk(tactic_kind::assumption));
        m_closers.push_back(mk(tactic_kind::rfl));
        m_closers.push_back(mk(tactic_kind::decide));
        tactic_expr triv = mk(tactic_kind::exact);
        triv.term = ident("True.intro");
        m_closers.push_back(triv);
        m_closers.push_back(mk(tactic_kind::simp));
    }

    std::uint64_t nodes() const { return m_nodes; }

    std::optional<node> run(node const &start) {
        for (unsigned d = 0; d <= hammer_max_depth; ++d)
            if (auto r = dfs(start, d))
                return r;
        return std::nullopt;
    }
};

} // namespace

void run_hammer(tactic_ctx &c, std::uint64_t budget) {
    if (budget == 0)
        c.fail("hammer needs a budget of at least one node");
    hammer h(c.env, budget);
    std::optional<node> r;
    try {
        r = h.run(node{c.store, {c.goal}});
    } catch (exception const &) {
        c.hammer_nodes = h.nodes();
        throw;
    }
    c.hammer_nodes = h.nodes();
    if (!r)
        throw exception(error_kind::hammer_exhausted,
                        "hammer failed: search space exhausted after " + std::to_string(h.nodes()) + " nodes");
    c.store = std::move(r->store);
    c.messages.push_back("hammer: " + std::to_string(h.nodes()) + " nodes");
}

} // namespace metatac::tactic::detail
