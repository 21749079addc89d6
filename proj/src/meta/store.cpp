/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/meta/store.h"
#include <unordered_set>
#include "metatac/kernel/error.h"

namespace metatac {

meta_store::meta_store() : m_decls(std::make_shared<map>()) {
    m_lineage = std::make_shared<lineage_node const>(lineage_node{nullptr, m_next_id});
}

void meta_store::detach() {
    if (m_decls.use_count() > 1)
        m_decls = std::make_shared<map>(*m_decls);
    ++m_version;
}

metavar_decl const *meta_store::find(mvar_id id) const {
    auto it = m_decls->find(id.idx);
    return it == m_decls->end() ? nullptr : it->second.get();
}

metavar_decl const &meta_store::get(mvar_id id) const {
    if (auto d = find(id))
        return *d;
    throw exception(error_kind::unknown_goal, "unknown metavariable ?m." + std::to_string(id.idx));
}

bool meta_store::is_assigned(mvar_id id) const {
    auto d = find(id);
    return d && d->is_assigned();
}

std::vector<mvar_id> meta_store::ids() const {
    std::vector<mvar_id> r;
    for (auto const &[k, _] : *m_decls)
        r.push_back(mvar_id{k});
    return r;
}

mvar_id meta_store::mk_mvar(local_context ctx, term target, mvar_kind kind, std::string origin) {
    detach();
    mvar_id id{m_next_id++};
    auto d = std::make_shared<metavar_decl>();
    d->id = id;
    d->ctx = std::move(ctx);
    d->target = std::move(target);
    d->kind = kind;
    d->origin = std::move(origin);
    m_decls->emplace(id.idx, std::move(d));
    return id;
}

fvar_id meta_store::mk_fvar_id() {
    ++m_version;
    return fvar_id{m_next_id++};
}

void meta_store::assign(mvar_id id, term value) {
    auto const &old = get(id);
    if (old.is_assigned())
        throw exception(error_kind::tactic_failure, "metavariable ?m." + std::to_string(id.idx) + " is already assigned");
    auto d = std::make_shared<metavar_decl>(old);
    d->assignment = std::move(value);
    detach();
    (*m_decls)[id.idx] = std::move(d);
}

void meta_store::assign_delayed(mvar_id id, std::vector<fvar_id> fvars, mvar_id pending) {
    auto const &old = get(id);
    if (old.is_assigned())
        throw exception(error_kind::tactic_failure, "metavariable ?m." + std::to_string(id.idx) + " is already assigned");
    auto d = std::make_shared<metavar_decl>(old);
    d->delayed = delayed_assignment{std::move(fvars), pending};
    detach();
    (*m_decls)[id.idx] = std::move(d);
}

void meta_store::set_conv_frame(mvar_id id, conv_frame f) {
    auto d = std::make_shared<metavar_decl>(get(id));
    d->conv = std::move(f);
    detach();
    (*m_decls)[id.idx] = std::move(d);
}

term meta_store::instantiate(term const &t) const {
    if (!t.has_mvar())
        return t;
    std::function<term(term const &)> go;
    // `fun xs => pending` once the pending value has no holes left
    auto delayed_value = [&](metavar_decl const &d) -> std::optional<term> {
        term v = go(::metatac::mk_mvar(d.delayed->pending));
        if (!unassigned_mvars(v).empty())
            return std::nullopt;
        auto const &xs = d.delayed->fvars;
        auto pd = find(d.delayed->pending);
        term r = abstract(v, xs);
        for (std::size_t i = xs.size(); i-- > 0;) {
            auto ld = pd ? pd->ctx.find(xs[i]) : nullptr;
            term ty = ld ? abstract(go(ld->type), std::span<fvar_id const>(xs.data(), i)) : mk_type();
            r = mk_lambda(ld ? ld->user_name : "x", ty, r);
        }
        return r;
    };
    go = [&](term const &e) -> term {
        return replace(e, [&](term const &s, unsigned) -> std::optional<term> {
            if (!s.has_mvar())
                return s;
            if (s.is_mvar()) {
                auto d = find(s.mvar());
                if (d && d->assignment)
                    return go(*d->assignment);
                if (d && d->delayed)
                    if (auto v = delayed_value(*d))
                        return *v;
                return s;
            }
            if (s.is_app()) {
                term const &f = get_app_fn(s);
                if (!f.is_mvar())
                    return std::nullopt;
                auto d = find(f.mvar());
                std::vector<term> args = get_app_args(s);
                for (auto &a : args)
                    a = go(a);
                if (d && d->assignment)
                    return head_beta(mk_app(go(*d->assignment), args));
                if (d && d->delayed)
                    if (auto v = delayed_value(*d))
                        return head_beta(mk_app(*v, args));
                return mk_app(f, args);
            }
            return std::nullopt;
        });
    };
    return go(t);
}

local_context meta_store::instantiate(local_context const &ctx) const {
    local_context r;
    for (auto d : ctx.decls()) {
        d.type = instantiate(d.type);
        if (d.value)
            d.value = instantiate(*d.value);
        r.push_back(std::move(d));
    }
    return r;
}

std::vector<mvar_id> meta_store::unassigned_mvars(term const &t) const {
    std::vector<mvar_id> out;
    std::unordered_set<mvar_id> seen;
    std::function<void(term const &)> visit = [&](term const &e) {
        for (mvar_id m : collect_mvars(e)) {
            if (!seen.insert(m).second)
                continue;
            auto d = find(m);
            if (!d) {
                out.push_back(m);
            } else if (d->assignment) {
                visit(*d->assignment);
            } else if (d->delayed) {
                visit(::metatac::mk_mvar(d->delayed->pending));
            } else {
                out.push_back(m);
            }
        }
    };
    visit(t);
    return out;
}

void meta_store::seal() {
    m_lineage = std::make_shared<lineage_node const>(lineage_node{m_lineage, m_next_id});
}

std::optional<std::uint64_t> meta_store::common_ancestor(meta_store const &o) const {
    std::unordered_set<lineage_node const *> mine;
    for (auto n = m_lineage.get(); n; n = n->parent.get())
        mine.insert(n);
    for (auto n = o.m_lineage.get(); n; n = n->parent.get())
        if (mine.count(n))
            return n->next_id;
    return std::nullopt;
}

} // namespace metatac
