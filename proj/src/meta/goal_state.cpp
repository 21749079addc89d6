/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/meta/goal_state.h"
#include <algorithm>
#include <numeric>
#include <set>
#include "metatac/kernel/error.h"
#include "metatac/kernel/type_checker.h"

namespace metatac {

bool goal_state::has_goal(mvar_id g) const { return std::find(goals.begin(), goals.end(), g) != goals.end(); }

goal_state make_state(environment env, meta_store store, std::vector<mvar_id> goals, mvar_id root) {
    store.seal();
    return goal_state{std::move(env), std::move(store), std::move(goals), root};
}

goal_state state_init(environment const &env, term const &target, local_context const &ctx, meta_store store) {
    type_checker tc(env, ctx, &store);
    if (!tc.sort_of(target)) {
        term ty = tc.infer(target);
        throw type_error("type expected, got " + describe_term(target, ctx) + " : " + describe_term(ty, ctx), "target");
    }
    mvar_id root = store.mk_mvar(ctx, target, mvar_kind::synthetic, "user");
    return make_state(env, std::move(store), {root}, root);
}

std::vector<mvar_id> mentions(goal_state const &s, mvar_id g) {
    auto const &d = s.store.get(g);
    std::vector<mvar_id> r{g};
    auto add = [&](term const &t) {
        for (mvar_id m : s.store.unassigned_mvars(t))
            if (std::find(r.begin(), r.end(), m) == r.end())
                r.push_back(m);
    };
    for (auto const &e : d.ctx.decls()) {
        add(e.type);
        if (e.value)
            add(*e.value);
    }
    add(d.target);
    return r;
}

std::vector<coupling_group> coupling_groups(meta_store const &store, std::vector<mvar_id> const &goals) {
    goal_state tmp{environment{}, store, goals, goals.empty() ? mvar_id{} : goals.front()};
    std::size_t n = goals.size();
    std::vector<std::vector<mvar_id>> ms(n);
    for (std::size_t i = 0; i < n; ++i)
        ms[i] = mentions(tmp, goals[i]);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = root(parent[i]);
    };
    std::map<std::uint64_t, std::size_t> first_owner;
    for (std::size_t i = 0; i < n; ++i)
        for (mvar_id m : ms[i]) {
            auto [it, inserted] = first_owner.emplace(m.idx, i);
            if (!inserted)
                parent[root(i)] = root(it->second);
        }
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < n; ++i)
        comps[root(i)].push_back(i);
    std::vector<coupling_group> out;
    for (auto const &[_, members] : comps) {
        coupling_group g;
        std::map<std::uint64_t, unsigned> count;
        for (std::size_t i : members) {
            g.goals.push_back(goals[i]);
            for (mvar_id m : ms[i])
                ++count[m.idx];
        }
        for (auto const &[m, c] : count)
            if (c >= 2)
                g.shared.push_back(mvar_id{m});
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](coupling_group const &a, coupling_group const &b) {
        return std::min_element(a.goals.begin(), a.goals.end())->idx <
               std::min_element(b.goals.begin(), b.goals.end())->idx;
    });
    return out;
}

std::vector<coupling_group> coupling_groups(goal_state const &s) { return coupling_groups(s.store, s.goals); }

goal_state continue_state(goal_state const &target, goal_state const &basis,
                          std::optional<std::vector<mvar_id>> const &subset) {
    auto ancestor = target.store.common_ancestor(basis.store);
    if (!ancestor)
        throw exception(error_kind::no_common_ancestor, "the two states do not share a common ancestor");
    std::vector<mvar_id> candidates;
    if (subset) {
        for (mvar_id g : *subset)
            if (!basis.has_goal(g))
                throw exception(error_kind::unknown_goal,
                                "?m." + std::to_string(g.idx) + " is not a goal of the basis state");
        for (mvar_id g : basis.goals)
            if (std::find(subset->begin(), subset->end(), g) != subset->end())
                candidates.push_back(g);
    } else {
        if (!target.goals.empty())
            throw exception(error_kind::invalid_request,
                            "the target state still has goals; pass an explicit goal list to resume");
        candidates = basis.goals;
    }
    std::vector<mvar_id> goals = subset ? target.goals : std::vector<mvar_id>{};
    std::size_t resumed = 0;
    for (mvar_id g : candidates) {
        if (g.idx >= *ancestor || !target.store.contains(g))
            throw exception(error_kind::no_common_ancestor,
                            "?m." + std::to_string(g.idx) + " was created after the states diverged");
        if (target.store.is_assigned(g) || std::find(goals.begin(), goals.end(), g) != goals.end())
            continue;
        goals.push_back(g);
        ++resumed;
    }
    if (resumed == 0)
        throw exception(error_kind::nothing_to_resume, "all goals of the basis state are already assigned");
    return make_state(target.env, target.store, std::move(goals), target.root);
}

term root_proof(goal_state const &s) { return s.store.instantiate(mk_mvar(s.root)); }

bool is_solved(goal_state const &s) { return s.goals.empty() && s.store.unassigned_mvars(root_proof(s)).empty(); }

bool sound(goal_state const &s) {
    if (!is_solved(s))
        return false;
    term p = root_proof(s);
    if (p.has_mvar())
        return false;
    auto const &d = s.store.get(s.root);
    try {
        type_checker tc(s.env, s.store.instantiate(d.ctx));
        return tc.is_def_eq(tc.infer(p), s.store.instantiate(d.target));
    } catch (exception const &) {
        return false;
    }
}

std::vector<mvar_id> dormant_goals(goal_state const &s) {
    std::vector<mvar_id> r;
    for (mvar_id m : s.store.unassigned_mvars(root_proof(s)))
        if (!s.has_goal(m))
            r.push_back(m);
    return r;
}

std::uint64_t state_table::add(goal_state s, std::optional<std::uint64_t> parent) {
    std::lock_guard lock(m_mutex);
    std::uint64_t id = m_next++;
    m_states.emplace(id, entry{std::make_shared<goal_state const>(std::move(s)), parent});
    return id;
}

std::shared_ptr<goal_state const> state_table::find(std::uint64_t id) const {
    std::lock_guard lock(m_mutex);
    auto it = m_states.find(id);
    return it == m_states.end() ? nullptr : it->second.state;
}

std::shared_ptr<goal_state const> state_table::get(std::uint64_t id) const {
    if (auto s = find(id))
        return s;
    throw exception(error_kind::unknown_state, "unknown state " + std::to_string(id));
}

std::optional<std::uint64_t> state_table::parent(std::uint64_t id) const {
    std::lock_guard lock(m_mutex);
    auto it = m_states.find(id);
    return it == m_states.end() ? std::nullopt : it->second.parent;
}

std::size_t state_table::size() const {
    std::lock_guard lock(m_mutex);
    return m_states.size();
}

std::size_t state_table::gc(std::vector<std::uint64_t> const &keep) {
    std::lock_guard lock(m_mutex);
    std::set<std::uint64_t> k(keep.begin(), keep.end());
    std::size_t dropped = 0;
    for (auto it = m_states.begin(); it != m_states.end();) {
        if (k.count(it->first)) {
            ++it;
        } else {
            it = m_states.erase(it);
            ++dropped;
        }
    }
    return dropped;
}

} // namespace metatac
