/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/search/search.h"
#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include "metatac/frontend/pp.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/tactic/tactic.h"

namespace metatac::search {
namespace {

// constant name, or the id of a free variable head
std::optional<std::string> head_key(term const &t) {
    term const &f = get_app_fn(t);
    if (f.is_constant())
        return f.const_name();
    if (f.is_fvar())
        return "#" + std::to_string(f.fvar().idx);
    return std::nullopt;
}

std::optional<std::string> concl_head(term ty) {
    while (ty.is_pi())
        ty = ty.binder_body();
    return head_key(ty);
}

// search never applies these: they only reshuffle equations
bool skipped_lemma(std::string const &n) {
    return n == "Nat.rec" || n == "Eq.trans" || n == "Eq.symm" || n == "Eq.congrArg" || n == "Eq.subst";
}

constexpr unsigned small_numerals = 10;

std::string line(std::uint64_t it, std::uint64_t nodes, std::uint64_t depth, bool solved) {
    return "iteration=" + std::to_string(it) + " nodes=" + std::to_string(nodes) + " depth=" + std::to_string(depth) +
           " solved=" + (solved ? "1" : "0");
}

std::optional<goal_state> try_run(goal_state const &s, mvar_id g, std::string const &tac, search_stats &st) {
    ++st.tactic_calls;
    try {
        return tactic::run_tactic(s, g, tac, true).next;
    } catch (std::exception const &) {
        return std::nullopt;
    }
}

std::string state_key(goal_state const &s) {
    std::string k;
    for (mvar_id g : s.goals)
        k += frontend::pp_goal(s.store, g, {}, &s.env) + "\n\n";
    return k;
}

} // namespace

std::vector<std::string> default_candidates(goal_state const &s, mvar_id goal, std::size_t cap) {
    std::vector<std::string> out;
    auto add = [&](std::string c) {
        if (std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(std::move(c));
    };
    auto const &d = s.store.get(goal);
    local_context ctx = s.store.instantiate(d.ctx);
    term T = s.store.instantiate(d.target);
    type_checker tc(s.env, ctx, &s.store);
    term w = T, wf = T;
    bool prop = false;
    try {
        w = tc.whnf_core(T);
        wf = tc.whnf(T);
        prop = tc.is_prop(T);
    } catch (exception const &) {
    }
    if (wf.is_pi()) {
        std::string base = has_loose_bvar(wf.binder_body(), 0) ? wf.binder_name() : "h";
        add("intro " + ctx.fresh_name(base));
    }

    std::vector<local_decl const *> hyps;
    auto const &ds = ctx.decls();
    for (std::size_t i = ds.size(); i-- > 0;)
        if (ctx.find_by_name(ds[i].user_name) == &ds[i])
            hyps.push_back(&ds[i]);
    for (auto const *h : hyps) {
        if (T.has_mvar() || h->type.has_mvar())
            continue;
        try {
            if (tc.is_def_eq(h->type, T))
                add("exact " + h->user_name);
        } catch (exception const &) {
        }
    }
    auto head = get_app_const(w);
    if (head == "Eq" || head == "Nat.le" || head == "Iff")
        add("rfl");
    if (prop && !T.has_fvar() && !T.has_mvar())
        add("decide");
    if (head == "True")
        add("exact True.intro");
    for (auto const *h : hyps) {
        if (h->value)
            continue;
        auto hh = get_app_const(tc.whnf_core(h->type));
        if (hh == "Or" || hh == "And" || hh == "Exists" || hh == "False")
            add("cases " + h->user_name);
        if (hh == "Eq" && prop) {
            add("rw [" + h->user_name + "]");
            add("rw [← " + h->user_name + "]");
        }
    }
    if (is_app_of(w, "Exists", 2))
        for (unsigned k = 0; k <= small_numerals; ++k)
            add("exists " + std::to_string(k));
    if (!prop && w.is_constant() && w.const_name() == "Nat") {
        for (auto const *h : hyps)
            if (h->type.is_constant() && h->type.const_name() == "Nat")
                add("exact " + h->user_name);
        for (unsigned k = 0; k <= small_numerals; ++k)
            add("exact " + std::to_string(k));
    }
    if (auto hk = head_key(w))
        for (auto const *h : hyps)
            if (h->type.is_pi() && concl_head(h->type) == hk)
                add("apply " + h->user_name);
    if (head) {
        for (auto const &name : s.env.order()) {
            auto const *decl = s.env.find(name);
            if (decl->kind == decl_kind::definition || skipped_lemma(name))
                continue;
            if (concl_head(decl->type) == head)
                add("apply " + name);
        }
    }
    if (prop) {
        for (auto const *h : hyps)
            if (!h->value && h->type.is_constant() && h->type.const_name() == "Nat" && occurs_fvar(T, h->id))
                add("induction " + h->user_name);
        if (head == "Eq")
            add("simp");
    }
    if (out.size() > cap)
        out.resize(cap);
    return out;
}

mvar_id policy::choose_goal(goal_state const &s) const {
    mvar_id g = s.goals.front();
    for (auto const &grp : coupling_groups(s))
        if (std::find(grp.goals.begin(), grp.goals.end(), g) != grp.goals.end())
            return *std::min_element(grp.goals.begin(), grp.goals.end());
    return g;
}

std::vector<std::string> policy::candidates(goal_state const &s, mvar_id goal) const {
    return default_candidates(s, goal);
}

mvar_id callback_policy::choose_goal(goal_state const &s) const {
    return m_choose ? m_choose(s) : policy::choose_goal(s);
}

std::vector<std::string> callback_policy::candidates(goal_state const &s, mvar_id goal) const {
    return m_cands ? m_cands(s, goal) : policy::candidates(s, goal);
}

search_result best_first(goal_state const &start, policy const &p, std::uint64_t budget) {
    if (budget == 0)
        throw exception(error_kind::budget_exhausted, "best-first search needs a budget of at least one node");
    struct item {
        goal_state s;
        std::uint64_t depth;
        std::vector<std::string> script;
    };
    std::vector<item> items;
    using key = std::tuple<std::size_t, std::uint64_t, std::size_t>; // goals, depth, insertion order
    std::priority_queue<key, std::vector<key>, std::greater<>> open;
    std::set<std::string> seen;
    search_stats st;
    auto push = [&](item it) {
        if (!seen.insert(state_key(it.s)).second)
            return;
        open.emplace(it.s.goals.size(), it.depth, items.size());
        st.max_depth = std::max(st.max_depth, it.depth);
        items.push_back(std::move(it));
    };
    auto done = [&](goal_state const &s, std::vector<std::string> script) {
        st.log.push_back(line(st.iterations, st.nodes, script.size(), true));
        return search_result{s, root_proof(s), std::move(script), st};
    };
    if (is_solved(start))
        return done(start, {});
    push(item{start, 0, {}});
    while (!open.empty()) {
        if (st.nodes >= budget)
            throw exception(error_kind::budget_exhausted,
                            "best-first search exhausted its budget of " + std::to_string(budget) + " nodes");
        auto [ng, depth, idx] = open.top();
        open.pop();
        item cur = items[idx];
        ++st.nodes;
        ++st.iterations;
        mvar_id g = p.choose_goal(cur.s);
        for (auto const &c : p.candidates(cur.s, g)) {
            auto next = try_run(cur.s, g, c, st);
            if (!next)
                continue;
            auto script = cur.script;
            script.push_back(c);
            if (is_solved(*next) && sound(*next))
                return done(*next, std::move(script));
            if (!next->goals.empty())
                push(item{*next, cur.depth + 1, std::move(script)});
        }
        st.log.push_back(line(st.iterations, st.nodes, cur.depth, false));
    }
    throw exception(error_kind::budget_exhausted,
                    "best-first search exhausted the search space after " + std::to_string(st.nodes) + " nodes");
}

std::size_t uct_select(std::vector<std::pair<double, std::uint64_t>> const &children, std::uint64_t parent_visits,
                       double c) {
    std::size_t best = 0;
    double best_score = -1;
    double ln = std::log(static_cast<double>(std::max<std::uint64_t>(parent_visits, 1)));
    for (std::size_t i = 0; i < children.size(); ++i) {
        auto [total, n] = children[i];
        double score = total / n + c * std::sqrt(ln / n);
        if (i == 0 || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

namespace {

class mcts {
    struct mnode {
        goal_state s;
        int parent = -1;
        std::uint64_t depth = 0;
        std::uint64_t visits = 0;
        double total = 0;
        std::string via;
        std::vector<int> children;
        std::vector<std::string> untried;
        bool ready = false;
        bool dead = false;
        mvar_id goal;

        explicit mnode(goal_state st) : s(std::move(st)) {}
    };

    mcts_config m_cfg;
    policy const &m_p;
    std::mt19937_64 m_rng;
    std::vector<mnode> m_nodes;
    search_stats m_st;

    std::vector<std::string> candidates(goal_state const &s, mvar_id g) {
        auto c = m_p.candidates(s, g);
        if (c.size() > m_cfg.max_candidates)
            c.resize(m_cfg.max_candidates);
        return c;
    }

    void prepare(int i) {
        auto &n = m_nodes[i];
        if (n.ready)
            return;
        n.ready = true;
        if (n.s.goals.empty())
            return;
        n.goal = m_p.choose_goal(n.s);
        n.untried = candidates(n.s, n.goal);
    }

    // random playout on a state holding a single goal; the tactics used are appended to `script`
    bool playout(goal_state s, std::vector<std::string> &script) {
        for (unsigned d = 0; d < m_cfg.rollout_depth && !s.goals.empty(); ++d) {
            mvar_id g = m_p.choose_goal(s);
            auto cands = candidates(s, g);
            bool moved = false;
            while (!cands.empty()) {
                std::size_t k = m_rng() % cands.size();
                std::string c = cands[k];
                cands.erase(cands.begin() + static_cast<std::ptrdiff_t>(k));
                if (auto next = try_run(s, g, c, m_st)) {
                    s = std::move(*next);
                    script.push_back(c);
                    moved = true;
                    break;
                }
            }
            if (!moved)
                return false;
        }
        return s.goals.empty();
    }

    // product of per-goal rollout successes
    double rollout(goal_state const &s, std::vector<std::vector<std::string>> &scripts) {
        double r = 1;
        for (mvar_id g : s.goals) {
            scripts.emplace_back();
            if (!playout(make_state(s.env, s.store, {g}, s.root), scripts.back()))
                r = 0;
            if (r == 0)
                break;
        }
        return r;
    }

    // replay successful per-goal rollouts on the real state, goal by goal
    std::optional<goal_state> stitch(goal_state const &s, std::vector<std::vector<std::string>> const &scripts,
                                     std::vector<std::string> &script) {
        meta_store store = s.store;
        for (std::size_t i = 0; i < s.goals.size(); ++i) {
            goal_state sub = make_state(s.env, store, {s.goals[i]}, s.root);
            for (auto const &c : scripts[i]) {
                if (sub.goals.empty())
                    return std::nullopt;
                auto next = try_run(sub, m_p.choose_goal(sub), c, m_st);
                if (!next)
                    return std::nullopt;
                sub = std::move(*next);
                script.push_back(c);
            }
            if (!sub.goals.empty())
                return std::nullopt;
            store = sub.store;
        }
        goal_state fin = make_state(s.env, store, {}, s.root);
        if (!is_solved(fin) || !sound(fin))
            return std::nullopt;
        return fin;
    }

    std::vector<std::string> path_script(int i) const {
        std::vector<std::string> r;
        for (; m_nodes[i].parent >= 0; i = m_nodes[i].parent)
            r.push_back(m_nodes[i].via);
        std::reverse(r.begin(), r.end());
        return r;
    }

    void mark_dead(int i) {
        while (i >= 0) {
            auto &n = m_nodes[i];
            if (!n.untried.empty())
                return;
            for (int c : n.children)
                if (!m_nodes[c].dead)
                    return;
            n.dead = true;
            i = n.parent;
        }
    }

    mcts_result finish(goal_state const &s, std::vector<std::string> script) {
        m_st.nodes = m_nodes.size();
        m_st.log.push_back(line(m_st.iterations, m_st.nodes, script.size(), true));
        mcts_result r;
        r.solved = true;
        r.result = search_result{s, root_proof(s), std::move(script), m_st};
        r.tree = summary();
        return r;
    }

public:
    mcts(mcts_config cfg, policy const &p) : m_cfg(cfg), m_p(p), m_rng(cfg.seed) {}

    tree_summary summary() const {
        tree_summary t;
        t.nodes = m_nodes.size();
        t.root_visits = m_nodes.empty() ? 0 : m_nodes[0].visits;
        for (auto const &n : m_nodes) {
            std::uint64_t sum = 0;
            for (int c : n.children)
                sum += m_nodes[c].visits;
            if (n.visits != sum + 1)
                t.consistent = false;
        }
        return t;
    }

    mcts_result run(goal_state const &start) {
        if (m_cfg.c_uct <= 0 || m_cfg.max_iterations == 0)
            throw exception(error_kind::budget_exhausted, "mcts needs c_uct > 0 and at least one iteration");
        m_nodes.emplace_back(start);
        m_nodes[0].visits = 1;
        if (is_solved(start))
            return finish(start, {});
        while (m_st.iterations < m_cfg.max_iterations && !m_nodes[0].dead) {
            ++m_st.iterations;
            // selection
            int i = 0;
            bool stuck = false;
            while (true) {
                prepare(i);
                if (!m_nodes[i].untried.empty())
                    break;
                std::vector<int> live;
                std::vector<std::pair<double, std::uint64_t>> stats;
                for (int c : m_nodes[i].children)
                    if (!m_nodes[c].dead) {
                        live.push_back(c);
                        stats.emplace_back(m_nodes[c].total, m_nodes[c].visits);
                    }
                if (live.empty()) {
                    mark_dead(i);
                    stuck = true;
                    break;
                }
                i = live[uct_select(stats, m_nodes[i].visits, m_cfg.c_uct)];
            }
            if (stuck) {
                m_st.log.push_back(line(m_st.iterations, m_nodes.size(), m_nodes[i].depth, false));
                continue;
            }
            // expansion: first candidate that runs
            std::optional<goal_state> child;
            std::string via;
            while (!m_nodes[i].untried.empty() && !child) {
                via = m_nodes[i].untried.front();
                m_nodes[i].untried.erase(m_nodes[i].untried.begin());
                child = try_run(m_nodes[i].s, m_nodes[i].goal, via, m_st);
            }
            if (!child) {
                mark_dead(i);
                m_st.log.push_back(line(m_st.iterations, m_nodes.size(), m_nodes[i].depth, false));
                continue;
            }
            int ci = static_cast<int>(m_nodes.size());
            mnode cn(std::move(*child));
            cn.parent = i;
            cn.depth = m_nodes[i].depth + 1;
            cn.via = via;
            m_nodes.push_back(std::move(cn));
            m_nodes[i].children.push_back(ci);
            m_st.max_depth = std::max(m_st.max_depth, m_nodes[ci].depth);
            goal_state const &cs = m_nodes[ci].s;
            if (cs.goals.empty()) {
                if (is_solved(cs) && sound(cs)) {
                    m_nodes[ci].visits = 1;
                    for (int a = i; a >= 0; a = m_nodes[a].parent)
                        ++m_nodes[a].visits;
                    return finish(cs, path_script(ci));
                }
                m_nodes[ci].dead = true; // unsolvable leftovers (dormant holes)
            }
            std::vector<std::vector<std::string>> scripts;
            double reward = cs.goals.empty() ? 0 : rollout(cs, scripts);
            if (reward > 0) {
                auto script = path_script(ci);
                if (auto fin = stitch(cs, scripts, script)) {
                    m_nodes[ci].visits = 1;
                    m_nodes[ci].total = reward;
                    for (int a = i; a >= 0; a = m_nodes[a].parent) {
                        ++m_nodes[a].visits;
                        m_nodes[a].total += reward;
                    }
                    return finish(*fin, std::move(script));
                }
            }
            for (int a = ci; a >= 0; a = m_nodes[a].parent) {
                ++m_nodes[a].visits;
                m_nodes[a].total += reward;
            }
            m_st.log.push_back(line(m_st.iterations, m_nodes.size(), m_nodes[ci].depth, false));
        }
        m_st.nodes = m_nodes.size();
        mcts_result r;
        r.result.stats = m_st;
        r.tree = summary();
        return r;
    }
};

} // namespace

mcts_result mcts_run(goal_state const &start, mcts_config const &cfg, policy const *p) {
    policy dflt;
    mcts m(cfg, p ? *p : dflt);
    return m.run(start);
}

search_result mcts_search(goal_state const &start, mcts_config const &cfg, policy const *p) {
    auto r = mcts_run(start, cfg, p);
    if (!r.solved)
        throw exception(error_kind::budget_exhausted, "mcts found no proof within " +
                                                          std::to_string(r.result.stats.iterations) + " iterations");
    return r.result;
}

} // namespace metatac::search
