/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>
#include "metatac/meta/goal_state.h"

namespace metatac::search {

/** \brief Symbolic tactic function; deterministic, at most `cap` entries. */
std::vector<std::string> default_candidates(goal_state const &s, mvar_id goal, std::size_t cap = 32);

/** \brief Goal selection plus tactic enumeration. */
class policy {
public:
    virtual ~policy() = default;
    /** default: the first goal, or the lowest id of the first goal's coupling group */
    virtual mvar_id choose_goal(goal_state const &s) const;
    virtual std::vector<std::string> candidates(goal_state const &s, mvar_id goal) const;
};

/** \brief A policy built from two callbacks; empty callbacks fall back to the defaults. */
class callback_policy : public policy {
    std::function<mvar_id(goal_state const &)> m_choose;
    std::function<std::vector<std::string>(goal_state const &, mvar_id)> m_cands;

public:
    callback_policy(std::function<mvar_id(goal_state const &)> choose,
                    std::function<std::vector<std::string>(goal_state const &, mvar_id)> cands)
        : m_choose(std::move(choose)), m_cands(std::move(cands)) {}
    mvar_id choose_goal(goal_state const &s) const override;
    std::vector<std::string> candidates(goal_state const &s, mvar_id goal) const override;
};

struct search_stats {
    std::uint64_t iterations = 0;
    std::uint64_t nodes = 0;        // states in the tree / expanded states
    std::uint64_t tactic_calls = 0;
    std::uint64_t max_depth = 0;
    /** one `iteration=.. nodes=.. depth=.. solved=..` line per iteration or expansion */
    std::vector<std::string> log;
};

struct search_result {
    goal_state state;        // solved
    term proof;
    std::vector<std::string> script; // tactics from the start state
    search_stats stats;
};

/** \brief Throws BudgetExhausted (the partial stats are lost). */
search_result best_first(goal_state const &start, policy const &p, std::uint64_t budget);

struct mcts_config {
    double c_uct = std::sqrt(2.0);
    std::uint64_t max_iterations = 10000;
    unsigned rollout_depth = 8;
    std::uint64_t seed = 0;
    std::size_t max_candidates = 32;
};

struct tree_summary {
    std::uint64_t root_visits = 0;
    std::size_t nodes = 0;
    /** every AND node satisfied visits == 1 + sum of child visits */
    bool consistent = true;
};

struct mcts_result {
    bool solved = false;
    search_result result; // meaningful when solved
    tree_summary tree;
};

/** \brief UCT search. Returns the tree summary even on failure; see `mcts_search` for the throwing form. */
mcts_result mcts_run(goal_state const &start, mcts_config const &cfg, policy const *p = nullptr);
/** \brief Throws BudgetExhausted. */
search_result mcts_search(goal_state const &start, mcts_config const &cfg, policy const *p = nullptr);

/** \brief Child scored highest by mean + c·sqrt(ln N / n); `children` holds (total reward, visits > 0). */
std::size_t uct_select(std::vector<std::pair<double, std::uint64_t>> const &children, std::uint64_t parent_visits,
                       double c);

} // namespace metatac::search
