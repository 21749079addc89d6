/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>
#include "metatac/kernel/environment.h"
#include "metatac/meta/store.h"

namespace metatac {

/**
   \brief Immutable proof state: a store snapshot, the active goals, and the root hole.

   Goals that are unassigned but not listed are dormant. */
struct goal_state {
    environment env;
    meta_store store;
    std::vector<mvar_id> goals;
    mvar_id root;

    metavar_decl const &goal(mvar_id g) const { return store.get(g); }
    bool has_goal(mvar_id g) const;
};

/** \brief Seal `store` and package it; every state constructor goes through here. */
goal_state make_state(environment env, meta_store store, std::vector<mvar_id> goals, mvar_id root);

/** \brief Fresh state whose only goal is `target` in `ctx` (empty by default). */
goal_state state_init(environment const &env, term const &target, local_context const &ctx = {},
                      meta_store store = {});

struct coupling_group {
    std::vector<mvar_id> goals;
    std::vector<mvar_id> shared;
};

/** \brief The goal itself plus the unassigned metavariables its target and context mention. */
std::vector<mvar_id> mentions(goal_state const &s, mvar_id g);

/** \brief Connected components of the "mentions a common metavariable" relation. */
std::vector<coupling_group> coupling_groups(goal_state const &s);
std::vector<coupling_group> coupling_groups(meta_store const &store, std::vector<mvar_id> const &goals);

/**
   \brief Bring `basis`'s goals back into scope on top of `target`'s store.

   Without `subset`, `target` must have no active goals and every basis goal still
   unassigned is resumed. With `subset`, the resumed goals are appended to
   `target`'s goals. */
goal_state continue_state(goal_state const &target, goal_state const &basis,
                          std::optional<std::vector<mvar_id>> const &subset = std::nullopt);

term root_proof(goal_state const &s);
bool is_solved(goal_state const &s);
/** \brief Solved, and the kernel infers the root proof's type as the root target. */
bool sound(goal_state const &s);
/** \brief Holes of the root proof that are not active goals. */
std::vector<mvar_id> dormant_goals(goal_state const &s);

/**
   \brief Session table of states keyed by monotone integer ids.

   Reads may run concurrently; insertion and collection are serialized. */
class state_table {
    struct entry {
        std::shared_ptr<goal_state const> state;
        std::optional<std::uint64_t> parent;
    };
    std::map<std::uint64_t, entry> m_states;
    std::uint64_t m_next = 0;
    mutable std::mutex m_mutex;

public:
    std::uint64_t add(goal_state s, std::optional<std::uint64_t> parent = std::nullopt);
    std::shared_ptr<goal_state const> find(std::uint64_t id) const;
    /** \brief Throws UnknownState. */
    std::shared_ptr<goal_state const> get(std::uint64_t id) const;
    std::optional<std::uint64_t> parent(std::uint64_t id) const;
    std::size_t size() const;
    /** \brief Drop every state not listed; returns the number dropped. */
    std::size_t gc(std::vector<std::uint64_t> const &keep);
};

} // namespace metatac
