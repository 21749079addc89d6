/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>
#include "metatac/kernel/local_context.h"
#include "metatac/kernel/term.h"

namespace metatac {

/** \brief Natural metavariables may be solved by unification; synthetic ones are goals and
    are only assigned by tactics (or by unification when a goal is itself unknown). */
enum class mvar_kind : std::uint8_t { natural, synthetic };

/**
   \brief `?d xs := pending` where `pending` lives in a context extending `?d`'s with `fvars`.

   The substitution happens during instantiation once `pending` is fully assigned. */
struct delayed_assignment {
    std::vector<fvar_id> fvars;
    mvar_id pending;
};

/** \brief Bookkeeping for an open `conv` focus goal `lhs = ?result`. */
struct conv_frame {
    bool rhs = false;
    mvar_id result;
    /** the goal that `conv done` resumes */
    mvar_id main;
    term original; // the untouched side of the main equation
};

struct metavar_decl {
    mvar_id id;
    local_context ctx;
    term target;
    std::optional<term> assignment;
    std::optional<delayed_assignment> delayed;
    std::string origin = "user";
    mvar_kind kind = mvar_kind::synthetic;
    std::optional<conv_frame> conv;

    bool is_assigned() const { return assignment.has_value() || delayed.has_value(); }
};

/**
   \brief Persistent map from metavariable ids to declarations.

   Copies share structure; mutating methods copy the map on first write. Ids for
   metavariables and local variables come from one counter so that free variables
   created in different branches of a search never collide. */
class meta_store {
    struct lineage_node {
        std::shared_ptr<lineage_node const> parent;
        std::uint64_t next_id;
    };
    using map = std::map<std::uint64_t, std::shared_ptr<metavar_decl const>>;
    std::shared_ptr<map> m_decls;
    std::uint64_t m_next_id = 1;
    std::uint64_t m_version = 0;
    std::shared_ptr<lineage_node const> m_lineage;

    void detach();

public:
    meta_store();

    metavar_decl const *find(mvar_id id) const;
    metavar_decl const &get(mvar_id id) const;
    bool contains(mvar_id id) const { return find(id) != nullptr; }
    bool is_assigned(mvar_id id) const;
    std::uint64_t version() const { return m_version; }
    std::uint64_t next_id() const { return m_next_id; }
    std::size_t size() const { return m_decls->size(); }
    std::vector<mvar_id> ids() const;

    mvar_id mk_mvar(local_context ctx, term target, mvar_kind kind = mvar_kind::synthetic,
                    std::string origin = "user");
    fvar_id mk_fvar_id();
    /** \brief Throws if `id` is unknown or already assigned; assignments are never replaced. */
    void assign(mvar_id id, term value);
    void assign_delayed(mvar_id id, std::vector<fvar_id> fvars, mvar_id pending);
    void set_conv_frame(mvar_id id, conv_frame f);

    /** \brief Substitute assignments, including delayed ones whose pending value is complete. */
    term instantiate(term const &t) const;
    local_context instantiate(local_context const &ctx) const;
    /** \brief Unassigned metavariables reachable from `t` after instantiation. Delayed
        assignments whose value is still open contribute the holes of their pending value. */
    std::vector<mvar_id> unassigned_mvars(term const &t) const;

    /** \brief Record a branch point; called when a goal state captures this store. */
    void seal();
    /** \brief Counter value at the newest lineage point shared by both stores. */
    std::optional<std::uint64_t> common_ancestor(meta_store const &o) const;
    bool shares_lineage_with(meta_store const &o) const { return common_ancestor(o).has_value(); }
};

} // namespace metatac
