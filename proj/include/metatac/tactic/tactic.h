/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>
#include "metatac/frontend/syntax.h"
#include "metatac/meta/goal_state.h"

namespace metatac::tactic {

enum class tactic_kind {
    intro,
    intros,
    exact,
    apply,
    refine, // `expr e` / `refine e`: holes become goals
    cases,
    exists,
    have,
    let,
    rfl,
    decide,
    assumption,
    rw,
    induction,
    calc_step,
    conv_enter,
    conv_done,
    hammer,
    simp,
    sorry,
};

char const *to_string(tactic_kind k);

struct rw_rule {
    frontend::syntax_ptr term;
    bool reverse = false;
};

/** \brief A parsed tactic. Terms stay as syntax until they are elaborated in the goal's context. */
struct tactic_expr {
    tactic_kind kind = tactic_kind::rfl;
    /** intro/intros names, cases branch names, induction `n ih` names */
    std::vector<std::string> names;
    /** have/let name, cases/induction target */
    std::string name;
    /** exact/apply/refine term, have/let type, calc relation, exists witnesses (args) */
    frontend::syntax_ptr term;
    std::vector<frontend::syntax_ptr> terms;
    /** have/let value, calc justification */
    frontend::syntax_ptr value;
    std::vector<rw_rule> rules;
    bool rhs = false; // conv side
    std::optional<std::uint64_t> budget;
    /** source the syntax offsets refer to */
    std::shared_ptr<std::string const> src;
    std::string text;
};

/** \brief Parse one tactic spanning the whole parser range. Throws ParseError. */
tactic_expr parse_tactic(frontend::parser &p, std::shared_ptr<std::string const> src);
tactic_expr parse_tactic(std::string_view src);

struct tactic_result {
    goal_state next;
    std::vector<mvar_id> produced;
    std::vector<std::string> messages;
    /** coupled groups (size ≥ 2) among the goals of `next` */
    std::vector<coupling_group> coupling;
    /** `sorry` placeholders created by this step; dormant, never active goals */
    std::vector<mvar_id> sorries;
    std::size_t hammer_nodes = 0;
};

/**
   \brief Run `t` on `goal` of `s`. In automatic mode untouched unassigned siblings follow
   the produced goals; otherwise they become dormant. Never mutates `s`. */
tactic_result run_tactic(goal_state const &s, mvar_id goal, tactic_expr const &t, bool automatic = true);
tactic_result run_tactic(goal_state const &s, mvar_id goal, std::string_view src, bool automatic = true);

inline constexpr std::uint64_t default_hammer_budget = 10000;
inline constexpr unsigned hammer_max_depth = 6;

/** \brief Lexicographic path order check used to admit simp lemmas (lhs > rhs). */
bool lpo_greater(term const &s, term const &t);

} // namespace metatac::tactic
