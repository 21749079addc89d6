/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <optional>
#include <string>
#include <string_view>
#include <vector>
#include "metatac/frontend/pp.h"
#include "metatac/frontend/syntax.h"
#include "metatac/meta/goal_state.h"

namespace metatac::frontend {

/** \brief `trailer` holds comments after the last declaration. */
enum class unit_kind { theorem, example, trailer };

char const *to_string(unit_kind k);

struct span {
    std::size_t begin = 0, end = 0;
};

/** \brief One tactic of a block as written (nested blocks are part of the composite's text). */
struct tactic_span {
    std::string text;
    span where;
};

struct source_unit {
    unit_kind kind = unit_kind::example;
    std::optional<std::string> name;
    std::string statement; // source text of the statement, binders included
    span where;
    std::vector<comment> comments;
    /** top-level tactics of the `by` block; empty for term-mode proofs */
    std::vector<tactic_span> tactics;
    /** term-mode proof text, if any */
    std::optional<std::string> term_proof;
};

/** \brief Split a source file into declarations. Throws ParseError. */
std::vector<source_unit> parse_file(std::string_view src);

struct tactic_invocation {
    std::string goal_before;
    std::string goal_after;
    std::string tactic;
};

struct sorry_goal {
    std::string context;
    std::string target;
    /** live handle: a state whose only goal is the placeholder */
    goal_state state;
    mvar_id goal;
    std::size_t unit = 0;
};

struct message {
    std::size_t unit = 0;
    std::string severity; // "error" | "warning"
    std::string text;
    std::optional<source_pos> pos;
};

struct process_result {
    std::vector<source_unit> units;
    std::vector<tactic_invocation> invocations;
    std::vector<sorry_goal> sorries;
    std::vector<message> messages;
    /** input environment extended with every theorem that was checked (or admitted with sorry) */
    environment env;
};

/**
   \brief Elaborate every declaration and replay its tactic block. Only a parse failure
   throws; other problems become per-declaration messages. */
process_result process(std::string_view src, environment const &env, pp_options const &opts = {});

} // namespace metatac::frontend
