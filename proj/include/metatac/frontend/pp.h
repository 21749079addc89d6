/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <string>
#include "metatac/kernel/environment.h"
#include "metatac/kernel/local_context.h"
#include "metatac/meta/store.h"

namespace metatac::frontend {

struct pp_options {
    /** no notation, explicit `@` applications, one typed binder per quantifier */
    bool all = false;
    /** `|-` instead of `⊢` */
    bool ascii = false;
    /** `a b c : Nat` on one line for consecutive hypotheses of the same type */
    bool group_hyps = true;
};

/** \brief Notation-aware rendering. Needs the environment only for `@` in `all` mode. */
std::string pp(term const &t, local_context const &ctx, pp_options const &o = {}, environment const *env = nullptr);

/** \brief `hyps ⊢ target`, hypotheses one per line, after instantiating assigned metavariables. */
std::string pp_goal(meta_store const &store, mvar_id g, pp_options const &o = {}, environment const *env = nullptr);

/** \brief Hypothesis lines only (no turnstile line). */
std::string pp_hyps(meta_store const &store, mvar_id g, pp_options const &o = {}, environment const *env = nullptr);

} // namespace metatac::frontend
