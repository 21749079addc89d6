/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <vector>
#include "metatac/meta/store.h"

namespace metatac {

/**
   \brief Rewrite unassigned metavariables of `e` whose context contains one of `xs`
   so that they no longer depend on `xs` directly. A natural `?n` is assigned
   `?n' ys`; a synthetic one stays a goal and is replaced by `?n' ys` where `?n'`
   is delayed-assigned to it. */
term elim_mvar_deps(meta_store &store, std::vector<fvar_id> const &xs, term const &e);

/** \brief `fun xs => e`; `lctx` must declare every element of `xs`. */
term mk_lambda_fvars(meta_store &store, local_context const &lctx, std::vector<fvar_id> const &xs, term const &e);
/** \brief `∀ xs, e`. */
term mk_pi_fvars(meta_store &store, local_context const &lctx, std::vector<fvar_id> const &xs, term const &e);
/** \brief `let x := v; e` for a let-bound local `x` of `lctx`. */
term mk_let_fvar(meta_store &store, local_context const &lctx, fvar_id x, term const &e);

} // namespace metatac
