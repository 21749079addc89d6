/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include "metatac/kernel/environment.h"

namespace metatac {

enum class decide_result { is_true, is_false, stuck };

char const *to_string(decide_result r);

/**
   \brief Trusted evaluator for closed propositions over numerals.

   Handles True/False/And/Or/Not/Iff/implication and Eq/≤/< between terms that reduce to
   numerals. Anything with free variables, metavariables or quantifiers is `stuck`.
   The kernel accepts `DecideCert p` as a proof of `p` exactly when this returns `is_true`. */
decide_result eval_decide(environment const &env, term const &prop);

} // namespace metatac
