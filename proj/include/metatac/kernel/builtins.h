/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include "metatac/kernel/environment.h"

namespace metatac {

/**
   \brief The fixed object theory: propositional connectives, Exists, Eq, and Nat
   with its recursor and the order and arithmetic lemmas used by the tactics.

   Constructors, eliminators and lemmas are `builtin` declarations without values;
   they are part of the trusted base. `Not`, `Iff` and `Nat.lt` are definitions
   unfolded by delta reduction. `Nat.add`, `Nat.mul` and `Nat.rec` compute through
   reduction rules in `whnf`. */
environment mk_builtin_environment();

/** \brief Names of the default rewrite set used by `simp`. */
std::vector<std::string> const &default_simp_lemmas();

namespace builtin {
term nat();
term nat_zero();
term nat_succ(term const &n);
term nat_add(term const &a, term const &b);
term nat_mul(term const &a, term const &b);
term nat_le(term const &a, term const &b);
term nat_lt(term const &a, term const &b);
term mk_eq(term const &type, term const &a, term const &b);
term mk_and(term const &a, term const &b);
term mk_or(term const &a, term const &b);
term mk_not(term const &a);
term mk_iff(term const &a, term const &b);
term mk_true();
term mk_false();
term mk_exists(term const &type, std::string const &binder, term const &body_with_bvar0);
term mk_decide_cert(term const &prop);
} // namespace builtin

} // namespace metatac
