/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <doctest.h>
#include "metatac/frontend/elab.h"
#include "metatac/frontend/pp.h"
#include "metatac/frontend/sexp.h"
#include "metatac/kernel/builtins.h"

using namespace metatac;
using namespace metatac::frontend;

namespace {
term stmt(std::string const &s) {
    meta_store st;
    return elab_statement(mk_builtin_environment(), s, st);
}
} // namespace

TEST_CASE("pp: or-commutativity statement") {
    term t = stmt("forall (p q : Prop), p \\/ q -> q \\/ p");
    CHECK(pp(t, {}) == "∀ (p q : Prop), p ∨ q → q ∨ p");
    auto env = mk_builtin_environment();
    CHECK(pp(t, {}, pp_options{.all = true}, &env) == "∀ (p : Prop), ∀ (q : Prop), Or p q → Or q p");
}

TEST_CASE("pp: arithmetic and numerals") {
    CHECK(pp(mk_lit(0), {}) == "0");
    CHECK(pp(stmt("forall n m : Nat, n + m = m + n"), {}) == "∀ (n m : Nat), n + m = m + n");
    CHECK(pp(stmt("forall n : Nat, n + 1 + 2 = n + (1 + 2)"), {}) == "∀ (n : Nat), n + 1 + 2 = n + (1 + 2)");
    CHECK(pp(stmt("forall n m : Nat, m + Nat.succ n = Nat.succ (m + n)"), {}) ==
          "∀ (n m : Nat), m + n.succ = (m + n).succ");
    CHECK(pp(stmt("exists x, x + 2 = 8"), {}) == "∃ x, x + 2 = 8");
    CHECK(pp(stmt("forall p : Prop, ¬p ∧ p -> False"), {}) == "∀ (p : Prop), ¬p ∧ p → False");
}

TEST_CASE("sexp: positional bound variables") {
    term id = mk_lambda("p", mk_prop(), mk_bvar(0));
    CHECK(sexp_print(id) == "(lam p (sort prop) (fvar 0))");
    CHECK(sexp_print(mk_const("True")) == "(const True)");
    CHECK(is_identical(sexp_parse(sexp_print(id)), id));
}
