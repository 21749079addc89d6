/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <optional>
#include <string>
#include <vector>
#include "metatac/frontend/elab.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/meta/binding.h"
#include "metatac/tactic/tactic.h"

namespace metatac::tactic::detail {

/** \brief Working copy for one tactic step on one goal. */
struct tactic_ctx {
    environment env;
    meta_store store;
    mvar_id goal;
    std::shared_ptr<std::string const> src;
    std::vector<mvar_id> produced;
    std::vector<mvar_id> sorries;
    std::vector<std::string> messages;
    std::uint64_t hammer_nodes = 0;
    /** skip the defeq check on goal assignments (hammer inner loop) */
    bool trusted = false;

    tactic_ctx(environment e, meta_store s, mvar_id g, std::shared_ptr<std::string const> source)
        : env(std::move(e)), store(std::move(s)), goal(g), src(std::move(source)) {}

    metavar_decl const &decl() const { return store.get(goal); }
    local_context ctx() const { return store.instantiate(decl().ctx); }
    term target() const { return store.instantiate(decl().target); }

    [[noreturn]] void fail(std::string const &msg, error_kind k = error_kind::tactic_failure) const {
        throw exception(k, msg);
    }
    std::string show(term const &t) const;
    std::string show(term const &t, local_context const &ctx) const;

    frontend::elaborator elaborator(local_context const &ctx);
    frontend::elaborator elaborator() { return elaborator(ctx()); }
    /** \brief Record sorries and return the new unassigned holes of `v` (created since `before`). */
    std::vector<mvar_id> collect(frontend::elaborator const &el, term const &v, std::uint64_t before);

    mvar_id new_goal(local_context ctx, term target, std::string origin = "user");
    bool unify(local_context const &ctx, term const &a, term const &b);
    /** \brief Assign `g` after checking the value's type against its target. */
    void assign(mvar_id g, term const &value);
    void close(term const &value) { assign(goal, value); }
};

void run_core(tactic_ctx &c, tactic_expr const &t);
void run_any(tactic_ctx &c, tactic_expr const &t);
void run_rw(tactic_ctx &c, tactic_expr const &t);
void run_conv_enter(tactic_ctx &c, bool rhs);
void run_conv_done(tactic_ctx &c);
void run_simp(tactic_ctx &c, std::vector<term> const &lemmas);
void run_calc(tactic_ctx &c, tactic_expr const &t);
void run_hammer(tactic_ctx &c, std::uint64_t budget);

/** \brief Elaborated simp lemmas (`simp [..]` argument or the default set). */
std::vector<term> simp_lemmas(tactic_ctx &c, tactic_expr const &t);

/** \brief Rewrite the current goal (or conv focus) with `proof : ∀ xs, l = r`; the goal moves
    to the rewritten one. Returns the rule's own leftover holes. */
std::vector<mvar_id> rewrite_goal(tactic_ctx &c, term const &proof, bool reverse);
/** \brief Close the goal if it is `a = a` syntactically or `True`. */
bool close_syntactic(tactic_ctx &c);
/** \brief rfl / True.intro / decide, each on a scratch copy. */
bool try_close_trivial(tactic_ctx &c);

/** \brief Replace let-bound locals by their values. */
term zeta_fvars(local_context const &ctx, term const &t);

} // namespace metatac::tactic::detail
