/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <optional>
#include <string>
#include "metatac/kernel/environment.h"
#include "metatac/kernel/local_context.h"
#include "metatac/meta/store.h"

namespace metatac {

enum class unify_failure { none, mismatch, occurs_check, out_of_fragment };

char const *to_string(unify_failure f);

/**
   \brief Type inference, weak head normalization and definitional equality.

   A checker works in a local context and optionally a metavariable store. When the
   store is writable, `is_def_eq` doubles as the unifier: it may assign unassigned
   metavariables, restricted to first-order problems and Miller patterns. */
class type_checker {
    environment m_env;
    local_context m_lctx;
    meta_store const *m_store;
    meta_store *m_mut = nullptr;
    std::uint64_t m_next_tmp = 1ull << 61;
    unsigned m_depth = 0;
    unify_failure m_failure = unify_failure::none;
    std::string m_failure_msg;

    term infer_core(term const &t, bool check);
    term infer_app(term const &t, bool check);
    term infer_binding(term const &t, bool check);
    term infer_let(term const &t, bool check);
    sort_level sort_of_type(term const &ty, char const *what);

    bool is_def_eq_core(term const &a, term const &b);
    bool is_def_eq_args(term const &a, term const &b);
    bool is_def_eq_binding(term const &a, term const &b);
    bool try_eta(term const &a, term const &b);
    bool lit_vs_succ(term const &lit, term const &other);
    std::optional<nat> fold_nat(term const &t);
    std::optional<bool> try_assign(term const &lhs, term const &rhs);
    bool fail(unify_failure f, std::string msg);

    class scope_guard;

public:
    type_checker(environment env, local_context lctx, meta_store const *store = nullptr);
    /** \brief Checker whose definitional equality may assign metavariables in `store`. */
    type_checker(environment env, local_context lctx, meta_store &store, bool assign);

    environment const &env() const { return m_env; }
    local_context const &lctx() const { return m_lctx; }

    /** \brief Beta, let, assigned-metavariable heads, and let-variable zeta. No delta. */
    term whnf_core(term const &t);
    /** \brief `whnf_core` plus delta of definitions and the Nat reduction rules. */
    term whnf(term const &t);
    /** \brief Full normal form (used by oracles and by the decision procedure). */
    term normalize(term const &t);
    /** \brief Closed natural number value of `t`, if reduction reaches a numeral. */
    std::optional<nat> eval_nat(term const &t);

    term infer(term const &t);
    /** \brief Infer without checking arguments against binder types. */
    term infer_only(term const &t);
    void check(term const &t, term const &expected);
    bool is_def_eq(term const &a, term const &b);
    bool is_prop(term const &type);
    /** \brief Sort of a type, or nullopt if `ty` is not a type. `Type` itself counts as large. */
    std::optional<sort_level> sort_of(term const &ty);
    /** \brief whnf until a Pi appears; throws type_error otherwise. */
    term ensure_pi(term const &t);

    unify_failure last_failure() const { return m_failure; }
    std::string const &last_failure_message() const { return m_failure_msg; }

    fvar_id push_local(std::string name, term type, std::optional<term> value = std::nullopt);
    void pop_local();
};

/** \brief Human-readable rendering for error messages; provided by the pretty printer. */
std::string describe_term(term const &t, local_context const &ctx);

term whnf(environment const &env, local_context const &ctx, term const &t);
term infer(environment const &env, local_context const &ctx, term const &t, meta_store const *store = nullptr);
bool defeq(environment const &env, local_context const &ctx, term const &a, term const &b,
           meta_store const *store = nullptr);

/**
   \brief Checked insertion: the type must be a type (or `Type`), and a value must have it.
   Theorems with values are checked like definitions. */
environment add_decl(environment const &env, declaration d);

struct unify_result {
    std::optional<meta_store> store;
    unify_failure failure = unify_failure::none;
    std::string message;
    explicit operator bool() const { return store.has_value(); }
};

unify_result unify(environment const &env, local_context const &ctx, term const &a, term const &b, meta_store store);

} // namespace metatac
