/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <map>
#include <optional>
#include <string_view>
#include "metatac/frontend/syntax.h"
#include "metatac/kernel/environment.h"
#include "metatac/meta/store.h"

namespace metatac::frontend {

/**
   \brief Bidirectional elaborator from surface syntax to kernel terms.

   `_` and implicit arguments become natural metavariables, `?x` and `sorry`
   synthetic ones. Every metavariable is created in `store` with the local
   context current at that point. */
class elaborator {
    environment m_env;
    meta_store &m_store;
    local_context m_lctx;
    std::string_view m_src; // for positions; may be empty
    std::map<std::string, mvar_id> m_named;
    std::vector<mvar_id> m_sorries;
    std::vector<mvar_id> m_holes;

    struct typed {
        term value;
        term type;
    };
    struct head_info {
        term fn;
        term type;
        declaration const *decl = nullptr;
        unsigned next_arg = 0; // position in the declaration's binder list
        bool explicit_mode = false;
    };

    [[noreturn]] void fail(syntax const &s, std::string const &msg) const;
    std::string show(term const &t) const;

    typed go(syntax const &s, std::optional<term> const &expected);
    term check(syntax const &s, std::optional<term> const &expected);
    typed go_app(syntax const &s, std::optional<term> const &expected);
    typed go_binop(syntax const &s);
    typed go_binder(syntax const &s, std::optional<term> const &expected);
    typed go_let(syntax const &s, std::optional<term> const &expected);
    typed go_hole(syntax const &s, std::optional<term> const &expected);
    typed apply_args(syntax const &s, head_info h, std::vector<syntax_ptr> const &args,
                     std::optional<term> const &expected);

    head_info resolve_head(syntax const &s);
    std::optional<head_info> resolve_const(std::string const &name, bool explicit_mode);
    head_info project(syntax const &s, typed obj, std::string const &field);
    void insert_implicits(head_info &h);
    term fresh_type_mvar();
    term whnf(term const &t);
    void pop_to(std::size_t n);

public:
    elaborator(environment env, meta_store &store, local_context lctx = {}, std::string_view src = {});

    /** \brief Elaborate against an optional expected type; result is instantiated. */
    term elab(syntax const &s, std::optional<term> const &expected = std::nullopt);
    /** \brief Elaborate something that must be a type (`Type` itself allowed). */
    term elab_type(syntax const &s);
    /** \brief Type of an elaborated term under the current context. */
    term infer(term const &t);
    /** \brief Unify, leaving the store untouched on failure. */
    bool unify(term const &a, term const &b);

    fvar_id push_local(std::string const &name, term const &type, std::optional<term> const &value = std::nullopt);
    local_context const &lctx() const { return m_lctx; }
    environment const &env() const { return m_env; }

    /** \brief `sorry` metavariables, in source order. */
    std::vector<mvar_id> const &sorries() const { return m_sorries; }
    /** \brief Synthetic `?x` / `?_` holes, in creation order. */
    std::vector<mvar_id> const &holes() const { return m_holes; }
};

source_pos pos_at(std::string_view src, std::size_t offset);

/** \brief Elaborate a closed statement string; it must be a type. */
term elab_statement(environment const &env, std::string_view src, meta_store &store);

} // namespace metatac::frontend
