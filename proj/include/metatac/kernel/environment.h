/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>
#include "metatac/kernel/term.h"

namespace metatac {

enum class decl_kind { axiom, definition, theorem, builtin };

char const *to_string(decl_kind k);

struct declaration {
    std::string name;
    term type;
    std::optional<term> value;
    decl_kind kind = decl_kind::axiom;
    /** \brief Elaboration hint: leading Pi binders the elaborator fills with metavariables. */
    std::vector<bool> implicit_args;

    bool is_implicit(unsigned i) const { return i < implicit_args.size() && implicit_args[i]; }
    unsigned num_implicit_prefix() const;
};

/**
   \brief Persistent map of named declarations.

   Adding a declaration yields a new environment; the old value is untouched and
   stays valid, so states created earlier keep their snapshot. */
class environment {
    struct data {
        std::unordered_map<std::string, declaration> decls;
        std::vector<std::string> order;
    };
    std::shared_ptr<data const> m_data;

public:
    environment();

    declaration const *find(std::string const &name) const;
    bool contains(std::string const &name) const { return find(name) != nullptr; }
    /** \brief Names in insertion order. */
    std::vector<std::string> const &order() const { return m_data->order; }
    std::size_t size() const { return m_data->order.size(); }
    /** \brief Position of `name` in insertion order. */
    std::optional<std::size_t> position(std::string const &name) const;

    /** \brief Unchecked insertion; use `add_decl` for checked insertion. Throws on duplicates. */
    environment add_unchecked(declaration d) const;
    bool same_as(environment const &o) const { return m_data == o.m_data; }
};

/** \brief Name of the trusted certificate constant accepted for decided propositions. */
inline constexpr char const *decide_cert_name = "DecideCert";

} // namespace metatac
