/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <optional>
#include <string>
#include <vector>
#include "metatac/kernel/term.h"

namespace metatac {

struct local_decl {
    fvar_id id;
    std::string user_name;
    term type;
    std::optional<term> value;
};

/**
   \brief Ordered hypotheses. Each entry's type only mentions earlier entries.

   Contexts are small (a handful of hypotheses), so a flat vector with linear lookup
   is the representation. */
class local_context {
    std::vector<local_decl> m_decls;

public:
    local_context() = default;

    std::vector<local_decl> const &decls() const { return m_decls; }
    std::size_t size() const { return m_decls.size(); }
    bool empty() const { return m_decls.empty(); }

    local_decl const *find(fvar_id id) const;
    /** \brief Latest hypothesis with the given user name (later entries shadow earlier ones). */
    local_decl const *find_by_name(std::string const &name) const;
    bool contains(fvar_id id) const { return find(id) != nullptr; }
    std::optional<std::size_t> index_of(fvar_id id) const;

    void push_back(local_decl d) { m_decls.push_back(std::move(d)); }
    void pop_back() { m_decls.pop_back(); }
    local_context with(local_decl d) const {
        local_context r = *this;
        r.push_back(std::move(d));
        return r;
    }
    /** \brief Copy without the given hypotheses. */
    local_context without(std::vector<fvar_id> const &ids) const;
    /** \brief True if every entry of this context appears in `other` with the same id. */
    bool is_subset_of(local_context const &other) const;
    /** \brief Name not used by any hypothesis: `base`, then `base_1`, `base_2`, ... */
    std::string fresh_name(std::string const &base) const;
};

} // namespace metatac
