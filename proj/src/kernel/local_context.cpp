/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/local_context.h"
#include <algorithm>
#include "metatac/kernel/error.h"

namespace metatac {

char const *to_string(error_kind k) {
    switch (k) {
    case error_kind::type_error: return "TypeError";
    case error_kind::duplicate_name: return "DuplicateName";
    case error_kind::unknown_constant: return "UnknownConstant";
    case error_kind::parse_error: return "ParseError";
    case error_kind::elab_error: return "ElabError";
    case error_kind::tactic_failure: return "TacticFailure";
    case error_kind::lhs_mismatch: return "LhsMismatch";
    case error_kind::relation_mismatch: return "RelationMismatch";
    case error_kind::not_an_equality: return "NotAnEquality";
    case error_kind::rewrite_no_match: return "RewriteNoMatch";
    case error_kind::unknown_state: return "UnknownState";
    case error_kind::unknown_goal: return "UnknownGoal";
    case error_kind::no_common_ancestor: return "NoCommonAncestor";
    case error_kind::nothing_to_resume: return "NothingToResume";
    case error_kind::hammer_exhausted: return "HammerExhausted";
    case error_kind::budget_exhausted: return "BudgetExhausted";
    case error_kind::unknown_command: return "UnknownCommand";
    case error_kind::invalid_request: return "InvalidRequest";
    case error_kind::io_error: return "IOError";
    }
    return "Unknown";
}

local_decl const *local_context::find(fvar_id id) const {
    for (auto const &d : m_decls)
        if (d.id == id)
            return &d;
    return nullptr;
}

local_decl const *local_context::find_by_name(std::string const &name) const {
    for (auto it = m_decls.rbegin(); it != m_decls.rend(); ++it)
        if (it->user_name == name)
            return &*it;
    return nullptr;
}

std::optional<std::size_t> local_context::index_of(fvar_id id) const {
    for (std::size_t i = 0; i < m_decls.size(); ++i)
        if (m_decls[i].id == id)
            return i;
    return std::nullopt;
}

local_context local_context::without(std::vector<fvar_id> const &ids) const {
    local_context r;
    for (auto const &d : m_decls)
        if (std::find(ids.begin(), ids.end(), d.id) == ids.end())
            r.push_back(d);
    return r;
}

bool local_context::is_subset_of(local_context const &other) const {
    return std::all_of(m_decls.begin(), m_decls.end(), [&](local_decl const &d) { return other.contains(d.id); });
}

std::string local_context::fresh_name(std::string const &base) const {
    if (!find_by_name(base))
        return base;
    for (unsigned i = 1;; ++i) {
        std::string n = base + "_" + std::to_string(i);
        if (!find_by_name(n))
            return n;
    }
}

} // namespace metatac
