/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <optional>
#include <stdexcept>
#include <string>

namespace metatac {

/** \brief Failure classes. The wire protocol reports these by name so clients can branch on them. */
enum class error_kind {
    type_error,
    duplicate_name,
    unknown_constant,
    parse_error,
    elab_error,
    tactic_failure,
    lhs_mismatch,
    relation_mismatch,
    not_an_equality,
    rewrite_no_match,
    unknown_state,
    unknown_goal,
    no_common_ancestor,
    nothing_to_resume,
    hammer_exhausted,
    budget_exhausted,
    unknown_command,
    invalid_request,
    io_error,
};

char const *to_string(error_kind k);

struct source_pos {
    unsigned line = 1;   // 1-based
    unsigned column = 1; // 1-based, in bytes
    std::size_t offset = 0;
};

class exception : public std::runtime_error {
    error_kind m_kind;
    std::optional<source_pos> m_pos;

public:
    exception(error_kind k, std::string const &msg, std::optional<source_pos> pos = std::nullopt)
        : std::runtime_error(msg), m_kind(k), m_pos(pos) {}
    error_kind kind() const { return m_kind; }
    std::optional<source_pos> const &pos() const { return m_pos; }
};

/** \brief Raised by the type checker; `path` locates the offending subterm (e.g. "app.arg"). */
class type_error : public exception {
    std::string m_path;

public:
    type_error(std::string const &msg, std::string path = {}, error_kind k = error_kind::type_error)
        : exception(k, msg), m_path(std::move(path)) {}
    std::string const &path() const { return m_path; }
};

} // namespace metatac
