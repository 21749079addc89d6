/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <iosfwd>
#include <string>
#include <json.hpp>
#include "metatac/meta/goal_state.h"

namespace metatac::repl {

/** protocol version reported by `session.info` */
inline constexpr char const *wire_version = "wire-v1";

struct options {
    bool automatic = true;
    bool print_expr_ast = false;
    bool pp_all = false;
};

/**
   \brief One client session: the environment, the state table and the options.

   `handle` never throws; every failure becomes an error response and leaves the
   previously issued state ids valid. */
class session {
    environment m_env;
    state_table m_states;
    options m_opts;
    std::ostream *m_stats = nullptr;

    nlohmann::json dispatch(std::string const &cmd, nlohmann::json const &payload);

public:
    explicit session(environment env, options o = {}, std::ostream *stats = nullptr);

    nlohmann::json handle(nlohmann::json const &request);
    /** \brief One line in, one line out (no trailing newline). */
    std::string handle_line(std::string const &line);

    environment const &env() const { return m_env; }
    options const &opts() const { return m_opts; }
};

/** \brief Request loop until EOF. Returns the process exit code. */
int serve(std::istream &in, std::ostream &out, session &s);

} // namespace metatac::repl
