/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <string>
#include "metatac/frontend/elab.h"
#include "metatac/frontend/pp.h"
#include "metatac/kernel/builtins.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/meta/goal_state.h"
#include "metatac/tactic/tactic.h"

namespace metatac::test {

inline environment const &env0() {
    static environment const e = mk_builtin_environment();
    return e;
}

inline goal_state start(std::string const &stmt, environment const &env = env0()) {
    meta_store store;
    term t = frontend::elab_statement(env, stmt, store);
    return state_init(env, t, {}, store);
}

inline std::string show(goal_state const &s, mvar_id g) { return frontend::pp_goal(s.store, g, {}, &s.env); }

inline std::string show_all(goal_state const &s) {
    std::string r;
    for (std::size_t i = 0; i < s.goals.size(); ++i)
        r += (i ? "\n\n" : "") + show(s, s.goals[i]);
    return r;
}

inline goal_state step(goal_state const &s, std::string const &tac, bool automatic = true) {
    return tactic::run_tactic(s, s.goals.front(), tac, automatic).next;
}

inline bool proof_checks(goal_state const &s) { return sound(s); }

} // namespace metatac::test
