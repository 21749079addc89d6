/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/decide.h"
#include "metatac/kernel/type_checker.h"

namespace metatac {

char const *to_string(decide_result r) {
    switch (r) {
    case decide_result::is_true: return "isTrue";
    case decide_result::is_false: return "isFalse";
    case decide_result::stuck: return "stuck";
    }
    return "?";
}

namespace {

decide_result of_bool(bool b) { return b ? decide_result::is_true : decide_result::is_false; }

class evaluator {
    type_checker m_tc;

    decide_result nat_rel(term const &a, term const &b, int rel) {
        auto x = m_tc.eval_nat(a), y = m_tc.eval_nat(b);
        if (!x || !y)
            return decide_result::stuck;
        switch (rel) {
        case 0: return of_bool(*x == *y);
        case 1: return of_bool(*x <= *y);
        default: return of_bool(*x < *y);
        }
    }

public:
    explicit evaluator(environment const &env) : m_tc(env, {}) {}

    decide_result eval(term const &p) {
        term w = m_tc.whnf_core(p);
        if (w.is_pi()) {
            if (has_loose_bvar(w.binder_body(), 0))
                return decide_result::stuck;
            auto a = eval(w.binder_type());
            if (a == decide_result::is_false)
                return decide_result::is_true;
            auto b = eval(lower_loose_bvars(w.binder_body(), 0, 1));
            if (a == decide_result::is_true)
                return b;
            return b == decide_result::is_true ? b : decide_result::stuck;
        }
        auto c = get_app_const(w);
        if (!c)
            return decide_result::stuck;
        auto args = get_app_args(w);
        std::string const &n = *c;
        if (n == "True" && args.empty())
            return decide_result::is_true;
        if (n == "False" && args.empty())
            return decide_result::is_false;
        if (n == "Not" && args.size() == 1) {
            auto a = eval(args[0]);
            if (a == decide_result::stuck)
                return a;
            return of_bool(a == decide_result::is_false);
        }
        if ((n == "And" || n == "Or" || n == "Iff") && args.size() == 2) {
            auto a = eval(args[0]), b = eval(args[1]);
            if (n == "And") {
                if (a == decide_result::is_false || b == decide_result::is_false)
                    return decide_result::is_false;
                if (a == decide_result::is_true && b == decide_result::is_true)
                    return decide_result::is_true;
                return decide_result::stuck;
            }
            if (n == "Or") {
                if (a == decide_result::is_true || b == decide_result::is_true)
                    return decide_result::is_true;
                if (a == decide_result::is_false && b == decide_result::is_false)
                    return decide_result::is_false;
                return decide_result::stuck;
            }
            if (a == decide_result::stuck || b == decide_result::stuck)
                return decide_result::stuck;
            return of_bool(a == b);
        }
        if (n == "Eq" && args.size() == 3) {
            term ty = m_tc.whnf(args[0]);
            if (!(ty.is_constant() && ty.const_name() == "Nat"))
                return decide_result::stuck;
            return nat_rel(args[1], args[2], 0);
        }
        if (n == "Nat.le" && args.size() == 2)
            return nat_rel(args[0], args[1], 1);
        if (n == "Nat.lt" && args.size() == 2)
            return nat_rel(args[0], args[1], 2);
        term u = m_tc.whnf(w);
        if (u == w)
            return decide_result::stuck;
        return eval(u);
    }
};

} // namespace

decide_result eval_decide(environment const &env, term const &prop) {
    if (prop.has_fvar() || prop.has_mvar() || prop.has_loose_bvars())
        return decide_result::stuck;
    return evaluator(env).eval(prop);
}

} // namespace metatac
