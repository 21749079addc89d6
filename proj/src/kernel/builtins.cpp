/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/builtins.h"
#include <vector>

namespace metatac {
namespace builtin {

term nat() { return mk_const("Nat"); }
term nat_zero() { return mk_const("Nat.zero"); }
term nat_succ(term const &n) { return mk_app(mk_const("Nat.succ"), n); }
term nat_add(term const &a, term const &b) { return mk_app(mk_const("Nat.add"), {a, b}); }
term nat_mul(term const &a, term const &b) { return mk_app(mk_const("Nat.mul"), {a, b}); }
term nat_le(term const &a, term const &b) { return mk_app(mk_const("Nat.le"), {a, b}); }
term nat_lt(term const &a, term const &b) { return mk_app(mk_const("Nat.lt"), {a, b}); }
term mk_eq(term const &type, term const &a, term const &b) { return mk_app(mk_const("Eq"), {type, a, b}); }
term mk_and(term const &a, term const &b) { return mk_app(mk_const("And"), {a, b}); }
term mk_or(term const &a, term const &b) { return mk_app(mk_const("Or"), {a, b}); }
term mk_not(term const &a) { return mk_app(mk_const("Not"), a); }
term mk_iff(term const &a, term const &b) { return mk_app(mk_const("Iff"), {a, b}); }
term mk_true() { return mk_const("True"); }
term mk_false() { return mk_const("False"); }
term mk_exists(term const &type, std::string const &binder, term const &body) {
    return mk_app(mk_const("Exists"), {type, mk_lambda(binder, type, body)});
}
term mk_decide_cert(term const &prop) { return mk_app(mk_const(decide_cert_name), prop); }

} // namespace builtin

namespace {

using namespace builtin;

/** Builds closed types from named binders by abstracting scratch fvars. */
class type_builder {
    std::uint64_t m_next = 1ull << 62;

public:
    struct binder {
        std::string name;
        term type;
        bool implicit = false;
        fvar_id id;
    };

    term var(binder const &b) const { return mk_fvar(b.id); }

    binder bind(std::string name, term type, bool implicit = false) {
        return binder{std::move(name), std::move(type), implicit, fvar_id{m_next++}};
    }

    static term forall(std::vector<binder> const &bs, term body) {
        for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
            body = abstract(body, it->id);
            body = mk_pi(it->name, it->type, body);
        }
        return body;
    }

    static term fun(std::vector<binder> const &bs, term body) {
        for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
            body = abstract(body, it->id);
            body = mk_lambda(it->name, it->type, body);
        }
        return body;
    }

    /** Abstraction of binder types must see earlier binders too. */
    static term close_binders(std::vector<binder> bs, term body, bool lambda) {
        std::vector<fvar_id> ids;
        for (auto &b : bs)
            ids.push_back(b.id);
        term r = abstract(body, ids);
        for (std::size_t i = bs.size(); i-- > 0;) {
            term ty = abstract(bs[i].type, std::span<fvar_id const>(ids.data(), i));
            r = lambda ? mk_lambda(bs[i].name, ty, r) : mk_pi(bs[i].name, ty, r);
        }
        return r;
    }

    static std::vector<bool> mask(std::vector<binder> const &bs) {
        std::vector<bool> m;
        for (auto const &b : bs)
            m.push_back(b.implicit);
        while (!m.empty() && !m.back())
            m.pop_back();
        return m;
    }
};

declaration mk_builtin(std::string name, term type, std::vector<bool> implicit = {}) {
    return declaration{std::move(name), std::move(type), std::nullopt, decl_kind::builtin, std::move(implicit)};
}

declaration mk_definition(std::string name, term type, term value) {
    return declaration{std::move(name), std::move(type), std::move(value), decl_kind::definition, {}};
}

} // namespace

std::vector<std::string> const &default_simp_lemmas() {
    static std::vector<std::string> const names = {"Nat.add_zero", "Nat.zero_add", "Nat.add_succ",
                                                   "Nat.succ_add", "Nat.mul_zero", "Nat.mul_one"};
    return names;
}

environment mk_builtin_environment() {
    environment env;
    type_builder tb;
    term prop = mk_prop(), type = mk_type();
    auto add = [&](declaration d) { env = env.add_unchecked(std::move(d)); };
    // Lemma with binders; the trailing explicit hypotheses go after the binders.
    auto lemma = [&](std::string name, std::vector<type_builder::binder> bs, term concl) {
        add(mk_builtin(std::move(name), type_builder::close_binders(bs, concl, false), type_builder::mask(bs)));
    };

    add(mk_builtin("True", prop));
    add(mk_builtin("True.intro", mk_true()));
    add(mk_builtin("False", prop));
    {
        auto c = tb.bind("C", prop, true);
        lemma("False.elim", {c, tb.bind("h", mk_false())}, tb.var(c));
    }
    {
        auto a = tb.bind("a", prop);
        add(mk_definition("Not", mk_arrow(prop, prop),
                          type_builder::close_binders({a}, mk_arrow(tb.var(a), mk_false()), true)));
    }

    add(mk_builtin("And", mk_arrow(prop, mk_arrow(prop, prop))));
    {
        auto a = tb.bind("a", prop, true), b = tb.bind("b", prop, true);
        lemma("And.intro", {a, b, tb.bind("left", tb.var(a)), tb.bind("right", tb.var(b))},
              mk_and(tb.var(a), tb.var(b)));
        lemma("And.left", {a, b, tb.bind("self", mk_and(tb.var(a), tb.var(b)))}, tb.var(a));
        lemma("And.right", {a, b, tb.bind("self", mk_and(tb.var(a), tb.var(b)))}, tb.var(b));
    }

    add(mk_builtin("Or", mk_arrow(prop, mk_arrow(prop, prop))));
    {
        auto a = tb.bind("a", prop, true), b = tb.bind("b", prop, true), c = tb.bind("c", prop, true);
        lemma("Or.inl", {a, b, tb.bind("h", tb.var(a))}, mk_or(tb.var(a), tb.var(b)));
        lemma("Or.inr", {a, b, tb.bind("h", tb.var(b))}, mk_or(tb.var(a), tb.var(b)));
        lemma("Or.cases",
              {a, b, c, tb.bind("h", mk_or(tb.var(a), tb.var(b))), tb.bind("left", mk_arrow(tb.var(a), tb.var(c))),
               tb.bind("right", mk_arrow(tb.var(b), tb.var(c)))},
              tb.var(c));
    }

    {
        auto a = tb.bind("a", prop), b = tb.bind("b", prop);
        term body = mk_and(mk_arrow(tb.var(a), tb.var(b)), mk_arrow(tb.var(b), tb.var(a)));
        add(mk_definition("Iff", mk_arrow(prop, mk_arrow(prop, prop)), type_builder::close_binders({a, b}, body, true)));
        auto ia = tb.bind("a", prop, true), ib = tb.bind("b", prop, true);
        lemma("Iff.intro",
              {ia, ib, tb.bind("mp", mk_arrow(tb.var(ia), tb.var(ib))), tb.bind("mpr", mk_arrow(tb.var(ib), tb.var(ia)))},
              mk_iff(tb.var(ia), tb.var(ib)));
        lemma("Iff.mp", {ia, ib, tb.bind("self", mk_iff(tb.var(ia), tb.var(ib))), tb.bind("h", tb.var(ia))},
              tb.var(ib));
        lemma("Iff.mpr", {ia, ib, tb.bind("self", mk_iff(tb.var(ia), tb.var(ib))), tb.bind("h", tb.var(ib))},
              tb.var(ia));
    }

    {
        auto alpha = tb.bind("α", type, true);
        lemma("Exists", {alpha, tb.bind("p", mk_arrow(tb.var(alpha), prop))}, prop);
        auto p = tb.bind("p", mk_arrow(tb.var(alpha), prop), true);
        auto w = tb.bind("w", tb.var(alpha));
        auto ex = mk_app(mk_const("Exists"), {tb.var(alpha), tb.var(p)});
        lemma("Exists.intro", {alpha, p, w, tb.bind("h", mk_app(tb.var(p), tb.var(w)))}, ex);
        auto c = tb.bind("c", prop, true);
        auto x = tb.bind("x", tb.var(alpha));
        term minor = type_builder::close_binders({x}, mk_arrow(mk_app(tb.var(p), tb.var(x)), tb.var(c)), false);
        lemma("Exists.cases", {alpha, p, c, tb.bind("h", ex), tb.bind("intro", minor)}, tb.var(c));
    }

    {
        auto alpha = tb.bind("α", type, true);
        lemma("Eq", {alpha, tb.bind("a", tb.var(alpha)), tb.bind("b", tb.var(alpha))}, prop);
        auto eq = [&](term const &x, term const &y) { return mk_eq(tb.var(alpha), x, y); };
        auto a = tb.bind("a", tb.var(alpha));
        lemma("Eq.refl", {alpha, a}, eq(tb.var(a), tb.var(a)));
        auto ia = tb.bind("a", tb.var(alpha), true), ib = tb.bind("b", tb.var(alpha), true),
             ic = tb.bind("c", tb.var(alpha), true);
        lemma("Eq.symm", {alpha, ia, ib, tb.bind("h", eq(tb.var(ia), tb.var(ib)))}, eq(tb.var(ib), tb.var(ia)));
        lemma("Eq.trans",
              {alpha, ia, ib, ic, tb.bind("h₁", eq(tb.var(ia), tb.var(ib))), tb.bind("h₂", eq(tb.var(ib), tb.var(ic)))},
              eq(tb.var(ia), tb.var(ic)));
        auto motive = tb.bind("motive", mk_arrow(tb.var(alpha), prop), true);
        lemma("Eq.subst",
              {alpha, motive, ia, ib, tb.bind("h₁", eq(tb.var(ia), tb.var(ib))),
               tb.bind("h₂", mk_app(tb.var(motive), tb.var(ia)))},
              mk_app(tb.var(motive), tb.var(ib)));
        auto beta_ty = tb.bind("β", type, true);
        auto a1 = tb.bind("a₁", tb.var(alpha), true), a2 = tb.bind("a₂", tb.var(alpha), true);
        auto f = tb.bind("f", mk_arrow(tb.var(alpha), tb.var(beta_ty)));
        lemma("Eq.congrArg", {alpha, beta_ty, a1, a2, f, tb.bind("h", eq(tb.var(a1), tb.var(a2)))},
              mk_eq(tb.var(beta_ty), mk_app(tb.var(f), tb.var(a1)), mk_app(tb.var(f), tb.var(a2))));
    }

    term N = builtin::nat();
    add(mk_builtin("Nat", type));
    add(mk_builtin("Nat.zero", N));
    add(mk_builtin("Nat.succ", mk_arrow(N, N)));
    add(mk_builtin("Nat.add", mk_arrow(N, mk_arrow(N, N))));
    add(mk_builtin("Nat.mul", mk_arrow(N, mk_arrow(N, N))));
    add(mk_builtin("Nat.le", mk_arrow(N, mk_arrow(N, prop))));
    {
        auto n = tb.bind("n", N), m = tb.bind("m", N);
        add(mk_definition("Nat.lt", mk_arrow(N, mk_arrow(N, prop)),
                          type_builder::close_binders({n, m}, nat_le(nat_add(tb.var(n), mk_lit(1)), tb.var(m)), true)));
    }
    {
        auto motive = tb.bind("motive", mk_arrow(N, prop), true);
        auto n = tb.bind("n", N);
        term step = type_builder::close_binders(
            {n}, mk_arrow(mk_app(tb.var(motive), tb.var(n)), mk_app(tb.var(motive), nat_add(tb.var(n), mk_lit(1)))),
            false);
        auto t = tb.bind("t", N);
        lemma("Nat.rec", {motive, tb.bind("zero", mk_app(tb.var(motive), mk_lit(0))), tb.bind("succ", step), t},
              mk_app(tb.var(motive), tb.var(t)));
    }
    {
        auto n = tb.bind("n", N), m = tb.bind("m", N);
        auto in = tb.bind("n", N, true), im = tb.bind("m", N, true), ik = tb.bind("k", N, true);
        lemma("Nat.le_refl", {n}, nat_le(tb.var(n), tb.var(n)));
        lemma("Nat.le_trans",
              {in, im, ik, tb.bind("h₁", nat_le(tb.var(in), tb.var(im))), tb.bind("h₂", nat_le(tb.var(im), tb.var(ik)))},
              nat_le(tb.var(in), tb.var(ik)));
        lemma("Nat.le_succ", {n}, nat_le(tb.var(n), nat_add(tb.var(n), mk_lit(1))));
        lemma("Nat.zero_le", {n}, nat_le(mk_lit(0), tb.var(n)));
        lemma("Nat.succ_le_succ", {in, im, tb.bind("h", nat_le(tb.var(in), tb.var(im)))},
              nat_le(nat_succ(tb.var(in)), nat_succ(tb.var(im))));
        auto eqN = [&](term const &x, term const &y) { return mk_eq(N, x, y); };
        lemma("Nat.add_zero", {n}, eqN(nat_add(tb.var(n), mk_lit(0)), tb.var(n)));
        lemma("Nat.zero_add", {n}, eqN(nat_add(mk_lit(0), tb.var(n)), tb.var(n)));
        lemma("Nat.add_succ", {n, m},
              eqN(nat_add(tb.var(n), nat_succ(tb.var(m))), nat_succ(nat_add(tb.var(n), tb.var(m)))));
        lemma("Nat.succ_add", {n, m},
              eqN(nat_add(nat_succ(tb.var(n)), tb.var(m)), nat_succ(nat_add(tb.var(n), tb.var(m)))));
        lemma("Nat.mul_zero", {n}, eqN(nat_mul(tb.var(n), mk_lit(0)), mk_lit(0)));
        lemma("Nat.mul_one", {n}, eqN(nat_mul(tb.var(n), mk_lit(1)), tb.var(n)));
    }
    return env;
}

} // namespace metatac
