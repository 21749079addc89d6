/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/meta/binding.h"
#include <algorithm>
#include "metatac/kernel/error.h"

namespace metatac {
namespace {

term close_over(meta_store &store, local_context const &lctx, std::vector<fvar_id> const &xs, term const &e,
                bool lambda) {
    term r = abstract(elim_mvar_deps(store, xs, e), xs);
    for (std::size_t i = xs.size(); i-- > 0;) {
        auto const *ld = lctx.find(xs[i]);
        if (!ld)
            throw exception(error_kind::elab_error, "internal: binder variable missing from context");
        std::vector<fvar_id> prefix(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i));
        term ty = abstract(elim_mvar_deps(store, prefix, store.instantiate(ld->type)), prefix);
        r = lambda ? mk_lambda(ld->user_name, ty, r) : mk_pi(ld->user_name, ty, r);
    }
    return r;
}

// replacement head for `m`, or nullopt when `m` does not see any of xs
std::optional<term> elim_mvar(meta_store &store, std::vector<fvar_id> const &xs, mvar_id m) {
    metavar_decl d = store.get(m);
    auto const &ds = d.ctx.decls();
    std::size_t first = ds.size();
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (std::find(xs.begin(), xs.end(), ds[i].id) != xs.end()) {
            first = i;
            break;
        }
    if (first == ds.size())
        return std::nullopt;
    // every hypothesis from the first eliminated one onwards becomes an argument
    local_context outer;
    std::vector<fvar_id> ys;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i < first)
            outer.push_back(ds[i]);
        else
            ys.push_back(ds[i].id);
    }
    term ty = close_over(store, d.ctx, ys, store.instantiate(d.target), false);
    std::vector<term> args;
    for (fvar_id y : ys)
        args.push_back(mk_fvar(y));
    if (d.kind == mvar_kind::natural && !d.is_assigned()) {
        mvar_id n = store.mk_mvar(outer, ty, mvar_kind::natural, d.origin);
        store.assign(m, mk_app(mk_mvar(n), args));
        return mk_app(mk_mvar(n), args);
    }
    mvar_id n = store.mk_mvar(outer, ty, mvar_kind::synthetic, d.origin);
    store.assign_delayed(n, ys, m);
    return mk_app(mk_mvar(n), args);
}

} // namespace

term elim_mvar_deps(meta_store &store, std::vector<fvar_id> const &xs, term const &e) {
    term t = store.instantiate(e);
    if (!t.has_mvar() || xs.empty())
        return t;
    return replace(t, [&](term const &s, unsigned) -> std::optional<term> {
        if (!s.has_mvar())
            return s;
        term const &h = get_app_fn(s);
        if (!h.is_mvar())
            return std::nullopt;
        std::vector<term> args = get_app_args(s);
        for (auto &a : args)
            a = elim_mvar_deps(store, xs, a);
        if (!store.contains(h.mvar()))
            return mk_app(h, args);
        auto nh = elim_mvar(store, xs, h.mvar());
        term r = mk_app(nh ? *nh : h, args);
        return r;
    });
}

term mk_lambda_fvars(meta_store &store, local_context const &lctx, std::vector<fvar_id> const &xs, term const &e) {
    return close_over(store, lctx, xs, e, true);
}

term mk_pi_fvars(meta_store &store, local_context const &lctx, std::vector<fvar_id> const &xs, term const &e) {
    return close_over(store, lctx, xs, e, false);
}

term mk_let_fvar(meta_store &store, local_context const &lctx, fvar_id x, term const &e) {
    auto const *ld = lctx.find(x);
    if (!ld || !ld->value)
        throw exception(error_kind::elab_error, "internal: let variable missing from context");
    term body = abstract(elim_mvar_deps(store, {x}, e), x);
    return mk_let(ld->user_name, store.instantiate(ld->type), store.instantiate(*ld->value), body);
}

} // namespace metatac
