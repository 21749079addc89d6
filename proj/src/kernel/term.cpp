/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/term.h"
#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace metatac {

class term_cell {
public:
    term_kind m_kind;
    sort_level m_sort = sort_level::prop;
    bool m_has_fvar = false;
    bool m_has_mvar = false;
    unsigned m_loose_range = 0;
    std::uint64_t m_idx = 0;
    std::size_t m_hash = 0;
    std::size_t m_size = 1;
    std::string m_name;
    term m_a, m_b, m_c;
    nat m_lit;

    explicit term_cell(term_kind k) : m_kind(k), m_a(nullptr_tag()), m_b(nullptr_tag()), m_c(nullptr_tag()) {}

    static term nullptr_tag() { return term(std::shared_ptr<term_cell const>()); }
    static term wrap(std::shared_ptr<term_cell const> p) { return term(std::move(p)); }
};

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

term const &prop_singleton() {
    static term const t = mk_sort(sort_level::prop);
    return t;
}

void inherit(term_cell &c, term const &child, unsigned binders) {
    auto const *p = child.raw();
    c.m_has_fvar |= p->m_has_fvar;
    c.m_has_mvar |= p->m_has_mvar;
    unsigned r = p->m_loose_range;
    r = r > binders ? r - binders : 0;
    c.m_loose_range = std::max(c.m_loose_range, r);
    c.m_size += p->m_size;
    c.m_hash = hash_mix(c.m_hash, p->m_hash);
}

} // namespace

term::term() : term(prop_singleton()) {}

term_kind term::kind() const { return m_ptr->m_kind; }
sort_level term::sort() const { assert(is_sort()); return m_ptr->m_sort; }
std::string const &term::const_name() const { assert(is_constant()); return m_ptr->m_name; }
unsigned term::bvar_idx() const { assert(is_bvar()); return static_cast<unsigned>(m_ptr->m_idx); }
fvar_id term::fvar() const { assert(is_fvar()); return fvar_id{m_ptr->m_idx}; }
mvar_id term::mvar() const { assert(is_mvar()); return mvar_id{m_ptr->m_idx}; }
term const &term::app_fn() const { assert(is_app()); return m_ptr->m_a; }
term const &term::app_arg() const { assert(is_app()); return m_ptr->m_b; }
std::string const &term::binder_name() const { assert(is_binding()); return m_ptr->m_name; }
term const &term::binder_type() const { assert(is_binding()); return m_ptr->m_a; }
term const &term::binder_body() const { assert(is_binding()); return m_ptr->m_b; }
std::string const &term::let_name() const { assert(is_let()); return m_ptr->m_name; }
term const &term::let_type() const { assert(is_let()); return m_ptr->m_a; }
term const &term::let_value() const { assert(is_let()); return m_ptr->m_b; }
term const &term::let_body() const { assert(is_let()); return m_ptr->m_c; }
nat const &term::lit_value() const { assert(is_lit()); return m_ptr->m_lit; }
std::size_t term::hash() const { return m_ptr->m_hash; }
bool term::has_fvar() const { return m_ptr->m_has_fvar; }
bool term::has_mvar() const { return m_ptr->m_has_mvar; }
unsigned term::loose_bvar_range() const { return m_ptr->m_loose_range; }
std::size_t term::size() const { return m_ptr->m_size; }

term mk_sort(sort_level l) {
    auto c = std::make_shared<term_cell>(term_kind::sort);
    c->m_sort = l;
    c->m_hash = hash_mix(1, static_cast<std::size_t>(l));
    return term(std::move(c));
}

term mk_const(std::string name) {
    auto c = std::make_shared<term_cell>(term_kind::constant);
    c->m_hash = hash_mix(2, std::hash<std::string>{}(name));
    c->m_name = std::move(name);
    return term(std::move(c));
}

term mk_bvar(unsigned idx) {
    auto c = std::make_shared<term_cell>(term_kind::bvar);
    c->m_idx = idx;
    c->m_loose_range = idx + 1;
    c->m_hash = hash_mix(3, idx);
    return term(std::move(c));
}

term mk_fvar(fvar_id id) {
    auto c = std::make_shared<term_cell>(term_kind::fvar);
    c->m_idx = id.idx;
    c->m_has_fvar = true;
    c->m_hash = hash_mix(4, id.idx);
    return term(std::move(c));
}

term mk_mvar(mvar_id id) {
    auto c = std::make_shared<term_cell>(term_kind::mvar);
    c->m_idx = id.idx;
    c->m_has_mvar = true;
    c->m_hash = hash_mix(5, id.idx);
    return term(std::move(c));
}

term mk_app(term const &fn, term const &arg) {
    auto c = std::make_shared<term_cell>(term_kind::app);
    c->m_hash = 6;
    inherit(*c, fn, 0);
    inherit(*c, arg, 0);
    c->m_a = fn;
    c->m_b = arg;
    return term(std::move(c));
}

term mk_app(term const &fn, std::span<term const> args) {
    term r = fn;
    for (auto const &a : args)
        r = mk_app(r, a);
    return r;
}

term mk_app(term const &fn, std::initializer_list<term> args) {
    return mk_app(fn, std::span<term const>(args.begin(), args.size()));
}

static term mk_binding(term_kind k, std::string name, term const &type, term const &body) {
    auto c = std::make_shared<term_cell>(k);
    c->m_hash = k == term_kind::lambda ? 7 : 8;
    inherit(*c, type, 0);
    inherit(*c, body, 1);
    c->m_name = std::move(name);
    c->m_a = type;
    c->m_b = body;
    return term_cell::wrap(std::move(c));
}

term mk_lambda(std::string name, term const &type, term const &body) {
    return mk_binding(term_kind::lambda, std::move(name), type, body);
}

term mk_pi(std::string name, term const &type, term const &body) {
    return mk_binding(term_kind::pi, std::move(name), type, body);
}

term mk_let(std::string name, term const &type, term const &value, term const &body) {
    auto c = std::make_shared<term_cell>(term_kind::let);
    c->m_hash = 9;
    inherit(*c, type, 0);
    inherit(*c, value, 0);
    inherit(*c, body, 1);
    c->m_name = std::move(name);
    c->m_a = type;
    c->m_b = value;
    c->m_c = body;
    return term(std::move(c));
}

term mk_lit(nat n) {
    auto c = std::make_shared<term_cell>(term_kind::lit);
    c->m_hash = hash_mix(10, std::hash<std::string>{}(n.str()));
    c->m_lit = std::move(n);
    return term(std::move(c));
}

term mk_arrow(term const &a, term const &b) {
    return mk_pi("a", a, lift_loose_bvars(b, 0, 1));
}

static bool equal_core(term const &a, term const &b, bool names) {
    if (a.is_shared_with(b))
        return true;
    if (a.hash() != b.hash() || a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case term_kind::sort: return a.sort() == b.sort();
    case term_kind::constant: return a.const_name() == b.const_name();
    case term_kind::bvar: return a.bvar_idx() == b.bvar_idx();
    case term_kind::fvar: return a.fvar() == b.fvar();
    case term_kind::mvar: return a.mvar() == b.mvar();
    case term_kind::app:
        return equal_core(a.app_fn(), b.app_fn(), names) && equal_core(a.app_arg(), b.app_arg(), names);
    case term_kind::lambda:
    case term_kind::pi:
        return (!names || a.binder_name() == b.binder_name()) &&
               equal_core(a.binder_type(), b.binder_type(), names) &&
               equal_core(a.binder_body(), b.binder_body(), names);
    case term_kind::let:
        return (!names || a.let_name() == b.let_name()) && equal_core(a.let_type(), b.let_type(), names) &&
               equal_core(a.let_value(), b.let_value(), names) && equal_core(a.let_body(), b.let_body(), names);
    case term_kind::lit: return a.lit_value() == b.lit_value();
    }
    return false;
}

bool operator==(term const &a, term const &b) { return equal_core(a, b, false); }
bool is_identical(term const &a, term const &b) { return equal_core(a, b, true); }

term const &get_app_fn(term const &t) {
    term const *r = &t;
    while (r->is_app())
        r = &r->app_fn();
    return *r;
}

std::vector<term> get_app_args(term const &t) {
    std::vector<term> args;
    term const *r = &t;
    while (r->is_app()) {
        args.push_back(r->app_arg());
        r = &r->app_fn();
    }
    std::reverse(args.begin(), args.end());
    return args;
}

unsigned get_app_num_args(term const &t) {
    unsigned n = 0;
    term const *r = &t;
    while (r->is_app()) {
        ++n;
        r = &r->app_fn();
    }
    return n;
}

std::optional<std::string> get_app_const(term const &t) {
    auto const &f = get_app_fn(t);
    if (f.is_constant())
        return f.const_name();
    return std::nullopt;
}

bool is_app_of(term const &t, std::string const &c, unsigned nargs) {
    auto const &f = get_app_fn(t);
    return f.is_constant() && f.const_name() == c && get_app_num_args(t) == nargs;
}

term replace(term const &t, std::function<std::optional<term>(term const &, unsigned)> const &f) {
    std::function<term(term const &, unsigned)> go = [&](term const &e, unsigned off) -> term {
        if (auto r = f(e, off))
            return *r;
        switch (e.kind()) {
        case term_kind::app: {
            term fn = go(e.app_fn(), off), arg = go(e.app_arg(), off);
            if (fn.is_shared_with(e.app_fn()) && arg.is_shared_with(e.app_arg()))
                return e;
            return mk_app(fn, arg);
        }
        case term_kind::lambda:
        case term_kind::pi: {
            term ty = go(e.binder_type(), off), body = go(e.binder_body(), off + 1);
            if (ty.is_shared_with(e.binder_type()) && body.is_shared_with(e.binder_body()))
                return e;
            return e.is_lambda() ? mk_lambda(e.binder_name(), ty, body) : mk_pi(e.binder_name(), ty, body);
        }
        case term_kind::let: {
            term ty = go(e.let_type(), off), val = go(e.let_value(), off), body = go(e.let_body(), off + 1);
            if (ty.is_shared_with(e.let_type()) && val.is_shared_with(e.let_value()) &&
                body.is_shared_with(e.let_body()))
                return e;
            return mk_let(e.let_name(), ty, val, body);
        }
        default: return e;
        }
    };
    return go(t, 0);
}

void for_each(term const &t, std::function<bool(term const &, unsigned)> const &f) {
    std::function<void(term const &, unsigned)> go = [&](term const &e, unsigned off) {
        if (!f(e, off))
            return;
        switch (e.kind()) {
        case term_kind::app:
            go(e.app_fn(), off);
            go(e.app_arg(), off);
            break;
        case term_kind::lambda:
        case term_kind::pi:
            go(e.binder_type(), off);
            go(e.binder_body(), off + 1);
            break;
        case term_kind::let:
            go(e.let_type(), off);
            go(e.let_value(), off);
            go(e.let_body(), off + 1);
            break;
        default: break;
        }
    };
    go(t, 0);
}

term lift_loose_bvars(term const &t, unsigned start, unsigned delta) {
    if (delta == 0 || t.loose_bvar_range() <= start)
        return t;
    return replace(t, [&](term const &e, unsigned off) -> std::optional<term> {
        if (e.loose_bvar_range() <= start + off)
            return e;
        if (e.is_bvar())
            return mk_bvar(e.bvar_idx() + delta);
        return std::nullopt;
    });
}

term lower_loose_bvars(term const &t, unsigned start, unsigned delta) {
    if (delta == 0 || t.loose_bvar_range() <= start)
        return t;
    return replace(t, [&](term const &e, unsigned off) -> std::optional<term> {
        if (e.loose_bvar_range() <= start + off)
            return e;
        if (e.is_bvar()) {
            assert(e.bvar_idx() >= delta);
            return mk_bvar(e.bvar_idx() - delta);
        }
        return std::nullopt;
    });
}

bool has_loose_bvar(term const &t, unsigned idx) {
    bool found = false;
    for_each(t, [&](term const &e, unsigned off) {
        if (found || e.loose_bvar_range() <= idx + off)
            return false;
        if (e.is_bvar() && e.bvar_idx() == idx + off)
            found = true;
        return !found;
    });
    return found;
}

term instantiate_rev(term const &body, std::span<term const> vals) {
    unsigned n = static_cast<unsigned>(vals.size());
    if (n == 0 || !body.has_loose_bvars())
        return body;
    return replace(body, [&](term const &e, unsigned off) -> std::optional<term> {
        if (e.loose_bvar_range() <= off)
            return e;
        if (e.is_bvar()) {
            unsigned i = e.bvar_idx();
            if (i < off)
                return e;
            if (i - off < n)
                return lift_loose_bvars(vals[n - 1 - (i - off)], 0, off);
            return mk_bvar(i - n);
        }
        return std::nullopt;
    });
}

term instantiate(term const &body, term const &v) {
    return instantiate_rev(body, std::span<term const>(&v, 1));
}

term abstract(term const &t, std::span<fvar_id const> xs) {
    if (xs.empty() || !t.has_fvar())
        return t;
    unsigned n = static_cast<unsigned>(xs.size());
    return replace(t, [&](term const &e, unsigned off) -> std::optional<term> {
        if (!e.has_fvar())
            return e;
        if (e.is_fvar()) {
            for (unsigned j = n; j-- > 0;)
                if (xs[j] == e.fvar())
                    return mk_bvar(off + n - 1 - j);
            return e;
        }
        return std::nullopt;
    });
}

term abstract(term const &t, fvar_id x) { return abstract(t, std::span<fvar_id const>(&x, 1)); }

term beta(term const &fn, std::span<term const> args) {
    term f = fn;
    std::size_t i = 0;
    std::vector<term> consumed;
    while (f.is_lambda() && i < args.size()) {
        consumed.push_back(args[i]);
        f = f.binder_body();
        ++i;
    }
    if (!consumed.empty())
        f = instantiate_rev(f, consumed);
    if (i < args.size())
        return mk_app(f, args.subspan(i));
    return f;
}

term head_beta(term const &t) {
    if (!t.is_app() || !get_app_fn(t).is_lambda())
        return t;
    auto args = get_app_args(t);
    return head_beta(beta(get_app_fn(t), args));
}

bool occurs_fvar(term const &t, fvar_id x) {
    bool found = false;
    for_each(t, [&](term const &e, unsigned) {
        if (found || !e.has_fvar())
            return false;
        if (e.is_fvar() && e.fvar() == x)
            found = true;
        return !found;
    });
    return found;
}

bool occurs_mvar(term const &t, mvar_id m) {
    bool found = false;
    for_each(t, [&](term const &e, unsigned) {
        if (found || !e.has_mvar())
            return false;
        if (e.is_mvar() && e.mvar() == m)
            found = true;
        return !found;
    });
    return found;
}

std::vector<mvar_id> collect_mvars(term const &t) {
    std::vector<mvar_id> out;
    std::unordered_set<mvar_id> seen;
    for_each(t, [&](term const &e, unsigned) {
        if (!e.has_mvar())
            return false;
        if (e.is_mvar() && seen.insert(e.mvar()).second)
            out.push_back(e.mvar());
        return true;
    });
    return out;
}

std::vector<fvar_id> collect_fvars(term const &t) {
    std::vector<fvar_id> out;
    std::unordered_set<fvar_id> seen;
    for_each(t, [&](term const &e, unsigned) {
        if (!e.has_fvar())
            return false;
        if (e.is_fvar() && seen.insert(e.fvar()).second)
            out.push_back(e.fvar());
        return true;
    });
    return out;
}

} // namespace metatac
