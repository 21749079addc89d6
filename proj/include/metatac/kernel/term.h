/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>
#include <boost/multiprecision/cpp_int.hpp>

namespace metatac {

using nat = boost::multiprecision::cpp_int;

/** \brief Identifier of a local (free) variable. Unique within a metavariable store lineage. */
struct fvar_id {
    std::uint64_t idx = 0;
    auto operator<=>(fvar_id const &) const = default;
};

/** \brief Identifier of a metavariable. */
struct mvar_id {
    std::uint64_t idx = 0;
    auto operator<=>(mvar_id const &) const = default;
};

enum class term_kind : std::uint8_t { sort, constant, bvar, fvar, mvar, app, lambda, pi, let, lit };

/** \brief Two-level universe: Prop : Type, and Type is terminal. */
enum class sort_level : std::uint8_t { prop, type };

class term_cell;

/**
   \brief Immutable expression of the object language.

   Bound variables use de Bruijn indices (bvar); variables of a local context are
   fvars. Cells are shared, so copying a term is a reference count bump. */
class term {
    std::shared_ptr<term_cell const> m_ptr;
    explicit term(std::shared_ptr<term_cell const> p) : m_ptr(std::move(p)) {}
    friend class term_cell;
    friend term mk_sort(sort_level);
    friend term mk_const(std::string);
    friend term mk_bvar(unsigned);
    friend term mk_fvar(fvar_id);
    friend term mk_mvar(mvar_id);
    friend term mk_app(term const &, term const &);
    friend term mk_lambda(std::string, term const &, term const &);
    friend term mk_pi(std::string, term const &, term const &);
    friend term mk_let(std::string, term const &, term const &, term const &);
    friend term mk_lit(nat);

public:
    /** \brief The default term is Prop; it exists so containers can hold terms. */
    term();

    term_kind kind() const;
    bool is_sort() const { return kind() == term_kind::sort; }
    bool is_constant() const { return kind() == term_kind::constant; }
    bool is_bvar() const { return kind() == term_kind::bvar; }
    bool is_fvar() const { return kind() == term_kind::fvar; }
    bool is_mvar() const { return kind() == term_kind::mvar; }
    bool is_app() const { return kind() == term_kind::app; }
    bool is_lambda() const { return kind() == term_kind::lambda; }
    bool is_pi() const { return kind() == term_kind::pi; }
    bool is_binding() const { return is_lambda() || is_pi(); }
    bool is_let() const { return kind() == term_kind::let; }
    bool is_lit() const { return kind() == term_kind::lit; }

    sort_level sort() const;
    std::string const &const_name() const;
    unsigned bvar_idx() const;
    fvar_id fvar() const;
    mvar_id mvar() const;
    term const &app_fn() const;
    term const &app_arg() const;
    std::string const &binder_name() const;
    term const &binder_type() const;
    term const &binder_body() const;
    std::string const &let_name() const;
    term const &let_type() const;
    term const &let_value() const;
    term const &let_body() const;
    nat const &lit_value() const;

    std::size_t hash() const;
    bool has_fvar() const;
    bool has_mvar() const;
    /** \brief One more than the largest loose bound variable index, 0 if closed. */
    unsigned loose_bvar_range() const;
    bool has_loose_bvars() const { return loose_bvar_range() > 0; }
    /** \brief Number of nodes in the tree. */
    std::size_t size() const;

    bool is_shared_with(term const &o) const { return m_ptr == o.m_ptr; }
    term_cell const *raw() const { return m_ptr.get(); }
};

term mk_sort(sort_level l);
term mk_const(std::string name);
term mk_bvar(unsigned idx);
term mk_fvar(fvar_id id);
term mk_mvar(mvar_id id);
term mk_app(term const &fn, term const &arg);
term mk_app(term const &fn, std::span<term const> args);
term mk_app(term const &fn, std::initializer_list<term> args);
term mk_lambda(std::string name, term const &type, term const &body);
term mk_pi(std::string name, term const &type, term const &body);
term mk_let(std::string name, term const &type, term const &value, term const &body);
term mk_lit(nat n);
inline term mk_prop() { return mk_sort(sort_level::prop); }
inline term mk_type() { return mk_sort(sort_level::type); }
/** \brief Non-dependent arrow `a → b`. The body is lifted so `b` keeps its meaning. */
term mk_arrow(term const &a, term const &b);

/** \brief Alpha-equivalence: structural equality ignoring binder names. */
bool operator==(term const &a, term const &b);
/** \brief Structural equality including binder names. */
bool is_identical(term const &a, term const &b);

term const &get_app_fn(term const &t);
std::vector<term> get_app_args(term const &t);
unsigned get_app_num_args(term const &t);
/** \brief Head constant name of an application spine, if the head is a constant. */
std::optional<std::string> get_app_const(term const &t);
bool is_app_of(term const &t, std::string const &c, unsigned nargs);

/** \brief Instantiate loose bvar 0 with `v`, lowering the other loose indices. */
term instantiate(term const &body, term const &v);
/** \brief Instantiate loose bvars with `vals`: bvar i becomes vals[vals.size() - 1 - i]. */
term instantiate_rev(term const &body, std::span<term const> vals);
/** \brief Replace each fvar in `xs` by a bvar; xs.back() becomes bvar 0. */
term abstract(term const &t, std::span<fvar_id const> xs);
term abstract(term const &t, fvar_id x);
term lift_loose_bvars(term const &t, unsigned start, unsigned delta);
term lower_loose_bvars(term const &t, unsigned start, unsigned delta);
bool has_loose_bvar(term const &t, unsigned idx);

/** \brief Beta-reduce `fn` applied to `args` as far as `fn` has leading lambdas. */
term beta(term const &fn, std::span<term const> args);
term head_beta(term const &t);

/**
   \brief Generic bottom-up rewriting. `f(t, offset)` returns a replacement or nullopt
   to descend; offset is the number of binders above `t`. */
term replace(term const &t, std::function<std::optional<term>(term const &, unsigned)> const &f);
/** \brief Pre-order traversal; returning false from `f` skips the children. */
void for_each(term const &t, std::function<bool(term const &, unsigned)> const &f);

bool occurs_fvar(term const &t, fvar_id x);
bool occurs_mvar(term const &t, mvar_id m);
/** \brief Metavariables in order of first occurrence (pre-order, left to right). */
std::vector<mvar_id> collect_mvars(term const &t);
std::vector<fvar_id> collect_fvars(term const &t);

struct term_hash {
    std::size_t operator()(term const &t) const { return t.hash(); }
};

} // namespace metatac

template <> struct std::hash<metatac::fvar_id> {
    std::size_t operator()(metatac::fvar_id x) const noexcept { return std::hash<std::uint64_t>{}(x.idx); }
};
template <> struct std::hash<metatac::mvar_id> {
    std::size_t operator()(metatac::mvar_id x) const noexcept { return std::hash<std::uint64_t>{}(x.idx); }
};
