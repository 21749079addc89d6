/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/frontend/process.h"
#include <algorithm>
#include "metatac/frontend/elab.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/meta/binding.h"
#include "metatac/tactic/tactic.h"

namespace metatac::frontend {

char const *to_string(unit_kind k) {
    switch (k) {
    case unit_kind::theorem: return "theorem";
    case unit_kind::example: return "example";
    case unit_kind::trailer: return "trailer";
    }
    return "?";
}

namespace {

using tactic::tactic_expr;
using tactic::tactic_kind;

/* A tactic of a block, as token ranges. Composite tactics keep their nested blocks. */
struct tnode {
    enum class kind { simple, alts, conv, calc } k = kind::simple;
    std::size_t tb = 0, te = 0; // whole tactic
    std::size_t hb = 0, he = 0; // head tactic
    struct alt {
        std::string name;
        std::vector<std::string> binders;
        std::vector<tnode> block;
    };
    std::vector<alt> alts;
    std::vector<tnode> nested;
    std::vector<std::pair<std::size_t, std::size_t>> steps;
};

struct unit_syntax {
    source_unit unit;
    std::size_t tb = 0, te = 0;
    std::vector<binder_stx> binders;
    syntax_ptr statement;
    std::optional<std::vector<tnode>> block;
    syntax_ptr term;
};

bool is_unit_start(token const &t) {
    return t.line_start && t.kind == tok::ident && (t.text == "theorem" || t.text == "lemma" || t.text == "example");
}

class file_parser {
    std::string_view m_src;
    std::vector<token> const &m_toks;

    bool opens(token const &t) const { return t.kind == tok::symbol && (t.text == "(" || t.text == "[" || t.text == "{"); }
    bool closes(token const &t) const { return t.kind == tok::symbol && (t.text == ")" || t.text == "]" || t.text == "}"); }
    bool is_sym(std::size_t i, char const *s) const { return m_toks[i].kind == tok::symbol && m_toks[i].text == s; }

    [[noreturn]] void fail(std::size_t i, std::string const &msg) const {
        throw exception(error_kind::parse_error, msg, pos_of(m_toks[i]));
    }

    tnode make_node(std::size_t s, std::size_t e) const {
        tnode n;
        n.tb = n.hb = s;
        n.te = n.he = e;
        std::string const &head = m_toks[s].text;
        std::vector<std::size_t> bars;
        int depth = 0;
        for (std::size_t i = s + 1; i < e; ++i) {
            if (opens(m_toks[i]))
                ++depth;
            else if (closes(m_toks[i]))
                --depth;
            else if (depth == 0 && is_sym(i, "|"))
                bars.push_back(i);
        }
        if ((head == "induction" || head == "cases") && !bars.empty()) {
            n.k = tnode::kind::alts;
            n.he = bars.front();
            bars.push_back(e);
            for (std::size_t a = 0; a + 1 < bars.size(); ++a) {
                std::size_t p = bars[a], q = bars[a + 1];
                tnode::alt al;
                if (p + 1 >= q || m_toks[p + 1].kind != tok::ident)
                    fail(p, "expected alternative name after '|'");
                al.name = m_toks[p + 1].text;
                std::size_t r = p + 2;
                while (r < q && !is_sym(r, "=>")) {
                    if (m_toks[r].kind != tok::ident)
                        fail(r, "expected binder name or '=>'");
                    al.binders.push_back(m_toks[r].text);
                    ++r;
                }
                if (r >= q)
                    fail(p, "expected '=>' in alternative");
                al.block = block(r + 1, q);
                n.alts.push_back(std::move(al));
            }
        } else if (head == "conv") {
            for (std::size_t i = s + 1; i < e; ++i)
                if (is_sym(i, "=>")) {
                    n.k = tnode::kind::conv;
                    n.he = i + 1;
                    n.nested = block(i + 1, e);
                    break;
                }
        } else if (head == "calc") {
            n.k = tnode::kind::calc;
            std::size_t start = s;
            for (std::size_t i = s + 1; i < e; ++i)
                if (m_toks[i].line_start && m_toks[i].kind == tok::ident && m_toks[i].text == "_") {
                    n.steps.emplace_back(start, i);
                    start = i;
                }
            n.steps.emplace_back(start, e);
        }
        return n;
    }

public:
    file_parser(std::string_view src, std::vector<token> const &toks) : m_src(src), m_toks(toks) {}

    std::string slice(std::size_t b, std::size_t e) const {
        if (b >= e)
            return {};
        return std::string(m_src.substr(m_toks[b].begin, m_toks[e - 1].end - m_toks[b].begin));
    }
    span span_of(std::size_t b, std::size_t e) const {
        return b >= e ? span{} : span{m_toks[b].begin, m_toks[e - 1].end};
    }

    std::vector<tnode> block(std::size_t b, std::size_t e) const {
        std::vector<tnode> out;
        if (b >= e)
            return out;
        unsigned col = m_toks[b].col;
        std::size_t i = b;
        while (i < e) {
            if (is_sym(i, ";")) {
                ++i;
                continue;
            }
            std::size_t j = i + 1;
            int depth = opens(m_toks[i]) ? 1 : 0;
            for (; j < e; ++j) {
                token const &t = m_toks[j];
                if (depth == 0 && t.kind == tok::symbol && t.text == ";")
                    break;
                if (t.line_start && t.col <= col && !(t.text == "|" && t.col == col) && depth == 0)
                    break;
                if (t.line_start && t.col < col)
                    break;
                if (opens(t))
                    ++depth;
                else if (closes(t) && depth > 0)
                    --depth;
            }
            out.push_back(make_node(i, j));
            i = j;
        }
        return out;
    }

    std::vector<unit_syntax> units(std::vector<comment> const &comments) const {
        std::vector<std::size_t> starts;
        std::size_t eof = m_toks.size() - 1;
        for (std::size_t i = 0; i < eof; ++i)
            if (is_unit_start(m_toks[i]))
                starts.push_back(i);
        if (eof > 0 && (starts.empty() || starts.front() != 0))
            fail(0, "expected 'theorem' or 'example', got '" + m_toks[0].text + "'");
        std::vector<unit_syntax> out;
        for (std::size_t k = 0; k < starts.size(); ++k) {
            std::size_t b = starts[k], e = k + 1 < starts.size() ? starts[k + 1] : eof;
            unit_syntax u;
            u.tb = b;
            u.te = e;
            u.unit.where = span_of(b, e);
            parser p(m_toks, b, e);
            std::string kw = p.next().text;
            u.unit.kind = kw == "example" ? unit_kind::example : unit_kind::theorem;
            if (u.unit.kind == unit_kind::theorem)
                u.unit.name = p.expect_ident();
            std::size_t sb = p.pos();
            u.binders = p.parse_decl_binders();
            if (p.is_symbol(":") || p.is_symbol(","))
                p.next();
            else
                p.error("':'");
            u.statement = p.parse_term(0);
            u.unit.statement = slice(sb, p.pos());
            p.expect_symbol(":=");
            if (p.is_keyword("by")) {
                p.next();
                u.block = block(p.pos(), e);
                for (auto const &n : *u.block)
                    u.unit.tactics.push_back(tactic_span{slice(n.tb, n.te), span_of(n.tb, n.te)});
            } else {
                std::size_t tb = p.pos();
                u.term = p.parse_term(0);
                if (!p.at_end())
                    p.error("end of declaration");
                u.unit.term_proof = slice(tb, e);
            }
            out.push_back(std::move(u));
        }
        // comments attach to the following declaration
        std::size_t ci = 0;
        for (auto &u : out)
            for (; ci < comments.size() && comments[ci].begin < u.unit.where.begin; ++ci)
                u.unit.comments.push_back(comments[ci]);
        if (ci < comments.size()) {
            unit_syntax t;
            t.unit.kind = unit_kind::trailer;
            t.unit.where = span{comments[ci].begin, comments.back().end};
            for (; ci < comments.size(); ++ci)
                t.unit.comments.push_back(comments[ci]);
            out.push_back(std::move(t));
        }
        return out;
    }
};

class replay {
    environment m_env;
    std::shared_ptr<std::string const> m_src;
    std::vector<token> const &m_toks;
    file_parser const &m_fp;
    pp_options m_opts;
    std::vector<tactic_invocation> &m_inv;

public:
    std::vector<mvar_id> sorries;
    goal_state last;

    replay(environment env, std::shared_ptr<std::string const> src, std::vector<token> const &toks,
           file_parser const &fp, pp_options const &o, std::vector<tactic_invocation> &inv, goal_state start)
        : m_env(std::move(env)), m_src(std::move(src)), m_toks(toks), m_fp(fp), m_opts(o), m_inv(inv),
          last(std::move(start)) {}

    std::string goals_text(goal_state const &s, std::vector<mvar_id> const &gs) const {
        std::string r;
        for (std::size_t i = 0; i < gs.size(); ++i)
            r += (i ? "\n\n" : "") + pp_goal(s.store, gs[i], m_opts, &s.env);
        return r;
    }

    tactic_expr parse(std::size_t b, std::size_t e) const {
        parser p(m_toks, b, e);
        tactic_expr t = tactic::parse_tactic(p, m_src);
        t.text = m_fp.slice(b, e);
        return t;
    }

    tactic::tactic_result run(goal_state const &s, tactic_expr const &t, std::size_t at) {
        if (s.goals.empty())
            throw exception(error_kind::tactic_failure, "no goals to be proved", pos_of(m_toks[at]));
        try {
            auto r = tactic::run_tactic(s, s.goals.front(), t, true);
            sorries.insert(sorries.end(), r.sorries.begin(), r.sorries.end());
            last = r.next;
            return r;
        } catch (exception const &e) {
            if (e.pos())
                throw;
            throw exception(e.kind(), e.what(), pos_of(m_toks[at]));
        }
    }

    std::vector<mvar_id> new_goals(goal_state const &before, goal_state const &after) const {
        std::vector<mvar_id> r;
        for (mvar_id g : after.goals)
            if (g == before.goals.front() || !before.has_goal(g))
                r.push_back(g);
        return r;
    }

    goal_state block(goal_state s, std::vector<tnode> const &nodes) {
        for (auto const &n : nodes)
            s = node(s, n);
        return s;
    }

    goal_state node(goal_state const &s, tnode const &n) {
        if (s.goals.empty())
            throw exception(error_kind::tactic_failure, "no goals to be proved", pos_of(m_toks[n.tb]));
        std::string before = pp_goal(s.store, s.goals.front(), m_opts, &s.env);
        std::size_t slot = m_inv.size();
        m_inv.push_back(tactic_invocation{before, "", m_fp.slice(n.tb, n.te)});
        goal_state out = s;
        switch (n.k) {
        case tnode::kind::simple: {
            auto r = run(s, parse(n.tb, n.te), n.tb);
            m_inv[slot].goal_after = goals_text(r.next, r.produced);
            return r.next;
        }
        case tnode::kind::alts: out = alternatives(s, n); break;
        case tnode::kind::conv: {
            auto r = run(s, parse(n.hb, n.he), n.hb);
            goal_state cur = block(r.next, n.nested);
            auto it = std::find_if(cur.goals.begin(), cur.goals.end(),
                                   [&](mvar_id g) { return cur.store.get(g).conv.has_value(); });
            if (it == cur.goals.end())
                throw exception(error_kind::tactic_failure, "conv block closed its focus", pos_of(m_toks[n.tb]));
            tactic_expr done;
            done.kind = tactic_kind::conv_done;
            auto d = tactic::run_tactic(cur, *it, done, true);
            last = d.next;
            out = d.next;
            break;
        }
        case tnode::kind::calc: {
            out = s;
            for (auto const &[b, e] : n.steps) {
                std::string bf = pp_goal(out.store, out.goals.front(), m_opts, &out.env);
                auto r = run(out, parse(b, e), b);
                if (n.steps.size() > 1)
                    m_inv.push_back(tactic_invocation{bf, goals_text(r.next, r.produced), m_fp.slice(b, e)});
                out = r.next;
            }
            break;
        }
        }
        m_inv[slot].goal_after = goals_text(out, new_goals(s, out));
        return out;
    }

    goal_state alternatives(goal_state const &s, tnode const &n) {
        tactic_expr t = parse(n.hb, n.he);
        std::vector<std::string> order = t.kind == tactic_kind::induction ? std::vector<std::string>{"zero", "succ"}
                                                                           : std::vector<std::string>{"inl", "inr"};
        auto index_of = [&](tnode::alt const &a, std::size_t dflt) {
            for (std::size_t i = 0; i < order.size(); ++i)
                if (order[i] == a.name)
                    return i;
            return dflt;
        };
        std::vector<tnode::alt const *> by_index(n.alts.size(), nullptr);
        for (std::size_t i = 0; i < n.alts.size(); ++i) {
            std::size_t k = index_of(n.alts[i], i);
            if (k >= by_index.size() || by_index[k])
                throw exception(error_kind::parse_error, "unexpected alternative '" + n.alts[i].name + "'",
                                pos_of(m_toks[n.tb]));
            by_index[k] = &n.alts[i];
        }
        if (t.names.empty())
            for (auto const *a : by_index)
                t.names.insert(t.names.end(), a->binders.begin(), a->binders.end());
        auto r = run(s, t, n.hb);
        if (r.produced.size() != n.alts.size())
            throw exception(error_kind::tactic_failure,
                            "expected " + std::to_string(r.produced.size()) + " alternatives, got " +
                                std::to_string(n.alts.size()),
                            pos_of(m_toks[n.tb]));
        meta_store store = r.next.store;
        std::vector<mvar_id> left;
        for (std::size_t i = 0; i < by_index.size(); ++i) {
            goal_state sub = make_state(s.env, store, {r.produced[i]}, s.root);
            last = sub;
            sub = block(sub, by_index[i]->block);
            store = sub.store;
            left.insert(left.end(), sub.goals.begin(), sub.goals.end());
        }
        for (mvar_id g : r.next.goals)
            if (std::find(r.produced.begin(), r.produced.end(), g) == r.produced.end() && !store.is_assigned(g))
                left.push_back(g);
        last = make_state(s.env, store, left, s.root);
        return last;
    }
};

struct started {
    goal_state state;
    term type; // full statement, binders included
    local_context ctx;
};

started start_unit(environment const &env, unit_syntax const &u, std::string_view src) {
    meta_store store;
    elaborator el(env, store, {}, src);
    std::vector<fvar_id> xs;
    for (auto const &b : u.binders) {
        term ty = b.type ? el.elab_type(*b.type) : el.elab_type(syntax{stx_kind::hole, "", 0, {}, {}, 0, 0});
        xs.push_back(el.push_local(b.name, ty));
    }
    term T = el.elab_type(*u.statement);
    local_context ctx = store.instantiate(el.lctx());
    T = store.instantiate(T);
    bool open = !store.unassigned_mvars(T).empty();
    for (auto const &d : ctx.decls())
        open = open || !store.unassigned_mvars(d.type).empty();
    if (open)
        throw exception(error_kind::elab_error, "the statement contains unresolved placeholders");
    mvar_id g = store.mk_mvar(ctx, T, mvar_kind::synthetic, "user");
    if (xs.empty())
        return {make_state(env, store, {g}, g), T, ctx};
    term full = mk_pi_fvars(store, ctx, xs, T);
    type_checker tc(env, {}, &store);
    if (!tc.sort_of(full))
        throw type_error("the statement is not a type");
    mvar_id root = store.mk_mvar({}, full, mvar_kind::synthetic, "user");
    store.assign(root, mk_lambda_fvars(store, ctx, xs, mk_mvar(g)));
    return {make_state(env, store, {g}, root), full, ctx};
}

} // namespace

std::vector<source_unit> parse_file(std::string_view src) {
    auto lr = lex(src);
    file_parser fp(src, lr.tokens);
    std::vector<source_unit> out;
    for (auto &u : fp.units(lr.comments))
        out.push_back(std::move(u.unit));
    return out;
}

process_result process(std::string_view src_view, environment const &env0, pp_options const &opts) {
    auto src = std::make_shared<std::string const>(src_view);
    auto lr = lex(*src);
    file_parser fp(*src, lr.tokens);
    auto us = fp.units(lr.comments);
    process_result res;
    res.env = env0;
    pp_options sorry_opts = opts;
    sorry_opts.group_hyps = false;
    for (std::size_t ui = 0; ui < us.size(); ++ui) {
        auto const &u = us[ui];
        res.units.push_back(u.unit);
        if (u.unit.kind == unit_kind::trailer)
            continue;
        auto msg = [&](std::string sev, std::string text, std::optional<source_pos> pos) {
            res.messages.push_back(message{ui, std::move(sev), std::move(text), pos});
        };
        source_pos upos = pos_of(lr.tokens[u.tb]);
        environment env = res.env;
        if (u.unit.name && env.contains(*u.unit.name)) {
            msg("error", "'" + *u.unit.name + "' has already been declared", upos);
            continue;
        }
        std::optional<started> st;
        try {
            st = start_unit(env, u, *src);
        } catch (exception const &e) {
            msg("error", e.what(), e.pos() ? e.pos() : std::optional<source_pos>(upos));
            continue;
        }
        replay rp(env, src, lr.tokens, fp, opts, res.invocations, st->state);
        bool failed = false;
        goal_state fin = st->state;
        try {
            if (u.block) {
                fin = rp.block(st->state, *u.block);
            } else {
                meta_store store = st->state.store;
                mvar_id g = st->state.goals.front();
                auto before = store.next_id();
                elaborator el(env, store, st->ctx, *src);
                term v = el.elab(*u.term, store.get(g).target);
                rp.sorries = el.sorries();
                for (mvar_id m : store.unassigned_mvars(v))
                    if (m.idx >= before && std::find(rp.sorries.begin(), rp.sorries.end(), m) == rp.sorries.end())
                        throw exception(error_kind::elab_error, "the proof term contains unresolved placeholders",
                                        pos_of(lr.tokens[u.tb]));
                store.assign(g, v);
                fin = make_state(env, store, {}, st->state.root);
                rp.last = fin;
            }
        } catch (exception const &e) {
            failed = true;
            msg("error", e.what(), e.pos());
            fin = rp.last;
        }
        std::sort(rp.sorries.begin(), rp.sorries.end());
        for (mvar_id m : rp.sorries) {
            if (!fin.store.contains(m) || fin.store.is_assigned(m))
                continue;
            auto const &d = fin.store.get(m);
            sorry_goal sg;
            sg.context = pp_hyps(fin.store, m, sorry_opts, &env);
            sg.target = pp(fin.store.instantiate(d.target), fin.store.instantiate(d.ctx), opts, &env);
            sg.state = make_state(env, fin.store, {m}, fin.root);
            sg.goal = m;
            sg.unit = ui;
            res.sorries.push_back(std::move(sg));
        }
        if (failed)
            continue;
        if (!fin.goals.empty()) {
            std::string gs;
            for (std::size_t i = 0; i < fin.goals.size(); ++i)
                gs += (i ? "\n\n" : "") + pp_goal(fin.store, fin.goals[i], opts, &env);
            msg("error", "unsolved goals\n" + gs, upos);
            continue;
        }
        term proof = root_proof(fin);
        bool uses_sorry = !fin.store.unassigned_mvars(proof).empty();
        if (uses_sorry)
            msg("warning", "declaration uses 'sorry'", upos);
        if (u.unit.kind != unit_kind::theorem)
            continue;
        try {
            declaration d;
            d.name = *u.unit.name;
            d.type = st->type;
            if (uses_sorry) {
                d.kind = decl_kind::axiom;
            } else {
                d.kind = decl_kind::theorem;
                d.value = proof;
            }
            res.env = add_decl(res.env, d);
        } catch (exception const &e) {
            msg("error", std::string("kernel rejected the proof: ") + e.what(), upos);
        }
    }
    return res;
}

} // namespace metatac::frontend
