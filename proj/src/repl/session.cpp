/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/repl/session.h"
#include <fstream>
#include <iostream>
#include <sstream>
#include "metatac/frontend/elab.h"
#include "metatac/frontend/pp.h"
#include "metatac/frontend/process.h"
#include "metatac/frontend/sexp.h"
#include "metatac/frontend/syntax.h"
#include "metatac/kernel/type_checker.h"
#include "metatac/search/search.h"
#include "metatac/tactic/tactic.h"

namespace metatac::repl {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(std::string const &msg) { throw exception(error_kind::invalid_request, msg); }

template <class T>
T field(json const &p, char const *k) {
    if (!p.is_object() || !p.contains(k))
        bad(std::string("missing field '") + k + "'");
    try {
        return p.at(k).get<T>();
    } catch (json::exception const &) {
        bad(std::string("field '") + k + "' has the wrong type");
    }
}

template <class T>
std::optional<T> opt_field(json const &p, char const *k) {
    if (!p.is_object() || !p.contains(k) || p.at(k).is_null())
        return std::nullopt;
    return field<T>(p, k);
}

json pos_json(source_pos const &p) { return {{"line", p.line}, {"column", p.column}, {"offset", p.offset}}; }

json span_json(frontend::span const &s) { return json::array({s.begin, s.end}); }

json error_json(exception const &e) {
    json err = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (e.pos())
        err["pos"] = pos_json(*e.pos());
    return err;
}

} // namespace

session::session(environment env, options o, std::ostream *stats)
    : m_env(std::move(env)), m_opts(o), m_stats(stats) {}

json session::dispatch(std::string const &cmd, json const &p) {
    frontend::pp_options po;
    po.all = m_opts.pp_all;
    auto goals_json = [&](goal_state const &s, json &out) {
        json ids = json::array(), texts = json::array(), sx = json::array();
        for (mvar_id g : s.goals) {
            ids.push_back(g.idx);
            texts.push_back(frontend::pp_goal(s.store, g, po, &s.env));
            if (m_opts.print_expr_ast)
                sx.push_back(frontend::sexp_print(s.store.instantiate(s.goal(g).target)));
        }
        out["goals"] = ids;
        out["goalTexts"] = texts;
        if (m_opts.print_expr_ast)
            out["goalSexps"] = sx;
    };
    auto state_of = [&](char const *k) { return m_states.get(field<std::uint64_t>(p, k)); };

    if (cmd == "env.add") {
        auto name = field<std::string>(p, "name");
        auto type_src = field<std::string>(p, "type");
        auto value_src = opt_field<std::string>(p, "value");
        meta_store store;
        term T = frontend::elab_statement(m_env, type_src, store);
        declaration d;
        d.name = name;
        d.type = T;
        if (value_src) {
            auto stx = frontend::parse_term_string(*value_src);
            frontend::elaborator el(m_env, store, {}, *value_src);
            term v = store.instantiate(el.elab(*stx, T));
            if (v.has_mvar())
                throw exception(error_kind::elab_error, "the value contains unresolved placeholders");
            d.value = v;
            d.kind = type_checker(m_env, {}).is_prop(T) ? decl_kind::theorem : decl_kind::definition;
        }
        m_env = add_decl(m_env, d);
        return json::object();
    }
    if (cmd == "env.inspect") {
        auto name = field<std::string>(p, "name");
        auto const *d = m_env.find(name);
        if (!d)
            throw exception(error_kind::unknown_constant, "unknown constant '" + name + "'");
        json r = {{"type", frontend::pp(d->type, {}, po, &m_env)}, {"kind", to_string(d->kind)}};
        if (d->value)
            r["value"] = frontend::pp(*d->value, {}, po, &m_env);
        if (opt_field<bool>(p, "sexp").value_or(m_opts.print_expr_ast)) {
            r["sexp"] = frontend::sexp_print(d->type);
            if (d->value)
                r["valueSexp"] = frontend::sexp_print(*d->value);
        }
        return r;
    }
    if (cmd == "options.set") {
        if (!p.is_object())
            bad("payload must be an object");
        options o = m_opts;
        o.automatic = opt_field<bool>(p, "automaticMode").value_or(o.automatic);
        o.print_expr_ast = opt_field<bool>(p, "printExprAST").value_or(o.print_expr_ast);
        o.pp_all = opt_field<bool>(p, "ppAll").value_or(o.pp_all);
        m_opts = o;
        return json::object();
    }
    if (cmd == "options.get")
        return {{"automaticMode", m_opts.automatic}, {"printExprAST", m_opts.print_expr_ast}, {"ppAll", m_opts.pp_all},
                {"version", wire_version}};
    if (cmd == "goal.start") {
        auto src = field<std::string>(p, "expr");
        meta_store store;
        term t = frontend::elab_statement(m_env, src, store);
        goal_state s = state_init(m_env, t, {}, store);
        json r;
        goals_json(s, r);
        r["stateId"] = m_states.add(std::move(s));
        return r;
    }
    if (cmd == "goal.tactic") {
        auto id = field<std::uint64_t>(p, "stateId");
        auto st = m_states.get(id);
        auto tac = field<std::string>(p, "tactic");
        mvar_id g;
        if (auto gid = opt_field<std::uint64_t>(p, "goalId"))
            g = mvar_id{*gid};
        else if (st->goals.empty())
            throw exception(error_kind::unknown_goal, "the state has no active goals");
        else
            g = st->goals.front();
        auto r = tactic::run_tactic(*st, g, tac, m_opts.automatic);
        json out;
        goals_json(r.next, out);
        json coupling = json::array();
        for (auto const &grp : r.coupling) {
            json ids = json::array();
            for (mvar_id m : grp.goals)
                ids.push_back(m.idx);
            coupling.push_back(ids);
        }
        out["coupling"] = coupling;
        out["messages"] = r.messages;
        if (r.hammer_nodes)
            out["hammerNodes"] = r.hammer_nodes;
        out["nextStateId"] = m_states.add(std::move(r.next), id);
        return out;
    }
    if (cmd == "goal.continue") {
        auto target = state_of("targetStateId");
        auto basis = state_of("basisStateId");
        std::optional<std::vector<mvar_id>> subset;
        if (auto gs = opt_field<std::vector<std::uint64_t>>(p, "goals")) {
            subset.emplace();
            for (auto i : *gs)
                subset->push_back(mvar_id{i});
        }
        goal_state s = continue_state(*target, *basis, subset);
        json r;
        goals_json(s, r);
        r["nextStateId"] = m_states.add(std::move(s), field<std::uint64_t>(p, "targetStateId"));
        return r;
    }
    if (cmd == "goal.print") {
        auto st = state_of("stateId");
        term root = root_proof(*st);
        auto const &rd = st->goal(st->root);
        json r = {{"root", frontend::pp(root, st->store.instantiate(rd.ctx), po, &st->env)}, {"solved", sound(*st)}};
        if (opt_field<bool>(p, "sexp").value_or(m_opts.print_expr_ast))
            r["sexp"] = frontend::sexp_print(root);
        goals_json(*st, r);
        return r;
    }
    if (cmd == "goal.search") {
        auto id = field<std::uint64_t>(p, "stateId");
        auto st = m_states.get(id);
        auto engine = opt_field<std::string>(p, "engine").value_or("mcts");
        search::search_result res;
        if (engine == "mcts") {
            search::mcts_config cfg;
            cfg.seed = opt_field<std::uint64_t>(p, "seed").value_or(cfg.seed);
            cfg.max_iterations = opt_field<std::uint64_t>(p, "maxIterations").value_or(cfg.max_iterations);
            cfg.c_uct = opt_field<double>(p, "cUct").value_or(cfg.c_uct);
            cfg.rollout_depth = opt_field<unsigned>(p, "rolloutDepth").value_or(cfg.rollout_depth);
            auto r = search::mcts_run(*st, cfg);
            if (m_stats)
                for (auto const &l : r.result.stats.log)
                    *m_stats << l << "\n";
            if (!r.solved)
                throw exception(error_kind::budget_exhausted, "mcts found no proof within " +
                                                                  std::to_string(r.result.stats.iterations) +
                                                                  " iterations");
            res = std::move(r.result);
        } else if (engine == "bestFirst") {
            res = search::best_first(*st, search::policy{}, opt_field<std::uint64_t>(p, "budget").value_or(1000));
            if (m_stats)
                for (auto const &l : res.stats.log)
                    *m_stats << l << "\n";
        } else {
            bad("engine must be \"mcts\" or \"bestFirst\"");
        }
        json r = {{"solved", true},
                  {"script", res.script},
                  {"stats",
                   {{"iterations", res.stats.iterations},
                    {"nodes", res.stats.nodes},
                    {"tacticCalls", res.stats.tactic_calls},
                    {"maxDepth", res.stats.max_depth}}}};
        r["nextStateId"] = m_states.add(std::move(res.state), id);
        return r;
    }
    if (cmd == "frontend.process") {
        std::string src;
        if (auto s = opt_field<std::string>(p, "source")) {
            src = *s;
        } else if (auto path = opt_field<std::string>(p, "path")) {
            std::ifstream f(*path, std::ios::binary);
            if (!f)
                throw exception(error_kind::io_error, "cannot read '" + *path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            src = ss.str();
        } else {
            bad("frontend.process needs 'source' or 'path'");
        }
        auto res = frontend::process(src, m_env, po);
        json units = json::array();
        for (auto const &u : res.units) {
            json ju = {{"kind", frontend::to_string(u.kind)}, {"span", span_json(u.where)}};
            if (u.name)
                ju["name"] = *u.name;
            if (u.kind != frontend::unit_kind::trailer)
                ju["statement"] = u.statement;
            json cs = json::array();
            for (auto const &c : u.comments)
                cs.push_back({{"text", c.text}, {"span", json::array({c.begin, c.end})}});
            ju["comments"] = cs;
            json ts = json::array();
            for (auto const &t : u.tactics)
                ts.push_back({{"text", t.text}, {"span", span_json(t.where)}});
            ju["tactics"] = ts;
            if (u.term_proof)
                ju["termProof"] = *u.term_proof;
            units.push_back(ju);
        }
        json inv = json::array();
        for (auto const &i : res.invocations)
            inv.push_back({{"goalBefore", i.goal_before}, {"goalAfter", i.goal_after}, {"tactic", i.tactic}});
        json sorries = json::array();
        for (auto const &s : res.sorries) {
            std::uint64_t sid = m_states.add(s.state);
            sorries.push_back(
                {{"context", s.context}, {"target", s.target}, {"stateId", sid}, {"goalId", s.goal.idx}, {"unit", s.unit}});
        }
        json msgs = json::array();
        for (auto const &m : res.messages) {
            json jm = {{"unit", m.unit}, {"severity", m.severity}, {"text", m.text}};
            if (m.pos)
                jm["pos"] = pos_json(*m.pos);
            msgs.push_back(jm);
        }
        return {{"units", units}, {"invocations", inv}, {"sorries", sorries}, {"messages", msgs}};
    }
    if (cmd == "state.gc") {
        auto keep = field<std::vector<std::uint64_t>>(p, "keep");
        return {{"dropped", m_states.gc(keep)}};
    }
    throw exception(error_kind::unknown_command, "unknown command '" + cmd + "'");
}

json session::handle(json const &req) {
    json id = -1;
    if (req.is_object() && req.contains("id") && req.at("id").is_number_integer())
        id = req.at("id");
    try {
        if (!req.is_object() || !req.contains("id") || !req.at("id").is_number_integer())
            bad("a request is an object with an integer 'id'");
        auto cmd = field<std::string>(req, "cmd");
        json payload = req.contains("payload") ? req.at("payload") : json::object();
        if (!payload.is_object())
            bad("'payload' must be an object");
        json result = dispatch(cmd, payload);
        return {{"id", id}, {"ok", true}, {"result", result}};
    } catch (exception const &e) {
        return {{"id", id}, {"ok", false}, {"error", error_json(e)}};
    } catch (std::exception const &e) {
        // keep serving: the state table is only ever extended after a command succeeded
        return {{"id", id}, {"ok", false}, {"error", {{"kind", "InternalError"}, {"message", e.what()}}}};
    }
}

std::string session::handle_line(std::string const &line) {
    json req;
    try {
        req = json::parse(line);
    } catch (json::parse_error const &e) {
        json r = {{"id", -1},
                  {"ok", false},
                  {"error", {{"kind", "MalformedRequest"}, {"message", std::string("not valid JSON: ") + e.what()}}}};
        return r.dump(-1, ' ', false, json::error_handler_t::replace);
    }
    return handle(req).dump(-1, ' ', false, json::error_handler_t::replace);
}

int serve(std::istream &in, std::ostream &out, session &s) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        out << s.handle_line(line) << "\n" << std::flush;
        if (!out)
            return 1;
    }
    return 0;
}

} // namespace metatac::repl
