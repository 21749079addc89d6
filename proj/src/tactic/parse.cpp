/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/tactic/tactic.h"

namespace metatac::tactic {

using namespace frontend;

char const *to_string(tactic_kind k) {
    switch (k) {
    case tactic_kind::intro: return "intro";
    case tactic_kind::intros: return "intros";
    case tactic_kind::exact: return "exact";
    case tactic_kind::apply: return "apply";
    case tactic_kind::refine: return "refine";
    case tactic_kind::cases: return "cases";
    case tactic_kind::exists: return "exists";
    case tactic_kind::have: return "have";
    case tactic_kind::let: return "let";
    case tactic_kind::rfl: return "rfl";
    case tactic_kind::decide: return "decide";
    case tactic_kind::assumption: return "assumption";
    case tactic_kind::rw: return "rw";
    case tactic_kind::induction: return "induction";
    case tactic_kind::calc_step: return "calc";
    case tactic_kind::conv_enter: return "conv";
    case tactic_kind::conv_done: return "done";
    case tactic_kind::hammer: return "hammer";
    case tactic_kind::simp: return "simp";
    case tactic_kind::sorry: return "sorry";
    }
    return "?";
}

namespace {

std::vector<std::string> names_until_end(parser &p) {
    std::vector<std::string> r;
    while (!p.at_end())
        r.push_back(p.expect_ident());
    return r;
}

void parse_calc_step(parser &p, tactic_expr &t) {
    t.kind = tactic_kind::calc_step;
    t.term = p.parse_term(0);
    if (p.is_symbol(":=")) {
        p.next();
        t.value = p.parse_term(0);
    }
}

} // namespace

tactic_expr parse_tactic(parser &p, std::shared_ptr<std::string const> src) {
    tactic_expr t;
    t.src = src;
    if (p.at_end())
        p.error("tactic");
    std::size_t begin = p.peek().begin;
    token const head = p.peek();
    std::string const &kw = head.text;
    if (head.kind == tok::ident && kw == "_") {
        parse_calc_step(p, t);
    } else if (head.kind != tok::ident) {
        p.error("tactic");
    } else {
        p.next();
        if (kw == "intro") {
            t.kind = tactic_kind::intro;
            t.names = names_until_end(p);
        } else if (kw == "intros") {
            t.kind = tactic_kind::intros;
            t.names = names_until_end(p);
        } else if (kw == "exact") {
            t.kind = tactic_kind::exact;
            t.term = p.parse_term(0);
        } else if (kw == "apply") {
            t.kind = tactic_kind::apply;
            t.term = p.parse_term(0);
        } else if (kw == "refine" || kw == "expr") {
            t.kind = tactic_kind::refine;
            t.term = p.parse_term(0);
        } else if (kw == "cases") {
            t.kind = tactic_kind::cases;
            t.name = p.expect_ident();
            if (p.is_keyword("with")) {
                p.next();
                t.names = names_until_end(p);
            }
        } else if (kw == "exists") {
            t.kind = tactic_kind::exists;
            t.terms.push_back(p.parse_term(0));
            while (p.is_symbol(",")) {
                p.next();
                t.terms.push_back(p.parse_term(0));
            }
        } else if (kw == "have") {
            t.kind = tactic_kind::have;
            t.name = p.expect_ident();
            p.expect_symbol(":");
            t.term = p.parse_term(0);
            if (p.is_symbol(":=")) {
                p.next();
                t.value = p.parse_term(0);
            }
        } else if (kw == "let") {
            t.kind = tactic_kind::let;
            t.name = p.expect_ident();
            if (p.is_symbol(":")) {
                p.next();
                t.term = p.parse_term(0);
            }
            p.expect_symbol(":=");
            t.value = p.parse_term(0);
        } else if (kw == "rfl") {
            t.kind = tactic_kind::rfl;
        } else if (kw == "decide") {
            t.kind = tactic_kind::decide;
        } else if (kw == "assumption") {
            t.kind = tactic_kind::assumption;
        } else if (kw == "sorry") {
            t.kind = tactic_kind::sorry;
        } else if (kw == "done") {
            t.kind = tactic_kind::conv_done;
        } else if (kw == "rw" || kw == "rewrite") {
            t.kind = tactic_kind::rw;
            auto rule = [&] {
                rw_rule r;
                if (p.is_symbol("←")) {
                    p.next();
                    r.reverse = true;
                }
                r.term = p.parse_term(0);
                t.rules.push_back(r);
            };
            if (p.is_symbol("[")) {
                p.next();
                rule();
                while (p.is_symbol(",")) {
                    p.next();
                    rule();
                }
                p.expect_symbol("]");
            } else {
                rule();
            }
        } else if (kw == "induction") {
            t.kind = tactic_kind::induction;
            t.name = p.expect_ident();
            if (p.is_keyword("with")) {
                p.next();
                t.names = names_until_end(p);
            }
        } else if (kw == "calc") {
            parse_calc_step(p, t);
        } else if (kw == "conv") {
            t.kind = tactic_kind::conv_enter;
            if (p.is_keyword("lhs") || p.is_keyword("rhs")) {
                t.rhs = p.next().text == "rhs";
            } else {
                p.error("'lhs' or 'rhs'");
            }
            if (p.is_symbol("=>"))
                p.next();
        } else if (kw == "hammer") {
            t.kind = tactic_kind::hammer;
            if (!p.at_end() && p.peek().kind == tok::number) {
                std::string const &n = p.next().text;
                if (n.size() > 12)
                    p.error("a smaller budget");
                t.budget = std::stoull(n);
            }
        } else if (kw == "simp") {
            t.kind = tactic_kind::simp;
            if (p.is_keyword("only"))
                p.next();
            if (p.is_symbol("[")) {
                p.next();
                t.rules.push_back(rw_rule{p.parse_term(0), false});
                while (p.is_symbol(",")) {
                    p.next();
                    t.rules.push_back(rw_rule{p.parse_term(0), false});
                }
                p.expect_symbol("]");
            }
        } else {
            p.set_pos(p.pos() - 1);
            p.error("tactic");
        }
    }
    if (!p.at_end())
        p.error("end of tactic");
    (void)begin;
    return t;
}

tactic_expr parse_tactic(std::string_view src) {
    auto owned = std::make_shared<std::string const>(src);
    auto lr = lex(*owned);
    parser p(lr.tokens, 0, lr.tokens.size() - 1);
    tactic_expr t = parse_tactic(p, owned);
    std::string s(src);
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    t.text = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    return t;
}

} // namespace metatac::tactic
