/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/frontend/syntax.h"
#include <array>
#include <cstring>
#include <utility>

namespace metatac::frontend {

namespace {

std::uint32_t decode(std::string_view s, std::size_t i, unsigned &len) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        len = 1;
        return c;
    }
    unsigned n = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : 2;
    if (i + n > s.size()) {
        len = 1;
        return 0xFFFD;
    }
    std::uint32_t cp = c & (0x3F >> (n - 1));
    for (unsigned k = 1; k < n; ++k)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    len = n;
    return cp;
}

bool is_symbol_cp(std::uint32_t cp) {
    switch (cp) {
    case 0x2200: // ∀
    case 0x2203: // ∃
    case 0x03BB: // λ
    case 0x2192: // →
    case 0x2190: // ←
    case 0x2194: // ↔
    case 0x2228: // ∨
    case 0x2227: // ∧
    case 0x00AC: // ¬
    case 0x2264: // ≤
    case 0x2265: // ≥
    case 0x2260: // ≠
    case 0x22A2: // ⊢
    case 0x21A6: // ↦
    case 0x00B7: // ·
    case 0x27E8: // ⟨
    case 0x27E9: // ⟩
        return true;
    default: return false;
    }
}

bool is_id_start(std::string_view s, std::size_t i) {
    unsigned len;
    std::uint32_t cp = decode(s, i, len);
    if (cp < 0x80)
        return std::isalpha(static_cast<int>(cp)) || cp == '_';
    return !is_symbol_cp(cp);
}

bool is_id_rest(std::string_view s, std::size_t i) {
    unsigned len;
    std::uint32_t cp = decode(s, i, len);
    if (cp < 0x80)
        return std::isalnum(static_cast<int>(cp)) || cp == '_' || cp == '\'';
    return !is_symbol_cp(cp);
}

// ASCII spellings are normalized to their Unicode forms.
constexpr std::array<std::pair<char const *, char const *>, 13> ascii_symbols{{
    {"<->", "↔"},
    {":=", ":="},
    {"=>", "=>"},
    {"->", "→"},
    {"<-", "←"},
    {"<=", "≤"},
    {">=", "≥"},
    {"!=", "≠"},
    {"|-", "⊢"},
    {"/\\", "∧"},
    {"\\/", "∨"},
    {"<;>", "<;>"},
    {"..", ".."},
}};

constexpr char const *single_symbols = "()[]{},:;|=<>+*@?.!-";

} // namespace

source_pos pos_of(token const &t) { return source_pos{t.line, t.col, t.begin}; }

lex_result lex(std::string_view src) {
    lex_result r;
    std::size_t i = 0;
    unsigned line = 1;
    std::size_t line_begin = 0;
    bool at_line_start = true;
    auto here = [&](std::size_t p) { return source_pos{line, static_cast<unsigned>(p - line_begin + 1), p}; };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++i;
            ++line;
            line_begin = i;
            at_line_start = true;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            std::size_t b = i;
            while (i < src.size() && src[i] != '\n')
                ++i;
            r.comments.push_back(comment{std::string(src.substr(b, i - b)), b, i});
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '-') {
            std::size_t b = i;
            source_pos start = here(i);
            unsigned depth = 0;
            while (i < src.size()) {
                if (src.compare(i, 2, "/-") == 0) {
                    ++depth;
                    i += 2;
                } else if (src.compare(i, 2, "-/") == 0) {
                    i += 2;
                    if (--depth == 0)
                        break;
                } else {
                    if (src[i] == '\n') {
                        ++line;
                        line_begin = i + 1;
                    }
                    ++i;
                }
            }
            if (depth != 0)
                throw exception(error_kind::parse_error, "unterminated comment", start);
            r.comments.push_back(comment{std::string(src.substr(b, i - b)), b, i});
            continue;
        }
        token t;
        t.begin = i;
        t.line = line;
        t.col = static_cast<unsigned>(i - line_begin + 1);
        t.line_start = at_line_start;
        at_line_start = false;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
                ++i;
            t.kind = tok::number;
            t.text = std::string(src.substr(t.begin, i - t.begin));
        } else if (is_id_start(src, i)) {
            unsigned len;
            while (i < src.size()) {
                if (is_id_rest(src, i)) {
                    decode(src, i, len);
                    i += len;
                } else if (src[i] == '.' && i + 1 < src.size() && is_id_start(src, i + 1) && i > t.begin) {
                    ++i;
                } else {
                    break;
                }
            }
            t.kind = tok::ident;
            t.text = std::string(src.substr(t.begin, i - t.begin));
        } else {
            t.kind = tok::symbol;
            bool done = false;
            for (auto const &[a, u] : ascii_symbols) {
                std::size_t n = std::strlen(a);
                if (src.compare(i, n, a) == 0) {
                    t.text = u;
                    i += n;
                    done = true;
                    break;
                }
            }
            if (!done) {
                unsigned len;
                std::uint32_t cp = decode(src, i, len);
                if (cp >= 0x80 && is_symbol_cp(cp)) {
                    t.text = std::string(src.substr(i, len));
                    if (cp == 0x21A6)
                        t.text = "=>";
                    i += len;
                } else if (cp < 0x80 && std::strchr(single_symbols, static_cast<char>(cp))) {
                    t.text = std::string(1, static_cast<char>(cp));
                    ++i;
                } else {
                    throw exception(error_kind::parse_error,
                                    "unexpected character '" + std::string(src.substr(i, len)) + "'", here(i));
                }
            }
        }
        t.end = i;
        r.tokens.push_back(std::move(t));
    }
    token eof;
    eof.kind = tok::eof;
    eof.begin = eof.end = src.size();
    eof.line = line;
    eof.col = static_cast<unsigned>(src.size() - line_begin + 1);
    eof.line_start = true;
    r.tokens.push_back(eof);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

char const *const reserved[] = {"by",    "with",  "at",    "fun",   "forall", "exists", "theorem", "example",
                                "calc",  "have",  "show",  "let",   "in",     "from",   "then",    "do",
                                "lemma", "def",   "axiom", "where", "match",  "if",     "else"};

struct infix_info {
    unsigned prec;
    bool right;
};

std::optional<infix_info> infix(token const &t) {
    if (t.kind != tok::symbol)
        return std::nullopt;
    std::string const &s = t.text;
    if (s == "→")
        return infix_info{25, true};
    if (s == "↔")
        return infix_info{20, false};
    if (s == "∨")
        return infix_info{30, true};
    if (s == "∧")
        return infix_info{35, true};
    if (s == "=" || s == "≠" || s == "≤" || s == "<" || s == "≥" || s == ">")
        return infix_info{50, false};
    if (s == "+")
        return infix_info{65, false};
    if (s == "*")
        return infix_info{70, false};
    return std::nullopt;
}

syntax_ptr mk(stx_kind k, std::size_t b, std::size_t e, std::vector<syntax_ptr> args = {}, std::string text = {}) {
    auto s = std::make_shared<syntax>();
    s->kind = k;
    s->begin = b;
    s->end = e;
    s->args = std::move(args);
    s->text = std::move(text);
    return s;
}

} // namespace

bool is_keyword_text(std::string_view s) {
    for (auto k : reserved)
        if (s == k)
            return true;
    return false;
}

parser::parser(std::vector<token> const &toks, std::size_t pos, std::size_t end)
    : m_toks(toks), m_pos(pos), m_end(std::min(end, toks.size() - 1)) {
    if (m_end > 0 && m_end > pos) {
        token const &last = m_toks[m_end - 1];
        m_eof.line = last.line;
        m_eof.col = last.col + static_cast<unsigned>(last.end - last.begin);
        m_eof.begin = m_eof.end = last.end;
    } else {
        m_eof = m_toks[m_end];
        m_eof.kind = tok::eof;
    }
}

token const &parser::peek(std::size_t k) const {
    std::size_t p = m_pos + k;
    return p < m_end ? m_toks[p] : m_eof;
}

bool parser::is_symbol(std::string_view s, std::size_t k) const {
    if (m_pos + k >= m_end)
        return false;
    auto const &t = m_toks[m_pos + k];
    return t.kind == tok::symbol && t.text == s;
}

bool parser::is_keyword(std::string_view s, std::size_t k) const {
    if (m_pos + k >= m_end)
        return false;
    auto const &t = m_toks[m_pos + k];
    return t.kind == tok::ident && t.text == s;
}

token const &parser::next() {
    if (at_end())
        error("more input");
    return m_toks[m_pos++];
}

void parser::error(std::string const &expected) const {
    token const &t = peek();
    std::string got = t.kind == tok::eof ? "end of input" : "'" + t.text + "'";
    throw exception(error_kind::parse_error, "expected " + expected + ", got " + got, pos_of(t));
}

token const &parser::expect_symbol(std::string_view s) {
    if (!is_symbol(s))
        error("'" + std::string(s) + "'");
    return next();
}

token const &parser::expect_keyword(std::string_view s) {
    if (!is_keyword(s))
        error("'" + std::string(s) + "'");
    return next();
}

std::string parser::expect_ident() {
    if (at_end() || peek().kind != tok::ident || is_keyword_text(peek().text))
        error("identifier");
    return next().text;
}

bool parser::starts_arg() const {
    if (at_end())
        return false;
    auto const &t = m_toks[m_pos];
    if (t.kind == tok::number)
        return true;
    if (t.kind == tok::ident)
        return !is_keyword_text(t.text);
    if (t.kind == tok::symbol)
        return t.text == "(" || t.text == "@" || t.text == "?";
    return false;
}

syntax_ptr parser::parse_term(unsigned min_prec) {
    // bare binder/negation terms extend as far as possible; parenthesized ones may be applied
    bool applicable = !(is_keyword("fun") || is_symbol("λ") || is_keyword("forall") || is_symbol("∀") ||
                        is_keyword("exists") || is_symbol("∃") || is_keyword("let") || is_symbol("¬"));
    syntax_ptr lhs = parse_prefix();
    while (!at_end()) {
        token const &t = peek();
        if (auto op = infix(t)) {
            if (op->prec < min_prec)
                break;
            next();
            syntax_ptr rhs = parse_term(op->right ? op->prec : op->prec + 1);
            if (t.text == "→")
                lhs = mk(stx_kind::arrow, lhs->begin, rhs->end, {lhs, rhs});
            else
                lhs = mk(stx_kind::binop, lhs->begin, rhs->end, {lhs, rhs}, t.text);
            applicable = false;
            continue;
        }
        if (min_prec <= 1024 && applicable && starts_arg()) {
            syntax_ptr arg = parse_primary();
            std::vector<syntax_ptr> args;
            if (lhs->kind == stx_kind::app) {
                args = lhs->args;
            } else {
                args.push_back(lhs);
            }
            args.push_back(arg);
            lhs = mk(stx_kind::app, lhs->begin, arg->end, std::move(args));
            continue;
        }
        break;
    }
    return lhs;
}

syntax_ptr parser::parse_prefix() {
    if (at_end())
        error("term");
    std::size_t b = peek().begin;
    if (is_keyword("fun") || is_symbol("λ")) {
        next();
        return parse_binder_term(stx_kind::lambda, b);
    }
    if (is_keyword("forall") || is_symbol("∀")) {
        next();
        return parse_binder_term(stx_kind::pi, b);
    }
    if (is_keyword("exists") || is_symbol("∃")) {
        next();
        return parse_binder_term(stx_kind::exists, b);
    }
    if (is_keyword("let")) {
        next();
        binder_stx x;
        x.name = expect_ident();
        if (is_symbol(":")) {
            next();
            x.type = parse_term(0);
        }
        expect_symbol(":=");
        syntax_ptr v = parse_term(0);
        if (is_symbol(";"))
            next();
        syntax_ptr body = parse_term(0);
        auto s = std::make_shared<syntax>();
        s->kind = stx_kind::let_term;
        s->begin = b;
        s->end = body->end;
        s->binders = {std::move(x)};
        s->args = {v, body};
        return s;
    }
    if (is_symbol("¬")) {
        next();
        syntax_ptr a = parse_term(40);
        return mk(stx_kind::neg, b, a->end, {a});
    }
    return parse_primary();
}

syntax_ptr parser::parse_primary() {
    if (at_end())
        error("term");
    token const &t = peek();
    syntax_ptr r;
    if (t.kind == tok::number) {
        next();
        r = mk(stx_kind::num, t.begin, t.end);
        std::const_pointer_cast<syntax>(r)->num = nat(t.text);
    } else if (t.kind == tok::ident) {
        if (is_keyword_text(t.text))
            error("term");
        next();
        if (t.text == "_")
            r = mk(stx_kind::hole, t.begin, t.end);
        else if (t.text == "sorry")
            r = mk(stx_kind::sorry, t.begin, t.end);
        else if (t.text == "Prop")
            r = mk(stx_kind::prop, t.begin, t.end);
        else if (t.text == "Type")
            r = mk(stx_kind::type, t.begin, t.end);
        else
            r = mk(stx_kind::ident, t.begin, t.end, {}, t.text);
    } else if (t.kind == tok::symbol && t.text == "@") {
        next();
        token const &id = peek();
        if (id.kind != tok::ident || id.begin != t.end || is_keyword_text(id.text))
            error("identifier after '@'");
        next();
        r = mk(stx_kind::explicit_ident, t.begin, id.end, {}, id.text);
    } else if (t.kind == tok::symbol && t.text == "?") {
        next();
        token const &id = peek();
        if (id.kind != tok::ident || id.begin != t.end)
            error("hole name after '?'");
        next();
        std::string name = id.text == "_" ? std::string() : id.text;
        std::size_t e = id.end;
        // `?m.12` style names printed for metavariables
        while (is_symbol(".") && peek().begin == e && m_pos + 1 < m_end && m_toks[m_pos + 1].kind == tok::number &&
               m_toks[m_pos + 1].begin == peek().end) {
            next();
            name += "." + next().text;
            e = m_toks[m_pos - 1].end;
        }
        r = mk(stx_kind::synth_hole, t.begin, e, {}, name);
    } else if (t.kind == tok::symbol && t.text == "(") {
        next();
        syntax_ptr inner = parse_term(0);
        if (is_symbol(":")) {
            next();
            syntax_ptr ty = parse_term(0);
            token const &close = expect_symbol(")");
            r = mk(stx_kind::ascription, t.begin, close.end, {inner, ty});
        } else {
            token const &close = expect_symbol(")");
            auto p = std::make_shared<syntax>(*inner);
            p->begin = t.begin;
            p->end = close.end;
            r = p;
        }
    } else {
        error("term");
    }
    // projections `e.f` with no surrounding spaces
    while (is_symbol(".") && peek().begin == r->end && m_pos + 1 < m_end && m_toks[m_pos + 1].kind == tok::ident &&
           m_toks[m_pos + 1].begin == peek().end) {
        next();
        token const &f = next();
        r = mk(stx_kind::proj, r->begin, f.end, {r}, f.text);
    }
    return r;
}

std::vector<binder_stx> parser::parse_binders(bool allow_bare_type) {
    std::vector<binder_stx> bs;
    bool all_bare = true;
    while (!at_end()) {
        if (is_symbol("(") || is_symbol("{")) {
            bool implicit = is_symbol("{");
            next();
            std::vector<std::string> names;
            while (!at_end() && peek().kind == tok::ident && !is_keyword_text(peek().text))
                names.push_back(next().text);
            if (names.empty())
                error("binder name");
            syntax_ptr ty;
            if (is_symbol(":")) {
                next();
                ty = parse_term(0);
            }
            expect_symbol(implicit ? "}" : ")");
            for (auto &n : names)
                bs.push_back(binder_stx{n, ty, implicit});
            all_bare = false;
        } else if (peek().kind == tok::ident && !is_keyword_text(peek().text)) {
            bs.push_back(binder_stx{next().text, nullptr, false});
        } else {
            break;
        }
    }
    if (bs.empty())
        error("binder");
    if (is_symbol(":")) {
        if (!all_bare)
            error("',' after binders");
        (void)allow_bare_type;
        next();
        syntax_ptr ty = parse_term(0);
        for (auto &b : bs)
            b.type = ty;
    }
    return bs;
}

syntax_ptr parser::parse_binder_term(stx_kind k, std::size_t begin) {
    auto bs = parse_binders(true);
    if (k == stx_kind::lambda) {
        expect_symbol("=>");
    } else {
        expect_symbol(",");
    }
    syntax_ptr body = parse_term(0);
    auto s = std::make_shared<syntax>();
    s->kind = k;
    s->begin = begin;
    s->end = body->end;
    s->binders = std::move(bs);
    s->args = {body};
    return s;
}

std::vector<binder_stx> parser::parse_decl_binders() {
    std::vector<binder_stx> bs;
    while (is_symbol("(") || is_symbol("{")) {
        bool implicit = is_symbol("{");
        next();
        std::vector<std::string> names;
        while (!at_end() && peek().kind == tok::ident && !is_keyword_text(peek().text))
            names.push_back(next().text);
        if (names.empty())
            error("binder name");
        expect_symbol(":");
        syntax_ptr ty = parse_term(0);
        expect_symbol(implicit ? "}" : ")");
        for (auto &n : names)
            bs.push_back(binder_stx{n, ty, implicit});
    }
    return bs;
}

syntax_ptr parse_term_string(std::string_view src) {
    auto lr = lex(src);
    parser p(lr.tokens, 0, lr.tokens.size() - 1);
    syntax_ptr t = p.parse_term(0);
    if (!p.at_end())
        p.error("end of term");
    return t;
}

} // namespace metatac::frontend
