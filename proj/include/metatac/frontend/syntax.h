/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <memory>
#include <string>
#include <string_view>
#include <vector>
#include "metatac/kernel/error.h"
#include "metatac/kernel/term.h"

namespace metatac::frontend {

enum class tok { ident, number, symbol, eof };

struct token {
    tok kind = tok::eof;
    std::string text;
    std::size_t begin = 0, end = 0; // byte offsets
    unsigned line = 1, col = 1;     // col is 1-based, bytes
    bool line_start = false;        // first token on its line
};

struct comment {
    std::string text;
    std::size_t begin = 0, end = 0;
};

struct lex_result {
    std::vector<token> tokens; // always ends with an eof token
    std::vector<comment> comments;
};

/** \brief Tokenize UTF-8 source. Comments (`--`, nested `/- -/`) are collected separately. */
lex_result lex(std::string_view src);

source_pos pos_of(token const &t);

enum class stx_kind {
    ident,
    num,
    hole,       // _
    synth_hole, // ?x
    sorry,
    prop,
    type,
    app,
    lambda,
    pi,
    exists,
    arrow,
    binop,
    neg, // ¬
    ascription,
    explicit_ident, // @f
    proj,           // e.field
    let_term,       // let x : T := v; b   (binders[0] holds x and T)
};

struct syntax;
using syntax_ptr = std::shared_ptr<syntax const>;

struct binder_stx {
    std::string name;
    syntax_ptr type; // null when omitted
    bool implicit = false;
};

struct syntax {
    stx_kind kind;
    std::string text; // identifier, operator, field or hole name
    nat num;
    std::vector<syntax_ptr> args;
    std::vector<binder_stx> binders;
    std::size_t begin = 0, end = 0;
};

/** \brief Recursive-descent parser over a token range `[pos, end)`. */
class parser {
    std::vector<token> const &m_toks;
    std::size_t m_pos;
    std::size_t m_end;
    token m_eof;

    syntax_ptr parse_prefix();
    syntax_ptr parse_primary();
    syntax_ptr parse_binder_term(stx_kind k, std::size_t begin);
    std::vector<binder_stx> parse_binders(bool allow_bare_type);
    bool starts_arg() const;

public:
    parser(std::vector<token> const &toks, std::size_t pos, std::size_t end);

    token const &peek(std::size_t k = 0) const;
    bool at_end() const { return m_pos >= m_end || m_toks[m_pos].kind == tok::eof; }
    bool is_symbol(std::string_view s, std::size_t k = 0) const;
    bool is_keyword(std::string_view s, std::size_t k = 0) const;
    token const &next();
    token const &expect_symbol(std::string_view s);
    token const &expect_keyword(std::string_view s);
    std::string expect_ident();
    std::size_t pos() const { return m_pos; }
    void set_pos(std::size_t p) { m_pos = p; }
    std::size_t end() const { return m_end; }
    [[noreturn]] void error(std::string const &expected) const;

    syntax_ptr parse_term(unsigned min_prec = 0);
    /** \brief Parse `( x y : T ) { z : U } ...` binders as used after theorem names. */
    std::vector<binder_stx> parse_decl_binders();
};

/** \brief Parse a complete term; trailing tokens are an error. */
syntax_ptr parse_term_string(std::string_view src);

bool is_keyword_text(std::string_view s);

} // namespace metatac::frontend
