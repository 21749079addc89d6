/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/frontend/sexp.h"
#include <cctype>
#include "metatac/kernel/error.h"

namespace metatac::frontend {
namespace {

bool plain_atom(std::string const &s) {
    if (s.empty())
        return false;
    for (unsigned char c : s)
        if (std::isspace(c) || c == '(' || c == ')' || c == '"' || c == '\\')
            return false;
    return true;
}

void put_name(std::string &out, std::string const &s) {
    if (plain_atom(s)) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
}

void print(std::string &out, term const &t) {
    switch (t.kind()) {
    case term_kind::sort: out += t.sort() == sort_level::prop ? "(sort prop)" : "(sort type)"; return;
    case term_kind::constant:
        out += "(const ";
        put_name(out, t.const_name());
        out += ')';
        return;
    case term_kind::bvar: out += "(fvar " + std::to_string(t.bvar_idx()) + ")"; return;
    case term_kind::fvar: out += "(fvar _uniq." + std::to_string(t.fvar().idx) + ")"; return;
    case term_kind::mvar: out += "(mvar " + std::to_string(t.mvar().idx) + ")"; return;
    case term_kind::app:
        out += "(app ";
        print(out, t.app_fn());
        out += ' ';
        print(out, t.app_arg());
        out += ')';
        return;
    case term_kind::lambda:
    case term_kind::pi:
        out += t.is_lambda() ? "(lam " : "(pi ";
        put_name(out, t.binder_name());
        out += ' ';
        print(out, t.binder_type());
        out += ' ';
        print(out, t.binder_body());
        out += ')';
        return;
    case term_kind::let:
        out += "(let ";
        put_name(out, t.let_name());
        out += ' ';
        print(out, t.let_type());
        out += ' ';
        print(out, t.let_value());
        out += ' ';
        print(out, t.let_body());
        out += ')';
        return;
    case term_kind::lit: out += "(lit " + t.lit_value().str() + ")"; return;
    }
}

class reader {
    std::string_view m_src;
    std::size_t m_pos = 0;

    [[noreturn]] void fail(std::string const &msg) const {
        throw exception(error_kind::parse_error, "sexp: " + msg + " at offset " + std::to_string(m_pos));
    }
    void skip_ws() {
        while (m_pos < m_src.size() && std::isspace(static_cast<unsigned char>(m_src[m_pos])))
            ++m_pos;
    }
    void expect(char c) {
        skip_ws();
        if (m_pos >= m_src.size() || m_src[m_pos] != c)
            fail(std::string("expected '") + c + "'");
        ++m_pos;
    }
    std::string atom() {
        skip_ws();
        if (m_pos >= m_src.size())
            fail("unexpected end");
        std::string r;
        if (m_src[m_pos] == '"') {
            ++m_pos;
            while (m_pos < m_src.size() && m_src[m_pos] != '"') {
                if (m_src[m_pos] == '\\' && m_pos + 1 < m_src.size())
                    ++m_pos;
                r += m_src[m_pos++];
            }
            if (m_pos >= m_src.size())
                fail("unterminated string");
            ++m_pos;
            return r;
        }
        while (m_pos < m_src.size()) {
            char c = m_src[m_pos];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
                break;
            r += c;
            ++m_pos;
        }
        if (r.empty())
            fail("expected atom");
        return r;
    }
    static bool digits(std::string const &s) {
        if (s.empty())
            return false;
        for (unsigned char c : s)
            if (!std::isdigit(c))
                return false;
        return true;
    }
    std::uint64_t number(std::string const &s) {
        if (!digits(s) || s.size() > 19)
            fail("expected number, got '" + s + "'");
        return std::stoull(s);
    }

public:
    explicit reader(std::string_view s) : m_src(s) {}

    term read() {
        expect('(');
        std::string head = atom();
        term r;
        if (head == "sort") {
            std::string l = atom();
            if (l == "prop")
                r = mk_prop();
            else if (l == "type")
                r = mk_type();
            else
                fail("bad sort '" + l + "'");
        } else if (head == "const") {
            r = mk_const(atom());
        } else if (head == "fvar") {
            std::string a = atom();
            if (a.rfind("_uniq.", 0) == 0)
                r = mk_fvar(fvar_id{number(a.substr(6))});
            else
                r = mk_bvar(static_cast<unsigned>(number(a)));
        } else if (head == "mvar") {
            r = mk_mvar(mvar_id{number(atom())});
        } else if (head == "app") {
            term f = read();
            r = mk_app(f, read());
        } else if (head == "lam" || head == "pi") {
            std::string n = atom();
            term ty = read();
            term body = read();
            r = head == "lam" ? mk_lambda(n, ty, body) : mk_pi(n, ty, body);
        } else if (head == "let") {
            std::string n = atom();
            term ty = read();
            term v = read();
            r = mk_let(n, ty, v, read());
        } else if (head == "lit") {
            std::string a = atom();
            if (!digits(a))
                fail("expected numeral");
            r = mk_lit(nat(a));
        } else {
            fail("unknown head '" + head + "'");
        }
        expect(')');
        return r;
    }

    void finish() {
        skip_ws();
        if (m_pos != m_src.size())
            fail("trailing input");
    }
};

} // namespace

std::string sexp_print(term const &t) {
    std::string out;
    print(out, t);
    return out;
}

term sexp_parse(std::string_view src) {
    reader r(src);
    term t = r.read();
    r.finish();
    return t;
}

} // namespace metatac::frontend
