/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include "metatac/kernel/environment.h"
#include <algorithm>
#include "metatac/kernel/error.h"

namespace metatac {

char const *to_string(decl_kind k) {
    switch (k) {
    case decl_kind::axiom: return "axiom";
    case decl_kind::definition: return "definition";
    case decl_kind::theorem: return "theorem";
    case decl_kind::builtin: return "builtin";
    }
    return "?";
}

unsigned declaration::num_implicit_prefix() const {
    unsigned n = 0;
    while (n < implicit_args.size() && implicit_args[n])
        ++n;
    return n;
}

environment::environment() : m_data(std::make_shared<data const>()) {}

declaration const *environment::find(std::string const &name) const {
    auto it = m_data->decls.find(name);
    return it == m_data->decls.end() ? nullptr : &it->second;
}

std::optional<std::size_t> environment::position(std::string const &name) const {
    auto const &o = m_data->order;
    auto it = std::find(o.begin(), o.end(), name);
    if (it == o.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - o.begin());
}

environment environment::add_unchecked(declaration d) const {
    if (contains(d.name))
        throw exception(error_kind::duplicate_name, "'" + d.name + "' has already been declared");
    auto nd = std::make_shared<data>(*m_data);
    nd->order.push_back(d.name);
    std::string n = d.name;
    nd->decls.emplace(std::move(n), std::move(d));
    environment r;
    r.m_data = std::move(nd);
    return r;
}

} // namespace metatac
