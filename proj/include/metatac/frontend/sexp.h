/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once
#include <string>
#include <string_view>
#include "metatac/kernel/term.h"

namespace metatac::frontend {

inline constexpr char const *sexp_version = "sexp-v1";

/**
   \brief Canonical S-expression. Bound variables print positionally as `(fvar <idx>)`,
   free ones as `(fvar _uniq.<id>)`. Names that are not plain atoms are double-quoted. */
std::string sexp_print(term const &t);

/** \brief Inverse of `sexp_print`. Throws ParseError. */
term sexp_parse(std::string_view src);

} // namespace metatac::frontend
