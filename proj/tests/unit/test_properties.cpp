/*
Copyright (c) 2026 The metatac authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#include <doctest.h>
#include "support/helpers.h"
#include "support/suites.h"

using namespace metatac;
using metatac::test::env0;

TEST_CASE("property: printing round-trips") {
    auto o = suites::round_trips(env0(), 1000, 1);
    INFO(o.first_failure);
    CHECK(o.passed == 1000);
}

TEST_CASE("property: generated goals are solved soundly") {
    auto o = suites::soundness(env0(), 1000, 2);
    INFO(o.first_failure);
    CHECK(o.passed == 1000);
}

TEST_CASE("property: automatic and manual mode agree") {
    auto o = suites::mode_equivalence(env0(), 50, 3);
    INFO(o.first_failure);
    CHECK(o.passed == 50);
}

TEST_CASE("property: coupling groups are connected components") {
    auto o = suites::coupling(env0(), 200, 4);
    INFO(o.first_failure);
    CHECK(o.all());
}
