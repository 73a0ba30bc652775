// SPDX-License-Identifier: Apache-2.0
//
// oamlink: link-level simulator for line-of-sight multi-mode OAM radio links
// Copyright (C) 2026 The oamlink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oamlink/csv.hpp"
#include "oamlink/errors.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace oam;

TEST_CASE("RFC 4180 quoting", "[csv]")
{
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
    CHECK(csv_quote("") == "");
}

TEST_CASE("numbers round-trip exactly", "[csv]")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 40.0})
        CHECK(std::stod(csv_number(v)) == v);
    CHECK(csv_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(csv_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(csv_number(std::nan("")) == "nan");
}

TEST_CASE("table writes CRLF rows and parses back", "[csv]")
{
    CsvTable t({"name", "value"});
    t.add_row({"x,y", "1"});
    t.add_row({"q\"uote", "line\r\nbreak"});
    const std::string s = t.str();
    CHECK(s.substr(0, 12) == "name,value\r\n");
    const auto rows = csv_parse(s);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "x,y");
    CHECK(rows[2][0] == "q\"uote");
    CHECK(rows[2][1] == "line\r\nbreak");
    CHECK_THROWS_AS(t.add_row({"only one"}), argument_error);
}
