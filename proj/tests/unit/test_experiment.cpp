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

#include "oamlink/errors.hpp"
#include "oamlink/experiment.hpp"
#include "oamlink/keyvalue.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oam;
using Catch::Matchers::ContainsSubstring;

namespace
{
    const std::string base = "name = t\noutput = t\nscenario = nmse\nseed = 3\ntrials = 6\n"
                             "elements = 9\nk0 = 47\ndk = 1\nsubcarriers = 8\nradius_lambda = 15\n"
                             "distance = 40\nazimuth_deg = 7\nelevation_deg = 7\n"
                             "training_mode_count = 8\ntraining_subcarriers = 8\n"
                             "alpha_min_deg = 2\nalpha_max_deg = 8\nsnr_db = 10, 20\n";

    ExperimentSpec parse(const std::string &text) { return parse_experiment(KeyValueSpec::parse(text, "mem")); }

    std::string slurp(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
}

TEST_CASE("key-value parsing", "[config]")
{
    const auto kv = KeyValueSpec::parse("# header\na = 1   # trailing\n\nb = 0:5:20\nc = 1; -2, 2 ;3\nd = true\n", "x.spec");
    CHECK(kv.integer("a") == 1);
    CHECK(kv.line("b") == 4);
    CHECK(kv.list("b") == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(kv.groups("c") == std::vector<std::vector<long>>{{1}, {-2, 2}, {3}});
    CHECK(kv.flag("d", false));
    CHECK(kv.unused().empty());
    CHECK_THROWS_WITH(kv.num("missing"), ContainsSubstring("field 'missing': missing"));

    CHECK_THROWS_WITH(KeyValueSpec::parse("a = 1\nb\n", "y.spec"), ContainsSubstring("y.spec:2"));
    CHECK_THROWS_WITH(KeyValueSpec::parse("a = 1\na = 2\n", "y.spec"), ContainsSubstring("first on line 1"));
    const auto bad = KeyValueSpec::parse("a = 1\nr = 0:0:4\nx = abc\n", "z.spec");
    CHECK_THROWS_WITH(bad.list("r"), ContainsSubstring("z.spec:2: field 'r'"));
    CHECK_THROWS_WITH(bad.num("x"), ContainsSubstring("z.spec:3: field 'x': not a number"));
}

TEST_CASE("experiment validation", "[config]")
{
    CHECK_NOTHROW(parse(base));
    CHECK_THROWS_WITH(parse(base + "bogus = 1\n"), ContainsSubstring("'bogus'"));
    CHECK_THROWS_WITH(parse(base + "qam_order = 16\n"), ContainsSubstring("'qam_order'"));

    std::string s = base;
    s.replace(s.find("radius_lambda = 15"), 18, "radius_lambda = -1");
    CHECK_THROWS_AS(parse(s), config_error);

    s = base;
    s.replace(s.find("training_mode_count = 8"), 23, "training_mode_count = 10");
    CHECK_THROWS_WITH(parse(s), ContainsSubstring("training_mode"));

    s = base;
    s.replace(s.find("training_mode_count = 8"), 23, "training_modes = -5, -4, -3");
    CHECK_THROWS_WITH(parse(s), ContainsSubstring("|l| < N/2"));

    s = base;
    s.replace(s.find("alpha_max_deg = 8"), 17, "alpha_max_deg = 1");
    CHECK_THROWS_WITH(parse(s), ContainsSubstring("mem:17: field 'alpha_max_deg'"));

    s = base + "prior_half_width = 4\n";
    CHECK_THROWS_WITH(parse(s), ContainsSubstring("unambiguous range"));
}

TEST_CASE("bundled specs validate", "[config]")
{
    int n = 0;
    for (const auto &e : std::filesystem::directory_iterator(std::string(OAMLINK_SOURCE_DIR) + "/specs"))
    {
        INFO(e.path().string());
        CHECK_NOTHROW(load_experiment(e.path().string()));
        ++n;
    }
    CHECK(n >= 10);
    const auto d = describe_experiment(load_experiment(std::string(OAMLINK_SOURCE_DIR) + "/specs/sec7_default.spec"));
    bool tilt = false;
    for (const auto &l : d)
        tilt = tilt || l.find("tilt_angle_deg = 9.8871492") == 0;
    CHECK(tilt);
}

TEST_CASE("runs are reproducible and independent of the worker count", "[config][run]")
{
    const ExperimentSpec spec = parse(base);
    const auto dir = std::filesystem::temp_directory_path() / "oamlink_rerun";
    std::filesystem::remove_all(dir);
    RunOptions o;
    o.out_dir = (dir / "a").string();
    const auto fa = run_experiment(spec, o);
    o.out_dir = (dir / "b").string();
    o.workers = 3;
    const auto fb = run_experiment(spec, o);
    REQUIRE(fa.size() == 1);
    REQUIRE(fb.size() == 1);
    const std::string a = slurp(fa[0]);
    CHECK(a == slurp(fb[0]));
    CHECK(a.find("snr_db,parameter,nmse") == 0);

    o.seed = 4;
    o.out_dir = (dir / "c").string();
    CHECK(slurp(run_experiment(spec, o)[0]) != a);
    std::filesystem::remove_all(dir);
}
