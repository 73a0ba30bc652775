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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"oamsim: line-of-sight multi-mode OAM link simulator"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    unsigned workers = 1;
    std::string out_dir = "out";
    auto *seed_opt = app.add_option("--seed", seed, "master seed (overrides the spec)");
    app.add_option("--workers", workers, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", out_dir, "output directory");

    std::string spec_path;
    auto *run = app.add_subcommand("run", "execute a spec and write CSV / raster outputs");
    run->add_option("spec", spec_path, "spec file")->required();
    run->fallthrough();
    auto *validate = app.add_subcommand("validate", "check a spec and print derived quantities");
    validate->add_option("spec", spec_path, "spec file")->required();
    validate->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try
    {
        const oam::ExperimentSpec spec = oam::load_experiment(spec_path);
        if (validate->parsed())
        {
            std::cout << spec_path << ": valid\n";
            for (const auto &line : oam::describe_experiment(spec))
                std::cout << "  " << line << "\n";
            return 0;
        }
        oam::RunOptions opt;
        if (*seed_opt)
            opt.seed = seed;
        opt.workers = workers;
        opt.out_dir = out_dir;
        opt.log = &std::cout;
        for (const auto &f : oam::run_experiment(spec, opt))
            std::cout << "wrote " << f << "\n";
        return 0;
    }
    catch (const oam::config_error &e)
    {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return 2;
    }
    catch (const oam::estimation_error &e)
    {
        std::cerr << "estimation failed " << e.what() << "\n";
        return 3;
    }
    catch (const oam::conditioning_error &e)
    {
        std::cerr << "[detection] " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
