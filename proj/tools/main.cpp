/**************************************************************************
 * main.cpp
 *
 * Copyright 2026 The muxstream Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muxstream/commands.hpp"

namespace cli = muxstream::cli;

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Multiplexed burst-erasure streaming codes"};
    app.require_subcommand(1);

    cli::DesignOptions design;
    auto* d = app.add_subcommand("design", "Construct a code descriptor");
    d->add_option("--tv", design.tv, "Delay of the less-urgent stream")->required();
    d->add_option("--tu", design.tu, "Delay of the urgent stream")->required();
    d->add_option("--b", design.b, "Burst length")->required();
    d->add_option("--field", design.field, "ORDER:POLY (default 256:0x11D)");
    d->add_option("--target-rv", design.target_rv, "Target Rv as P/Q");
    d->add_option("--target-ru", design.target_ru, "Target Ru as P/Q");

    cli::VerifyOptions verify;
    auto* v = app.add_subcommand("verify", "Sweep every burst start against the decoding deadlines");
    v->add_option("--code", verify.code, "Descriptor path")->required();
    v->add_option("--burst", verify.burst, "Burst length")->required();
    v->add_option("--horizon", verify.horizon, "Last burst start (default 2n + Tv)");

    cli::RegionOptions region;
    auto* r = app.add_subcommand("region", "Export the capacity region");
    r->add_option("--tv", region.tv)->required();
    r->add_option("--tu", region.tu)->required();
    r->add_option("--b", region.b)->required();
    r->add_option("--format", region.format, "json or csv")->required();

    cli::SimulateOptions sim;
    auto* s = app.add_subcommand("simulate", "Run encoder, channel and decoder");
    s->add_option("--code", sim.code, "Descriptor path")->required();
    s->add_option("--pattern", sim.pattern, "burst:S,L | periodic:D,TU,B | trace:PATH | ge:P,Q,SEED")->required();
    s->add_option("--slots", sim.slots)->required();
    s->add_option("--seed", sim.seed, "Message seed")->required();

    std::string encode_code;
    auto* e = app.add_subcommand("encode", "Source lines on stdin to packet lines on stdout");
    e->add_option("--code", encode_code, "Descriptor path")->required();

    std::string decode_code;
    auto* x = app.add_subcommand("decode", "Packet lines on stdin to estimates on stdout");
    x->add_option("--code", decode_code, "Descriptor path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return cli::kExitUsage;
    }

    if (*d) {
        return cli::cmd_design(design, std::cout, std::cerr);
    }
    if (*v) {
        return cli::cmd_verify(verify, args, std::cout, std::cerr);
    }
    if (*r) {
        return cli::cmd_region(region, std::cout, std::cerr);
    }
    if (*s) {
        return cli::cmd_simulate(sim, args, std::cout, std::cerr);
    }
    if (*e) {
        return cli::cmd_encode(encode_code, std::cin, std::cout, std::cerr);
    }
    return cli::cmd_decode(decode_code, std::cin, std::cout, std::cerr);
}
