#include <CLI11.hpp>
#include <iostream>

#include "hopf/explorer.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Explore moduli of rank-2 bundles on a classical Hopf surface"};
    app.require_subcommand(1, 1);
    std::string config;
    std::uint64_t seed = 0;
    std::string out = ".";
    const char* descriptions[][2] = {
        {"analyze", "stratum, spectral curve, regularity and fibre types of a divisor"},
        {"connect", "certified path between two regular points"},
        {"sample", "stratum census or closure-limit family"},
        {"periods", "period matrix of a regular divisor's spectral curve"},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seeds;
    for (const auto& [name, text] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, text);
        sub->add_option("--config", config, "run configuration (JSON)")->required();
        seeds.push_back(sub->add_option("--seed", seed, "overrides the configuration seed"));
        sub->add_option("--out", out, "directory that receives runs/<timestamp>-<command>/");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        std::optional<std::uint64_t> s;
        if (seeds[i]->count() > 0) s = seed;
        return hopf::run_tool(subs[i]->get_name(), config, s, out, std::cout, std::cerr);
    }
    return 2;
}
