#include <iostream>

#include "CLI11.hpp"

#include "fpp/cli.hpp"

namespace fpp {

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"lattice max-flow experiments"};
    std::string config_path, out_override;
    std::uint64_t seed_override = 0;
    int workers_override = 1;
    auto* config_opt = app.add_option("--config", config_path, "run configuration (JSON)");
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
    auto* workers_opt =
        app.add_option("--workers", workers_override, "override the config worker count");
    auto* out_opt = app.add_option("--out", out_override, "override the output directory");
    std::string sub_kind;
    for (const std::string kind : {"flow-sample", "estimate-nu", "phi-tilde", "cutset-verify",
                                   "ldp-rate", "sum-tail"}) {
        CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
        sub->fallthrough();
        sub->callback([&sub_kind, kind] { sub_kind = kind; });
    }
    app.require_subcommand(0, 1);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (config_opt->count() == 0) {
        std::cerr << "error: --config is required\n";
        return 2;
    }
    try {
        RunConfig config = RunConfig::load(config_path);
        if (!sub_kind.empty()) config.kind = sub_kind;
        if (seed_opt->count()) config.seed = seed_override;
        if (workers_opt->count()) config.workers = workers_override;
        if (out_opt->count()) config.out_dir = out_override;
        RunArtifact artifact = run(config);
        std::string dir = write_run(config, artifact);
        std::cout << "run written to " << dir << '\n';
        for (const std::string& v : artifact.verdicts) std::cout << v << '\n';
        return 0;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace fpp
