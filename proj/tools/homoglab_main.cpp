#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "homoglab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"homoglab: cell-formula experiments on random surface energies"};

    std::string config_path;
    homoglab::RunnerOptions opts;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_flag("--no-cache", opts.no_cache, "recompute records, ignore the cache");
    app.add_option("--threads", opts.threads, "worker threads (0 = auto)");
    app.add_flag("--dump-labeling", opts.dump_labeling, "write PGM labelings (d = 2)");
    app.add_option("--out", opts.out_override, "output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    homoglab::Config cfg;
    try {
        cfg = homoglab::parse_config_file(config_path);
    } catch (const homoglab::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (const char* env_seed = std::getenv("HOMOGLAB_SEED")) {
        try {
            cfg.base_seed = std::stoull(env_seed);
        } catch (...) {
            std::cerr << "config error: HOMOGLAB_SEED is not an unsigned integer\n";
            return 2;
        }
    }

    return homoglab::run_experiment(cfg, opts);
}
