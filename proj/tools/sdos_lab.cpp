// Batch driver: reads one experiment config, runs it, emits CSV + manifest.
//
// Exit status: 0 success, 2 config error (unknown/missing key, bad value),
// 3 numerical refusal (box/buffer contract violations), 1 anything else.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sdoslab/runner.hpp"

int main(int argc, char** argv) {
    // Keep the BLAS pool out of the determinism contract.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"sdos_lab: lattice surface-density-of-states laboratory"};
    std::string config_path, out_dir;
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out-dir", out_dir, "output directory (default: config's output_dir)");
    app.add_option("--threads", threads,
                   "worker threads (0 = hardware; env SDOS_THREADS as fallback)");
    app.add_flag("--verbose", verbose, "progress to stderr");
    CLI11_PARSE(app, argc, argv);

    if (threads == 0) {
        if (const char* env = std::getenv("SDOS_THREADS")) threads = std::atoi(env);
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();

    try {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config is not valid JSON: " << e.what() << "\n";
            return 2;
        }
        return sdoslab::run(j, out_dir, threads, verbose);
    } catch (const sdoslab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const sdoslab::RefusalError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
