#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fracdiff/cli.hpp"
#include "fracdiff/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fractional and distributed-order diffusion on boxes"};
    std::string command;
    std::vector<std::string> overrides;
    std::string config_path, out_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    app.add_option("command", command, "ml | sample | eigen | solve | mc | validate")
        ->required()
        ->check(CLI::IsMember(fracdiff::kCommands));
    app.add_option("overrides", overrides, "key=value settings applied after the config file");
    app.add_option("--config", config_path, "flat key = value file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "64-bit Monte-Carlo seed");
    app.add_option("--out", out_path, "CSV destination (stdout if omitted)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    CLI11_PARSE(app, argc, argv);

    try {
        fracdiff::RunConfig cfg = config_path.empty() ? fracdiff::RunConfig{} : fracdiff::load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw fracdiff::ConfigError("override '" + kv + "' is not key=value");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.command = command;
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (!out_path.empty()) cfg.out = out_path;

        const auto result = fracdiff::run_command(cfg);
        if (cfg.out) {
            std::ofstream f(*cfg.out, std::ios::binary);
            if (!f) throw fracdiff::ConfigError("cannot write '" + *cfg.out + "'");
            f << result.csv;
        } else {
            std::fwrite(result.csv.data(), 1, result.csv.size(), stdout);
        }
        return result.ok ? 0 : 1;
    } catch (const fracdiff::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
