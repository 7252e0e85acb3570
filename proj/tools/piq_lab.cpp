#include "piqlab/cli/cli.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace piqlab;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cli::ConfigError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int jobs_from_env()
{
    const char* v = std::getenv("PIQ_LAB_JOBS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    long k = std::strtol(v, &end, 10);
    if (*end != '\0' || k < 1) throw cli::ConfigError("PIQ_LAB_JOBS must be a positive integer");
    return static_cast<int>(k);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Experiments on preimages of invariant subschemes under commuting self-maps"};
    std::string command, config_path, out_path;
    int jobs = 0;
    std::uint64_t seed = 0;
    bool timing = false;
    app.add_option("command", command, "Subcommand; defaults to the config's command")
        ->check(CLI::IsMember(cli::commands()));
    app.add_option("--config", config_path, "Experiment configuration (JSON)")->required();
    auto* out_opt = app.add_option("--out", out_path, "Report path; stdout when absent");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads (falls back to PIQ_LAB_JOBS)")
                         ->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized inputs; recorded in the report");
    app.add_flag("--timing", timing, "Record wall_clock_seconds in the report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        cli::ExperimentConfig config = cli::parse_config(read_file(config_path));
        if (!command.empty() && command != config.command) {
            throw cli::ConfigError("command: the command line says " + command + " but the config says " +
                                   config.command);
        }
        if (*seed_opt) config.seed = seed;
        cli::RunOptions opts;
        opts.jobs = *jobs_opt ? jobs : jobs_from_env();
        opts.timing = timing;
        std::string text = cli::run(config, opts).dump(2) + "\n";
        std::string target = *out_opt ? out_path : config.output.value_or("");
        if (target.empty()) {
            std::cout << text;
        } else {
            cli::write_atomically(target, text);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "piq-lab: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
}
