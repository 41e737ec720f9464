// Command-line front end for the quantum population-transfer toolkit.
//
// Subcommands:
//   evolve --config <file> --out <dir>      simulate one network trajectory
//   sweep --config <file> --out <dir>       exhaustive parameter scan
//   asymptote --theta <rad> [--omega <w>] [--periods <n>]
//             [--samples-per-period <m>] --out <dir>
//                                           long-run running averages
//   oracle-check [--seed <s>] [--draws <n>] randomized closed-form checks
//   reproduce --table <1|2|3|4> [--threads <n>] --out <dir>
//                                           recompute a bundled reference table
//
// Exit codes: 0 success, 1 invalid input, 2 failed numeric check, 3 I/O error.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpt/config.hpp"
#include "qpt/errors.hpp"
#include "qpt/runner.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qpt::IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw qpt::IoError("cannot read config file " + path);
    return buf.str();
}

int run_from_config(qpt::Command command, const std::string& config_path,
                    const std::string& out_dir) {
    const qpt::RunConfig cfg = qpt::parse_config(read_text_file(config_path), command);
    return qpt::run(cfg, out_dir, std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population transfer and coherence toolkit for tight-binding networks"};
    app.require_subcommand(1);

    std::string config_path, out_dir;

    CLI::App* evolve = app.add_subcommand("evolve", "Simulate one network trajectory");
    evolve->add_option("--config", config_path, "JSON configuration file")->required();
    evolve->add_option("--out", out_dir, "Output directory")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Exhaustive parameter scan");
    sweep->add_option("--config", config_path, "JSON configuration file")->required();
    sweep->add_option("--out", out_dir, "Output directory")->required();

    qpt::AsymptoteConfig asym;
    CLI::App* asymptote =
        app.add_subcommand("asymptote", "Long-run running averages for a two-site network");
    asymptote->add_option("--theta", asym.theta, "Mixing angle in radians, [0, pi]")->required();
    asymptote->add_option("--omega", asym.omega, "Level splitting in rad/s (default 1)");
    asymptote->add_option("--periods", asym.periods, "Number of transfer periods (default 1)");
    asymptote->add_option("--samples-per-period", asym.samples_per_period,
                          "Quadrature samples per period (default 1000)");
    asymptote->add_option("--out", out_dir, "Output directory")->required();

    qpt::OracleCheckConfig oracle;
    CLI::App* oracle_check =
        app.add_subcommand("oracle-check", "Randomized closed-form cross-checks");
    oracle_check->add_option("--seed", oracle.seed, "RNG seed (default 12345)");
    oracle_check->add_option("--draws", oracle.draws, "Draws per check block (default 100)");

    qpt::ReproduceConfig repro;
    CLI::App* reproduce = app.add_subcommand("reproduce", "Recompute a bundled reference table");
    reproduce->add_option("--table", repro.table_id, "Table id, 1..4")->required();
    reproduce->add_option("--threads", repro.threads, "Worker threads (default: hardware)");
    reproduce->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? qpt::exit_ok : qpt::exit_invalid;
    }

    try {
        if (evolve->parsed()) return run_from_config(qpt::Command::evolve, config_path, out_dir);
        if (sweep->parsed()) return run_from_config(qpt::Command::sweep, config_path, out_dir);
        if (asymptote->parsed()) return qpt::run_asymptote(asym, out_dir, std::cout);
        if (oracle_check->parsed()) {
            if (oracle.draws < 1) throw qpt::ValidationError("oracle-check: draws must be >= 1");
            return qpt::run_oracle_check(oracle, std::cout);
        }
        if (reproduce->parsed()) {
            if (repro.table_id < 1 || repro.table_id > 4)
                throw qpt::ValidationError("reproduce: table must be 1..4");
            return qpt::run_reproduce(repro, out_dir, std::cout);
        }
    } catch (const qpt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qpt::exit_io;
    } catch (const qpt::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qpt::exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qpt::exit_invalid;
    }
    return qpt::exit_invalid;
}
