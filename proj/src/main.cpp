/* pi-forge: certified digits of pi from two independent algorithm families,
 * cross-checkable by spigot extraction.  Every emitted digit is backed by a
 * machine-checked error budget; when the budget cannot exclude a digit flip
 * the tool reports "ambiguous" instead of guessing. */

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pi_forge/checkpoint.hpp"
#include "pi_forge/runner.hpp"

namespace {

pi_forge::Algorithm parse_algo(const std::string& name) {
    if (name == "borwein")
        return pi_forge::Algorithm::borwein;
    if (name == "salamin")
        return pi_forge::Algorithm::salamin;
    throw pi_forge::ConfigError("unknown algorithm: " + name);
}

} // namespace

int main(int argc, char** argv) {
    using pi_forge::RunConfig;

    CLI::App app{"pi-forge: pi digits with machine-verifiable error budgets"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string algo_name = "borwein";

    CLI::App* agm = app.add_subcommand(
        "agm", "Compute N digits of pi and certify them against the "
               "run's error budget");
    agm->add_option("--digits", cfg.digits,
                    "Digits after the decimal point (N >= 1)")
        ->required();
    agm->add_option("--base", cfg.base, "Output base: 10 or 16")
        ->default_val(10);
    agm->add_option("--algo", algo_name,
                    "Algorithm: borwein (product) or salamin (AGM sum)")
        ->check(CLI::IsMember({"borwein", "salamin"}))
        ->default_val("borwein");
    agm->add_option("--guard", cfg.guard_digits,
                    "Guard digits beyond N (0 = auto-size from the budget)");
    agm->add_option("--threads", cfg.threads,
                    "Worker threads (0 = PI_FORGE_THREADS or hardware)");
    agm->add_option("--out", cfg.out_path,
                    "Digit file path (default: stdout)");
    agm->add_option("--report", cfg.report_path, "JSON report path");
    agm->add_option("--checkpoint", cfg.checkpoint_path,
                    "Checkpoint file; resumed from when present");
    agm->add_option("--stop-after-steps", cfg.stop_after_steps,
                    "Stop after this many iteration steps (exit 10)");

    CLI::App* bbp = app.add_subcommand(
        "bbp", "Extract a single hexadecimal digit of pi by spigot");
    bbp->add_option("--position", cfg.position,
                    "1-based hex position after the point")
        ->required();
    bbp->add_option("--precision-bits", cfg.precision_bits,
                    "Working precision (0 = auto with escalation)");
    bbp->add_option("--threads", cfg.threads,
                    "Worker threads (0 = PI_FORGE_THREADS or hardware)");
    bbp->add_option("--out", cfg.out_path,
                    "Digit file path (default: stdout)");
    bbp->add_option("--report", cfg.report_path, "JSON report path");

    CLI::App* crosscheck = app.add_subcommand(
        "crosscheck",
        "Spot-check a hex digit file against the spigot extractor");
    crosscheck
        ->add_option("--digits-file", cfg.digit_file,
                     "Digit file from `agm --base 16`")
        ->required();
    crosscheck
        ->add_option("--positions", cfg.positions,
                     "Explicit 1-based positions to check")
        ->delimiter(',');
    crosscheck->add_option("--random", cfg.random_positions,
                           "Number of random positions to add");
    crosscheck->add_option("--seed", cfg.seed,
                           "Seed for random positions (default 1)");
    crosscheck->add_option("--threads", cfg.threads,
                           "Worker threads (0 = PI_FORGE_THREADS or "
                           "hardware)");
    crosscheck->add_option("--report", cfg.report_path, "JSON report path");

    CLI::App* selftest = app.add_subcommand(
        "selftest", "Run the built-in anchor checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        /* --help and --version exit 0; every parse problem is a plain usage
         * error for scripting purposes. */
        return code == 0 ? 0 : pi_forge::kExitConfig;
    }

    try {
        if (app.got_subcommand(agm)) {
            cfg.algorithm = parse_algo(algo_name);
            return pi_forge::cmd_agm(cfg);
        }
        if (app.got_subcommand(bbp))
            return pi_forge::cmd_bbp(cfg);
        if (app.got_subcommand(crosscheck))
            return pi_forge::cmd_crosscheck(cfg);
        if (app.got_subcommand(selftest))
            return pi_forge::cmd_selftest(cfg);
    } catch (const pi_forge::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    } catch (const pi_forge::CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    } catch (const pi_forge::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    } catch (const pi_forge::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    } catch (const pi_forge::MagnifierMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pi_forge::kExitConfig;
    }
    return pi_forge::kExitConfig;
}
