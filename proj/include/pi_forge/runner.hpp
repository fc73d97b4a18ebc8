#ifndef PI_FORGE_RUNNER_HPP
#define PI_FORGE_RUNNER_HPP

/* Command orchestration: iteration planning, magnifier sizing, checkpointed
 * execution, certification, digit/report files, exit codes. */

#include <cstdint>
#include <string>
#include <vector>

#include "pi_forge/digits.hpp"

namespace pi_forge {

struct RunConfig {
    /* agm */
    std::uint64_t digits = 0;
    unsigned base = 10;
    Algorithm algorithm = Algorithm::borwein;
    unsigned guard_digits = 0; /* 0 = auto */
    std::string checkpoint_path;
    std::uint64_t stop_after_steps = 0; /* testing hook; 0 = run to the end */
    /* bbp */
    std::uint64_t position = 0;
    unsigned precision_bits = 0; /* 0 = auto + escalation */
    /* crosscheck */
    std::string digit_file;
    std::vector<std::uint64_t> positions;
    std::uint64_t random_positions = 0;
    std::uint64_t seed = 1;
    /* common */
    unsigned threads = 0; /* 0 = PI_FORGE_THREADS env, then hardware */
    std::string out_path;
    std::string report_path;
};

/* Exit codes: configuration/usage/IO errors are 1; an honest "cannot
 * certify" (ambiguous window, spigot agreement failure) is 2; a cross-check
 * digit mismatch is 3; a deliberate early stop via stop_after_steps is 10. */
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAmbiguous = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitCheckpointStop = 10;

unsigned resolve_threads(unsigned flag);

/* One in-process digit run: plan iterations, guard digits and magnifier
 * exactly as the CLI does, compute with the chosen algorithm, certify.  No
 * files and no checkpointing -- the library entry point for embedders. */
DigitReport compute_digits(std::uint64_t digits, unsigned base,
                           Algorithm algorithm, unsigned guard_digits = 0);

int cmd_agm(const RunConfig& cfg);
int cmd_bbp(const RunConfig& cfg);
int cmd_crosscheck(const RunConfig& cfg);
int cmd_selftest(const RunConfig& cfg);

} // namespace pi_forge

#endif
