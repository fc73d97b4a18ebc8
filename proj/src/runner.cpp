#include "pi_forge/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "pi_forge/bbp.hpp"
#include "pi_forge/borwein.hpp"
#include "pi_forge/checkpoint.hpp"
#include "pi_forge/salamin.hpp"

namespace pi_forge {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot open output file: " + path);
    out << text;
    if (!out)
        throw ConfigError("write failed: " + path);
}

void write_report(const std::string& path, const json& j) {
    if (path.empty())
        return;
    write_text_file(path, j.dump(2) + "\n");
}

const char* algo_name(Algorithm a) {
    return a == Algorithm::borwein ? "borwein" : "salamin";
}

/* Sizing for one AGM-family run.  Iterations are keyed to the full
 * certified scale base^(digits + guard); guard digits are auto-sized from
 * the rounding budget, and the two depend on each other, so iterate to the
 * (monotone, quickly reached) fixed point. */
struct AgmPlan {
    unsigned n_budget = 0; /* iterations_for result */
    unsigned n_run = 0;    /* formula index executed = n_budget + 1 */
    unsigned guard = 0;
    Magnifier m1 = Magnifier::pow2(11);
    std::uint64_t steps_total = 0; /* resumable steps in the run */
};

mpz_class run_rounding_ulps(Algorithm algo, unsigned n_budget) {
    Magnifier probe = Magnifier::pow2(11);
    return algo == Algorithm::borwein
               ? borwein_budget(n_budget + 1, probe).rounding_ulps
               : salamin_budget(n_budget, probe).rounding_ulps;
}

unsigned iterations_for(Algorithm algo, std::uint64_t digits, unsigned base) {
    return algo == Algorithm::borwein
               ? borwein_iterations_for(digits, base)
               : salamin_iterations_for(digits, base);
}

AgmPlan plan_agm(const RunConfig& cfg) {
    if (cfg.digits < 1)
        throw ConfigError("agm: --digits must be >= 1");
    if (cfg.base != 10 && cfg.base != 16)
        throw ConfigError("agm: --base must be 10 or 16");

    AgmPlan plan;
    plan.guard = cfg.guard_digits != 0 ? cfg.guard_digits : 4;
    for (int round = 0;; ++round) {
        plan.n_budget =
            iterations_for(cfg.algorithm, cfg.digits + plan.guard, cfg.base);
        if (cfg.guard_digits != 0)
            break;
        unsigned g2 = guard_digits_for(
            cfg.base, run_rounding_ulps(cfg.algorithm, plan.n_budget) + 1);
        if (g2 <= plan.guard)
            break;
        if (round >= 8)
            throw BudgetError("agm: guard sizing did not converge");
        plan.guard = g2;
    }
    plan.n_run = plan.n_budget + 1;

    /* Working magnifier: a power of two with 8 bits of headroom over the
     * target scale, enlarged if the algorithm's own magnifier window asks
     * for more. */
    mpz_class m2;
    mpz_ui_pow_ui(m2.get_mpz_t(), cfg.base,
                  static_cast<unsigned long>(cfg.digits + plan.guard));
    std::size_t bits = mpz_sizeinbase(m2.get_mpz_t(), 2) + 8;
    if (cfg.algorithm == Algorithm::salamin) {
        mpz_class need;
        mpz_ui_pow_ui(need.get_mpz_t(), 10, plan.n_run + 5);
        mpz_class p3;
        mpz_ui_pow_ui(p3.get_mpz_t(), 3, plan.n_run);
        need *= p3;
        std::size_t nbits = mpz_sizeinbase(need.get_mpz_t(), 2);
        if (nbits > bits)
            bits = nbits;
    } else {
        mpz_class need = 600 * (mpz_class(plan.n_run) + 1);
        std::size_t nbits = mpz_sizeinbase(need.get_mpz_t(), 2);
        if (nbits > bits)
            bits = nbits;
    }
    plan.m1 = Magnifier::pow2(static_cast<unsigned long>(bits));
    plan.steps_total = cfg.algorithm == Algorithm::borwein
                           ? plan.n_run - 1 /* (y,z,prod) updates */
                           : plan.n_run;    /* AGM steps */
    return plan;
}

struct ResumePoint {
    bool resumed = false;
    std::uint64_t steps_done = 0;
};

ResumePoint load_resume(const RunConfig& cfg, const AgmPlan& plan,
                        std::uint8_t algo_tag, CheckpointData& data) {
    ResumePoint rp;
    if (cfg.checkpoint_path.empty())
        return rp;
    auto loaded = read_checkpoint(cfg.checkpoint_path);
    if (!loaded)
        return rp;
    data = std::move(*loaded);
    if (data.algorithm != algo_tag || data.target_n != plan.n_run ||
        data.mantissas.empty() || data.mantissas[0] != plan.m1.value() ||
        data.steps_done > plan.steps_total)
        throw ConfigError("checkpoint does not match this configuration: " +
                          cfg.checkpoint_path);
    rp.resumed = true;
    rp.steps_done = data.steps_done;
    return rp;
}

/* Runs the iteration loop with optional checkpointing and the early-stop
 * testing hook.  Returns the finished value, or nothing when stopped. */
std::optional<FixedReal> run_borwein(const RunConfig& cfg,
                                     const AgmPlan& plan) {
    BorweinState st = borwein_start(plan.m1, plan.n_run);
    CheckpointData data;
    ResumePoint rp = load_resume(cfg, plan, 0, data);
    if (rp.resumed) {
        if (data.mantissas.size() != 5)
            throw ConfigError("checkpoint field count mismatch");
        st.s2 = FixedReal{data.mantissas[1], plan.m1};
        st.y = FixedReal{data.mantissas[2], plan.m1};
        st.z = FixedReal{data.mantissas[3], plan.m1};
        st.prod = FixedReal{data.mantissas[4], plan.m1};
        st.iterations_left =
            static_cast<unsigned>(plan.steps_total - rp.steps_done);
    }
    std::uint64_t steps_done = rp.steps_done;
    while (st.iterations_left > 0) {
        borwein_advance(st);
        ++steps_done;
        if (!cfg.checkpoint_path.empty()) {
            CheckpointData out;
            out.algorithm = 0;
            out.target_n = plan.n_run;
            out.steps_done = steps_done;
            out.mantissas = {plan.m1.value(), st.s2.mantissa, st.y.mantissa,
                             st.z.mantissa, st.prod.mantissa};
            write_checkpoint(cfg.checkpoint_path, out);
        }
        if (cfg.stop_after_steps != 0 && steps_done >= cfg.stop_after_steps &&
            st.iterations_left > 0)
            return std::nullopt;
    }
    return borwein_finish(st);
}

std::optional<FixedReal> run_salamin(const RunConfig& cfg,
                                     const AgmPlan& plan) {
    SalaminState st = salamin_start(plan.m1, plan.n_run);
    CheckpointData data;
    ResumePoint rp = load_resume(cfg, plan, 1, data);
    if (rp.resumed) {
        if (data.mantissas.size() != 5 ||
            data.mantissas[4] != (mpz_class(1) << rp.steps_done))
            throw ConfigError("checkpoint field count mismatch");
        st.pair.a = FixedReal{data.mantissas[1], plan.m1};
        st.pair.b = FixedReal{data.mantissas[2], plan.m1};
        st.sum = data.mantissas[3];
        st.k = rp.steps_done;
    }
    while (st.k < st.target_n) {
        salamin_advance(st);
        if (!cfg.checkpoint_path.empty()) {
            CheckpointData out;
            out.algorithm = 1;
            out.target_n = plan.n_run;
            out.steps_done = st.k;
            out.mantissas = {plan.m1.value(), st.pair.a.mantissa,
                             st.pair.b.mantissa, st.sum,
                             mpz_class(1) << st.k};
            write_checkpoint(cfg.checkpoint_path, out);
        }
        if (cfg.stop_after_steps != 0 && st.k >= cfg.stop_after_steps &&
            st.k < st.target_n)
            return std::nullopt;
    }
    return salamin_finish(st);
}

} // namespace

unsigned resolve_threads(unsigned flag) {
    if (flag > 0)
        return flag;
    if (const char* env = std::getenv("PI_FORGE_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 4096)
            return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

DigitReport compute_digits(std::uint64_t digits, unsigned base,
                           Algorithm algorithm, unsigned guard_digits) {
    RunConfig cfg;
    cfg.digits = digits;
    cfg.base = base;
    cfg.algorithm = algorithm;
    cfg.guard_digits = guard_digits;
    AgmPlan plan = plan_agm(cfg);
    std::optional<FixedReal> value = algorithm == Algorithm::borwein
                                         ? run_borwein(cfg, plan)
                                         : run_salamin(cfg, plan);
    ErrorBudget budget = algorithm == Algorithm::borwein
                             ? borwein_budget(plan.n_run, plan.m1)
                             : salamin_budget(plan.n_budget, plan.m1);
    DigitRequest req;
    req.digits = digits;
    req.base = base;
    req.guard_digits = plan.guard;
    req.algorithm = algorithm;
    return certify_digits(*value, req,
                          budget.rounding_ulps + budget.truncation_ulps);
}

int cmd_agm(const RunConfig& cfg) {
    Clock::time_point t0 = Clock::now();
    AgmPlan plan = plan_agm(cfg);

    auto value = cfg.algorithm == Algorithm::borwein ? run_borwein(cfg, plan)
                                                     : run_salamin(cfg, plan);
    double t_compute = seconds_since(t0);
    if (!value) {
        std::cerr << "agm: stopped after " << cfg.stop_after_steps
                  << " step(s); checkpoint "
                  << (cfg.checkpoint_path.empty() ? "not written"
                                                  : cfg.checkpoint_path)
                  << "\n";
        return kExitCheckpointStop;
    }

    /* The budget of what was just computed: Borwein budgets are keyed by
     * the formula index that ran; the AGM-sum budget by the iteration count
     * it certifies (one less than the formula index). */
    ErrorBudget budget = cfg.algorithm == Algorithm::borwein
                             ? borwein_budget(plan.n_run, plan.m1)
                             : salamin_budget(plan.n_budget, plan.m1);

    Clock::time_point t1 = Clock::now();
    DigitRequest req;
    req.digits = cfg.digits;
    req.base = cfg.base;
    req.guard_digits = plan.guard;
    req.algorithm = cfg.algorithm;
    /* certify adds its own +1 for the rescale floor, so pass rounding plus
     * materialized truncation only. */
    DigitReport report = certify_digits(
        *value, req, budget.rounding_ulps + budget.truncation_ulps);
    double t_certify = seconds_since(t1);

    Clock::time_point t2 = Clock::now();
    bool certified = report.verdict == Verdict::certified;
    if (certified) {
        if (!cfg.out_path.empty())
            write_text_file(cfg.out_path, report.digit_string + "\n");
        else
            std::cout << report.digit_string << "\n";
    } else {
        std::cerr << "agm: verdict ambiguous (guard remainder "
                  << report.guard_remainder.get_str()
                  << ", window bound " << report.window_bound.get_str()
                  << "); rerun with a larger --guard\n";
    }
    double t_write = seconds_since(t2);

    json j;
    j["schema"] = "pi-forge/1";
    j["command"] = "agm";
    j["algorithm"] = algo_name(cfg.algorithm);
    j["digits"] = cfg.digits;
    j["base"] = cfg.base;
    j["n"] = plan.n_run;
    j["n_budget"] = plan.n_budget;
    j["magnifier_bits"] = plan.m1.bit_length();
    j["rounding_ulps"] = budget.rounding_ulps.get_str();
    j["truncation_exp10"] = budget.truncation.exp10_upper();
    j["guard_digits"] = report.guard_digits;
    j["window_bound"] = report.window_bound.get_str();
    j["guard_remainder"] = report.guard_remainder.get_str();
    j["verdict"] = certified ? "certified" : "ambiguous";
    j["threads"] = resolve_threads(cfg.threads);
    j["digit_file"] = certified ? cfg.out_path : "";
    j["timings"] = {{"compute_s", t_compute},
                    {"certify_s", t_certify},
                    {"write_s", t_write},
                    {"total_s", seconds_since(t0)}};
    write_report(cfg.report_path, j);

    std::cerr << "agm: " << algo_name(cfg.algorithm) << " n=" << plan.n_run
              << " magnifier=2^" << (plan.m1.bit_length() - 1)
              << " guard=" << report.guard_digits << " verdict="
              << (certified ? "certified" : "ambiguous") << " ("
              << seconds_since(t0) << " s)\n";
    return certified ? kExitOk : kExitAmbiguous;
}

int cmd_bbp(const RunConfig& cfg) {
    Clock::time_point t0 = Clock::now();
    if (cfg.position < 1)
        throw ConfigError("bbp: --position must be >= 1");
    if (cfg.precision_bits > kMaxPrecisionBits)
        throw ConfigError("bbp: --precision-bits exceeds the uint64 kernel "
                          "cap of 60");
    unsigned threads = resolve_threads(cfg.threads);

    std::optional<unsigned> digit;
    unsigned p_used = 0;
    if (cfg.precision_bits != 0) {
        p_used = cfg.precision_bits;
        digit = pi_hex_digit(BbpParams{cfg.position, p_used}, threads);
    } else {
        p_used = choose_precision(cfg.position);
        while (true) {
            digit = pi_hex_digit(BbpParams{cfg.position, p_used}, threads);
            if (digit || p_used + 4 > kMaxPrecisionBits)
                break;
            p_used += 4;
        }
    }

    std::string digit_str;
    if (digit)
        digit_str = std::string(1, "0123456789ABCDEF"[*digit]);

    json j;
    j["schema"] = "pi-forge/1";
    j["command"] = "bbp";
    j["algorithm"] = "bbp";
    j["position"] = cfg.position;
    j["n"] = cfg.position;
    j["precision_bits"] = p_used;
    j["magnifier_bits"] = p_used;
    j["rounding_ulps"] = "0";
    j["truncation_exp10"] = 0;
    j["guard_digits"] = 0;
    j["verdict"] = digit ? "certified" : "ambiguous";
    j["digit"] = digit_str;
    j["threads"] = threads;
    j["timings"] = {{"compute_s", seconds_since(t0)},
                    {"total_s", seconds_since(t0)}};
    write_report(cfg.report_path, j);

    if (!digit) {
        std::cerr << "bbp: no certified digit at position " << cfg.position
                  << " with precision " << p_used
                  << " bits (agreement test failed)\n";
        return kExitAmbiguous;
    }
    if (!cfg.out_path.empty())
        write_text_file(cfg.out_path, digit_str + "\n");
    else
        std::cout << digit_str << "\n";
    std::cerr << "bbp: position " << cfg.position << " digit " << digit_str
              << " (p=" << p_used << ", " << seconds_since(t0) << " s)\n";
    return kExitOk;
}

int cmd_crosscheck(const RunConfig& cfg) {
    Clock::time_point t0 = Clock::now();
    if (cfg.digit_file.empty())
        throw ConfigError("crosscheck: --digit-file is required");
    std::ifstream in(cfg.digit_file);
    if (!in)
        throw ConfigError("crosscheck: cannot open " + cfg.digit_file);
    std::string line;
    std::getline(in, line);
    if (line.size() < 3 || line.find('.') == std::string::npos)
        throw ConfigError("crosscheck: " + cfg.digit_file +
                          " is not a digit file");

    std::vector<std::uint64_t> positions = cfg.positions;
    if (cfg.random_positions > 0) {
        std::uint64_t frac_len = line.size() - line.find('.') - 1;
        std::mt19937_64 rng(cfg.seed);
        for (std::uint64_t i = 0; i < cfg.random_positions; ++i)
            positions.push_back(1 + rng() % frac_len);
    }

    unsigned threads = resolve_threads(cfg.threads);
    CrosscheckResult result = crosscheck(line, positions, threads);

    json entries = json::array();
    for (const CrosscheckEntry& e : result.entries) {
        const char* verdict = e.verdict == CrossVerdict::match ? "match"
                              : e.verdict == CrossVerdict::mismatch
                                  ? "mismatch"
                                  : "inconclusive";
        std::cout << "position " << e.position << ": spigot "
                  << (e.spigot_digit < 0
                          ? std::string("-")
                          : std::string(1,
                                        "0123456789ABCDEF"[e.spigot_digit]))
                  << " file "
                  << std::string(1, "0123456789ABCDEF"[e.file_digit]) << " "
                  << verdict << "\n";
        entries.push_back({{"position", e.position},
                           {"spigot", e.spigot_digit},
                           {"file", e.file_digit},
                           {"verdict", verdict}});
    }

    json j;
    j["schema"] = "pi-forge/1";
    j["command"] = "crosscheck";
    j["algorithm"] = "bbp";
    j["digit_file"] = cfg.digit_file;
    j["n"] = positions.size();
    j["magnifier_bits"] = 0;
    j["rounding_ulps"] = "0";
    j["truncation_exp10"] = 0;
    j["guard_digits"] = 0;
    j["verdict"] = result.any_mismatch       ? "mismatch"
                   : result.all_conclusive   ? "match"
                                             : "inconclusive";
    j["entries"] = entries;
    j["threads"] = threads;
    j["timings"] = {{"total_s", seconds_since(t0)}};
    write_report(cfg.report_path, j);

    if (result.any_mismatch) {
        std::cerr << "crosscheck: MISMATCH detected\n";
        return kExitMismatch;
    }
    std::cerr << "crosscheck: " << result.entries.size()
              << " position(s), no mismatch"
              << (result.all_conclusive ? "" : " (some inconclusive)")
              << "\n";
    return kExitOk;
}

int cmd_selftest(const RunConfig&) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << "[selftest] " << (ok ? "ok   " : "FAIL ") << what
                  << "\n";
        if (!ok)
            ++failures;
    };

    check(borwein_iterations_for(1000000) == 19,
          "product iteration count for 10^6 digits = 19");
    check(salamin_iterations_for(1000000) == 19,
          "AGM-sum iteration count for 10^6 digits = 19");

    Magnifier probe = Magnifier::pow2(70);
    check(borwein_budget(20, probe).rounding_ulps == 423,
          "product rounding budget at n=20 = 423 ulps");
    check(guard_digits_for(10, salamin_budget(19, probe).rounding_ulps) == 12,
          "AGM-sum guard auto-size at n=19 = 12 digits");

    Magnifier m40 = Magnifier::pow2(40);
    check(borwein_pi(m40, 3).mantissa == mpz_class("3454217652349"),
          "product value at n=3, m=2^40");

    static const char kHex9[] = "243F6A888";
    bool bbp_ok = true;
    for (std::uint64_t d = 1; d <= 9; ++d) {
        std::optional<unsigned> digit;
        for (unsigned p = choose_precision(d); p <= kMaxPrecisionBits;
             p += 4) {
            digit = pi_hex_digit(BbpParams{d, p});
            if (digit)
                break;
        }
        bbp_ok = bbp_ok && digit &&
                 "0123456789ABCDEF"[*digit] == kHex9[d - 1];
    }
    check(bbp_ok, "spigot hex digits 1..9 (with precision escalation)");

    for (Algorithm algo : {Algorithm::borwein, Algorithm::salamin}) {
        DigitReport rep = compute_digits(40, 10, algo);
        check(rep.verdict == Verdict::certified &&
                  rep.digit_string ==
                      "3.1415926535897932384626433832795028841971",
              std::string("40 certified digits via ") + algo_name(algo));
    }

    std::cout << "[selftest] " << (failures == 0 ? "all checks passed"
                                                 : "FAILURES present")
              << "\n";
    return failures == 0 ? kExitOk : kExitConfig;
}

} // namespace pi_forge
