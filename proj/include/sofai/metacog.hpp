#pragma once

#include "sofai/case_memory.hpp"
#include "sofai/ratio.hpp"
#include "sofai/retrieval.hpp"
#include "sofai/search.hpp"
#include "sofai/strips.hpp"
#include "sofai/util.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

namespace sofai::metacog {

// Thresholds steering the arbitration between S1 adoption and S2 engagement.
struct MetaParams {
    Ratio A{1, 2};        // acceptable correctness
    long long T1 = 20;    // minimum domain experience before trusting S1
    long long T2 = 20;    // minimum S1 usages before S1 is held accountable
    double T3 = 0.6;      // risk aversion
    double epsilon = 0.1; // exploration scale

    void validate() const; // throws std::invalid_argument on out-of-range values
};

enum class Branch {
    mc1_adopt,
    mc2_cost_exceeded,
    mc2_explore,
    mc2_keep_s1,
    mc2_engage_s2_with_fallback,
    mc2_engage_s2_no_fallback,
    opt_out,
};

std::string to_string(Branch b);

// Locals of the arbitration, kept for inspection and reporting. Fields are
// filled as far as the decision path reached them; prob is always the
// configured exploration probability (1 - T3) * epsilon.
struct MetaTrace {
    Ratio K{0, 1};
    Ratio avg_corr{0, 1};
    int diff = 0;
    double est_t = 0.0;
    double rem_t = 0.0;
    double est_cost = 0.0;
    double prob = 0.0;
    double elapsed_s1 = 0.0;
    Branch branch = Branch::opt_out;
};

struct SolveOutcome {
    enum class Status { solved, opt_out };
    Status status = Status::opt_out;
    Plan plan;
    Ratio correctness{0, 1}; // recomputed by the validator on adoption
    SystemUsed system_used = SystemUsed::S2;
    MetaTrace trace;
    double wall_time_s = 0.0;

    bool solved() const { return status == Status::solved; }
};

// Pluggable S2 engine; the default runs the embedded greedy search.
using S2Fn = std::function<search::S2Result(const GroundedTask &, double deadline_s,
                                            const std::atomic<bool> *cancel)>;

// Node budget for the default embedded engine: a runaway search becomes a
// failed S2 attempt instead of exhausting memory under a long deadline.
constexpr std::uint64_t default_s2_node_limit = 4'000'000;

struct SolveOptions {
    S2Fn s2;                                  // empty -> embedded search
    const std::atomic<bool> *cancel = nullptr;
};

// Seed for the exploration coin, derived from the solve seed so the coin and
// the rng retrieval draw from decorrelated streams.
constexpr std::uint64_t exploration_seed(std::uint64_t rng_seed) {
    return mix_seed(rng_seed, 0x5eedc01dULL);
}

// Runs the full arbitration on one instance. Every solved outcome appends a
// CaseRecord to mem; opt-outs append nothing. Deterministic for fixed
// (memory, seed) up to wall-clock measurements.
SolveOutcome solve(const Domain &dom, const Instance &inst, double tl_s, const MetaParams &params,
                   CaseMemory &mem, S1Kind kind, std::uint64_t rng_seed,
                   const SolveOptions &opts = {});

// Validates the proposal and adopts it when its correctness reaches A;
// otherwise delegates to solve_with_s2 with no fallback. Exposed for tests;
// solve() wires it into the decision paths above.
SolveOutcome try_s1(const GroundedTask &task, const S1Proposal &proposal, Ratio A,
                    double remaining_s, const S2Fn &s2 = {},
                    const std::atomic<bool> *cancel = nullptr);

// Engages S2 under the remaining budget. On S2 failure adopts the fallback
// when present, else opts out.
SolveOutcome solve_with_s2(const GroundedTask &task, const S1Proposal *fallback,
                           double remaining_s, const S2Fn &s2 = {},
                           const std::atomic<bool> *cancel = nullptr);

} // namespace sofai::metacog
