#pragma once

#include "sofai/case_memory.hpp"
#include "sofai/metacog.hpp"
#include "sofai/strips.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sofai::bench {

enum class Config { s2_only, jac, lev, mix, rng };

std::string to_string(Config c);
std::optional<Config> config_from_string(const std::string &name);

struct SuiteSpec {
    std::vector<std::pair<int, int>> blocks_counts; // (n_blocks, instance_count)
    std::uint64_t seed = 0;
    double tl_s = 60.0;
    std::vector<Config> configs;
    int memory_seed_count = 25;
    metacog::MetaParams params;
};

struct RunRow {
    std::string instance_id;
    int n_blocks = 0;
    int difficulty = 0;
    std::string config;
    std::string status; // "Solved" | "OptOut"
    std::string system; // "S1" | "S2" | "none"
    double wall_time_s = 0.0;
    Ratio correctness{0, 1};
    std::string branch;
};

struct Aggregate {
    std::string config;
    int solved = 0;        // solved rows with correctness at least 0.5
    double mean_time_s = 0.0;
    double mean_corr = 0.0;
    int s1_calls = 0;      // rows whose adopted solution came from S1
};

struct RunResults {
    std::vector<RunRow> rows; // sorted by difficulty
    std::vector<Aggregate> aggregates;
    std::map<std::string, CaseMemory> final_memories; // per config
};

// The canonical 4-operator Blocks-World domain.
const std::string &blocksworld_domain_text();
const Domain &blocksworld_domain();

// Random solvable instance: independently sampled legal initial and goal
// configurations; the goal places every block (on/ontable atoms only).
// Deterministic per (n_blocks, seed).
Instance gen_blocksworld(int n_blocks, std::uint64_t seed);

// Solves `count` fresh instances offline with the embedded BFS planner and
// stores them as S2 records. Instance sizes cycle through spec.blocks_counts;
// seeds are disjoint from the evaluation suite. Recorded wall times are a
// deterministic proxy (expanded nodes at a nominal 1e6 nodes/s) so that
// re-seeding reproduces the memory file byte for byte.
CaseMemory seed_memory(const SuiteSpec &spec, int count);

// Evaluates every config over the identical instance list, each against a
// private copy of the seeded memory.
RunResults run_suite(const SuiteSpec &spec);

// Recomputes the per-config aggregates from rows; opt-out rows contribute
// tl_s as time and 0 as correctness.
std::vector<Aggregate> compute_aggregates(const std::vector<RunRow> &rows, double tl_s,
                                          const std::vector<Config> &configs);

void emit_rows_csv(const RunResults &results, std::ostream &out);
void emit_aggregates_csv(const RunResults &results, std::ostream &out);
// Writes <prefix>.rows.csv and <prefix>.agg.csv.
void emit_csv(const RunResults &results, const std::string &prefix);

} // namespace sofai::bench
