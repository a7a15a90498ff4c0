#pragma once

#include "sofai/strips.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sofai::search {

struct SearchConfig {
    enum class Strategy { bfs_optimal, greedy_best_first };
    Strategy strategy = Strategy::greedy_best_first;
    double deadline_s = 60.0;
    std::optional<std::uint64_t> node_limit;
    // cooperative cancellation, checked at the same cadence as the deadline
    const std::atomic<bool> *cancel = nullptr;
};

struct SearchStats {
    std::uint64_t expanded = 0;
    double wall_s = 0.0;
};

struct S2Result {
    enum class Outcome { solved, timeout, unsolvable, resource_limit };
    Outcome outcome = Outcome::timeout;
    Plan plan;
    SearchStats stats;
    std::string diagnostic;
    bool solved() const { return outcome == Outcome::solved; }
};

// Forward state-space search. BFS mode returns a shortest plan; greedy mode
// orders expansion by goal_count_heuristic with FIFO tie-breaking. Both use
// duplicate detection and expand successors in ground-action index order,
// so results are deterministic for a fixed task and config.
S2Result solve(const GroundedTask &task, const SearchConfig &cfg);

// Number of unsatisfied goal literals; 0 iff s is a goal state.
int goal_count_heuristic(const State &s, const std::vector<GoalLiteral> &goals);

// ---------------------------------------------------------------------------
// External planner adapter
// ---------------------------------------------------------------------------

// Descriptor for delegating S2 to an external executable. args entries may
// contain the placeholders {domain}, {problem} and {planfile}, substituted
// with temporary file paths at invocation. The planner is expected to write
// one "(name arg1 arg2)" step per line to the plan file.
struct ExternalPlanner {
    std::string exec;
    std::vector<std::string> args;
};

// Loads a JSON descriptor: {"exec": "/path/to/planner", "args": [...]}.
ExternalPlanner load_external_descriptor(const std::string &path);

// Runs the external planner on the given texts. The child is killed at the
// deadline (-> timeout). A returned plan is re-validated against the grounded
// task before acceptance; plans that do not reach every goal yield
// Outcome::unsolvable with a diagnostic. Throws std::runtime_error when the
// executable is missing or the plan output cannot be parsed.
S2Result solve_external(const ExternalPlanner &planner, const std::string &domain_text,
                        const std::string &problem_text, double deadline_s);

} // namespace sofai::search
