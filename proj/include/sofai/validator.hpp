#pragma once

#include "sofai/ratio.hpp"
#include "sofai/strips.hpp"

#include <optional>
#include <string>
#include <utility>

namespace sofai {

// Result of running a plan against a task from its initial state. Inapplicable
// or unresolvable steps are data, not failures: execution truncates at the
// first such step and the reached state is scored.
struct ExecutionTrace {
    int executed_prefix = 0;
    State final_state;
    // (step index, violated literal or unresolvable-step description)
    std::optional<std::pair<int, std::string>> truncated_at;
    int satisfied_goals = 0;
    int total_goals = 0;
};

ExecutionTrace execute(const GroundedTask &task, const Plan &plan);

// satisfied_goals / total_goals as an exact rational.
// Throws std::invalid_argument when the task has no goals.
Ratio correctness(const GroundedTask &task, const Plan &plan);

} // namespace sofai
