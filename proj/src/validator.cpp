#include "sofai/validator.hpp"

namespace sofai {

ExecutionTrace execute(const GroundedTask &task, const Plan &plan) {
    ExecutionTrace trace;
    trace.final_state = task.init;
    trace.total_goals = static_cast<int>(task.goals.size());
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        int action = task.find_action(plan.steps[i]);
        if (action < 0) {
            trace.truncated_at = {static_cast<int>(i), "unresolvable step " + plan.steps[i]};
            break;
        }
        if (auto violated = first_unsatisfied(task, trace.final_state, action)) {
            trace.truncated_at = {static_cast<int>(i), *violated};
            break;
        }
        trace.final_state = apply(task, trace.final_state, action);
        ++trace.executed_prefix;
    }
    trace.satisfied_goals = holds(trace.final_state, task.goals);
    return trace;
}

Ratio correctness(const GroundedTask &task, const Plan &plan) {
    if (task.goals.empty())
        throw std::invalid_argument("correctness: task has no goals");
    ExecutionTrace trace = execute(task, plan);
    return Ratio(trace.satisfied_goals, trace.total_goals);
}

} // namespace sofai
