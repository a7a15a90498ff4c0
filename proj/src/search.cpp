#include "sofai/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <queue>
#include <unordered_set>

namespace sofai::search {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// states live once in the dedup set; nodes hold stable pointers into it
struct Node {
    const State *state = nullptr;
    int parent = -1;
    int action = -1;
};

Plan extract_plan(const GroundedTask &task, const std::vector<Node> &nodes, int goal_node) {
    std::vector<int> actions;
    for (int n = goal_node; nodes[static_cast<std::size_t>(n)].parent >= 0;
         n = nodes[static_cast<std::size_t>(n)].parent)
        actions.push_back(nodes[static_cast<std::size_t>(n)].action);
    std::reverse(actions.begin(), actions.end());
    Plan plan;
    plan.steps.reserve(actions.size());
    for (int a : actions)
        plan.steps.push_back(task.actions[static_cast<std::size_t>(a)].step);
    return plan;
}

bool applicable(const State &s, const GroundAction &a) {
    for (int p : a.pre_pos)
        if (!s.test(p))
            return false;
    for (int n : a.pre_neg)
        if (s.test(n))
            return false;
    return true;
}

} // namespace

int goal_count_heuristic(const State &s, const std::vector<GoalLiteral> &goals) {
    return static_cast<int>(goals.size()) - holds(s, goals);
}

S2Result solve(const GroundedTask &task, const SearchConfig &cfg) {
    const auto t0 = Clock::now();
    const int total_goals = static_cast<int>(task.goals.size());
    const bool greedy = cfg.strategy == SearchConfig::Strategy::greedy_best_first;

    S2Result result;
    auto finish = [&](S2Result::Outcome outcome) {
        result.outcome = outcome;
        result.stats.wall_s = seconds_since(t0);
        return result;
    };

    std::vector<Node> nodes;
    std::unordered_set<State, StateHash> seen;

    // greedy frontier: (h, push sequence) min-heap; FIFO among equal h
    using Entry = std::pair<std::pair<int, std::uint64_t>, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_greedy;
    std::deque<int> open_bfs;
    std::uint64_t pushes = 0;

    auto push = [&](int node) {
        if (greedy)
            open_greedy.push({{goal_count_heuristic(*nodes[static_cast<std::size_t>(node)].state,
                                                    task.goals),
                              pushes++},
                             node});
        else
            open_bfs.push_back(node);
    };
    auto pop = [&]() {
        if (greedy) {
            int n = open_greedy.top().second;
            open_greedy.pop();
            return n;
        }
        int n = open_bfs.front();
        open_bfs.pop_front();
        return n;
    };
    auto open_empty = [&]() { return greedy ? open_greedy.empty() : open_bfs.empty(); };

    if (seconds_since(t0) >= cfg.deadline_s)
        return finish(S2Result::Outcome::timeout);

    nodes.push_back({&*seen.insert(task.init).first, -1, -1});
    push(0);

    while (!open_empty()) {
        if ((result.stats.expanded & 1023) == 0) {
            if (seconds_since(t0) >= cfg.deadline_s)
                return finish(S2Result::Outcome::timeout);
            if (cfg.cancel && cfg.cancel->load(std::memory_order_relaxed))
                return finish(S2Result::Outcome::timeout);
        }
        if (cfg.node_limit && result.stats.expanded >= *cfg.node_limit)
            return finish(S2Result::Outcome::resource_limit);

        int cur = pop();
        ++result.stats.expanded;
        const State &state = *nodes[static_cast<std::size_t>(cur)].state;

        if (holds(state, task.goals) == total_goals) {
            result.plan = extract_plan(task, nodes, cur);
            return finish(S2Result::Outcome::solved);
        }

        for (std::size_t a = 0; a < task.actions.size(); ++a) {
            const GroundAction &act = task.actions[a];
            if (!applicable(state, act))
                continue;
            State succ = state;
            for (int d : act.del)
                succ.reset(d);
            for (int ad : act.add)
                succ.set(ad);
            auto [it, fresh] = seen.insert(std::move(succ));
            if (!fresh)
                continue;
            int id = static_cast<int>(nodes.size());
            nodes.push_back({&*it, cur, static_cast<int>(a)});
            push(id);
        }
    }
    return finish(S2Result::Outcome::unsolvable);
}

} // namespace sofai::search
