#include "sofai/metacog.hpp"

#include "sofai/validator.hpp"

#include <chrono>
#include <limits>
#include <random>

namespace sofai::metacog {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

search::S2Result run_s2(const GroundedTask &task, double deadline_s, const S2Fn &s2,
                        const std::atomic<bool> *cancel) {
    if (s2)
        return s2(task, deadline_s, cancel);
    search::SearchConfig cfg;
    cfg.strategy = search::SearchConfig::Strategy::greedy_best_first;
    cfg.deadline_s = deadline_s;
    cfg.node_limit = default_s2_node_limit;
    cfg.cancel = cancel;
    return search::solve(task, cfg);
}

SolveOutcome adopt(const GroundedTask &task, Plan plan, SystemUsed system) {
    SolveOutcome out;
    out.status = SolveOutcome::Status::solved;
    out.correctness = correctness(task, plan);
    out.plan = std::move(plan);
    out.system_used = system;
    return out;
}

} // namespace

void MetaParams::validate() const {
    auto in01 = [](const Ratio &r) { return r >= Ratio(0, 1) && r <= Ratio(1, 1); };
    if (!in01(A))
        throw std::invalid_argument("MetaParams: A must be in [0,1]");
    if (T1 < 0 || T2 < 0)
        throw std::invalid_argument("MetaParams: T1 and T2 must be non-negative");
    if (T3 < 0.0 || T3 > 1.0)
        throw std::invalid_argument("MetaParams: T3 must be in [0,1]");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("MetaParams: epsilon must be in [0,1]");
}

std::string to_string(Branch b) {
    switch (b) {
    case Branch::mc1_adopt:
        return "MC1-adopt";
    case Branch::mc2_cost_exceeded:
        return "MC2-cost-exceeded";
    case Branch::mc2_explore:
        return "MC2-explore";
    case Branch::mc2_keep_s1:
        return "MC2-keep-S1";
    case Branch::mc2_engage_s2_with_fallback:
        return "MC2-engage-S2-with-fallback";
    case Branch::mc2_engage_s2_no_fallback:
        return "MC2-engage-S2-no-fallback";
    case Branch::opt_out:
        return "opt-out";
    }
    return "?";
}

SolveOutcome try_s1(const GroundedTask &task, const S1Proposal &proposal, Ratio A,
                    double remaining_s, const S2Fn &s2, const std::atomic<bool> *cancel) {
    Ratio c = correctness(task, proposal.plan);
    if (c >= A)
        return adopt(task, proposal.plan, SystemUsed::S1);
    return solve_with_s2(task, nullptr, remaining_s, s2, cancel);
}

SolveOutcome solve_with_s2(const GroundedTask &task, const S1Proposal *fallback,
                           double remaining_s, const S2Fn &s2, const std::atomic<bool> *cancel) {
    search::S2Result r = run_s2(task, std::max(remaining_s, 0.0), s2, cancel);
    if (r.solved())
        return adopt(task, std::move(r.plan), SystemUsed::S2);
    if (fallback)
        return adopt(task, fallback->plan, SystemUsed::S1);
    return {}; // opt-out
}

SolveOutcome solve(const Domain &dom, const Instance &inst, double tl_s, const MetaParams &params,
                   CaseMemory &mem, S1Kind kind, std::uint64_t rng_seed,
                   const SolveOptions &opts) {
    params.validate();
    if (tl_s <= 0)
        throw std::invalid_argument("solve: time limit must be positive");

    const auto t0 = Clock::now();
    const GroundedTask task = ground(dom, inst);

    S1Proposal proposal = retrieve(mem, dom.name, inst, kind, rng_seed);
    const double cx = proposal.confidence;

    MetaTrace trace;
    trace.prob = (1.0 - params.T3) * params.epsilon;
    trace.elapsed_s1 = proposal.retrieval_time_s;
    trace.diff = compute_difficulty(inst);

    const auto remaining = [&] { return tl_s - seconds_since(t0); };

    auto finish = [&](Branch branch, SolveOutcome out) {
        out.trace = trace;
        out.trace.branch = out.solved() ? branch : Branch::opt_out;
        out.wall_time_s = seconds_since(t0);
        if (out.solved()) {
            ExecutionTrace exec = execute(task, out.plan);
            CaseRecord rec;
            rec.domain_name = dom.name;
            rec.string_encoding = encode_string(inst);
            rec.instance_fingerprint = fingerprint(rec.string_encoding);
            rec.formula_set = encode_set(inst);
            rec.plan = out.plan;
            rec.system = out.system_used;
            rec.difficulty = trace.diff;
            rec.wall_time_s = out.wall_time_s;
            rec.total_goals = exec.total_goals;
            rec.solved_goals = exec.satisfied_goals;
            mem.append(std::move(rec));
        }
        return out;
    };

    // MC-1: adopt S1 outright when experience and confidence warrant it.
    Ratio K{0, 1};
    Ratio avg_corr{0, 1};
    const auto domain_records = mem.solved_instances(dom.name);
    if (static_cast<long long>(domain_records.size()) >= params.T1) {
        const auto s1_records = mem.solved_instances(dom.name, SystemUsed::S1);
        if (static_cast<long long>(s1_records.size()) >= params.T2) {
            Ratio sum{0, 1};
            for (const CaseRecord *r : s1_records)
                sum = sum + r->correctness();
            avg_corr = sum / static_cast<long long>(s1_records.size());
            K = Ratio(1, 1) - avg_corr;
        }
        trace.K = K;
        trace.avg_corr = avg_corr;
        if (cx * (1.0 - K.to_double()) >= params.T3)
            return finish(Branch::mc1_adopt,
                          try_s1(task, proposal, params.A, remaining(), opts.s2, opts.cancel));
    }
    trace.K = K;
    trace.avg_corr = avg_corr;

    // MC-2: weigh the estimated S2 cost against the proposal's value.
    trace.est_t = mem.avg_t_from_diff(trace.diff);
    trace.rem_t = remaining();
    trace.est_cost = trace.rem_t > 0 ? trace.est_t / trace.rem_t
                                     : std::numeric_limits<double>::infinity();
    if (trace.est_cost > 1.0)
        return finish(Branch::mc2_cost_exceeded,
                      try_s1(task, proposal, params.A, remaining(), opts.s2, opts.cancel));

    std::mt19937_64 coin(exploration_seed(rng_seed));
    if (trace.prob >= uniform01(coin))
        return finish(Branch::mc2_explore,
                      try_s1(task, proposal, params.A, remaining(), opts.s2, opts.cancel));

    const Ratio c = correctness(task, proposal.plan);
    if (c >= params.A) {
        const double lhs = 1.0 - trace.est_cost * (1.0 - params.T3);
        const double rhs = c.to_double() * (1.0 - K.to_double());
        if (lhs >= rhs)
            return finish(Branch::mc2_engage_s2_with_fallback,
                          solve_with_s2(task, &proposal, remaining(), opts.s2, opts.cancel));
        return finish(Branch::mc2_keep_s1, adopt(task, proposal.plan, SystemUsed::S1));
    }
    return finish(Branch::mc2_engage_s2_no_fallback,
                  solve_with_s2(task, nullptr, remaining(), opts.s2, opts.cancel));
}

} // namespace sofai::metacog
