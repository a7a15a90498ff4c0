// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion is self-contained and pinned to fixed seeds.

#include "test_util.hpp"

#include "sofai/bench.hpp"
#include "sofai/metacog.hpp"
#include "sofai/retrieval.hpp"
#include "sofai/search.hpp"
#include "sofai/validator.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

using namespace sofai;
using metacog::Branch;
using metacog::MetaParams;

namespace {

struct Check {
    bool ok = true;
    std::string message;
    void require(bool cond, const std::string &why) {
        if (ok && !cond) {
            ok = false;
            message = why;
        }
    }
};

std::uint64_t exploring_seed(double prob) {
    for (std::uint64_t seed = 0;; ++seed) {
        std::mt19937_64 coin(metacog::exploration_seed(seed));
        if (prob >= uniform01(coin))
            return seed;
    }
}

std::uint64_t non_exploring_seed(double prob) {
    for (std::uint64_t seed = 0;; ++seed) {
        std::mt19937_64 coin(metacog::exploration_seed(seed));
        if (prob < uniform01(coin))
            return seed;
    }
}

Instance instance_from(const std::string &text) {
    return parse_instance(text, bench::blocksworld_domain());
}

const char *kTwoOnTable = "(define (problem two) (:domain blocksworld) (:objects a b - block)"
                          " (:init (handempty) (ontable a) (ontable b) (clear a) (clear b))"
                          " (:goal (and (on a b))))";

const char *kThreeOfFive =
    "(define (problem five) (:domain blocksworld) (:objects b1 b2 b3 b4 b5 - block)"
    " (:init (handempty) (ontable b1) (ontable b2) (ontable b3) (ontable b4) (ontable b5)"
    "        (clear b1) (clear b2) (clear b3) (clear b4) (clear b5))"
    " (:goal (and (ontable b1) (ontable b2) (ontable b3) (on b4 b5) (on b5 b1))))";

CaseMemory filler_records(int count, std::uint64_t seed_base, SystemUsed system) {
    const Domain &dom = testutil::bw_domain();
    CaseMemory mem;
    for (int i = 0; i < count; ++i) {
        Instance inst = bench::gen_blocksworld(3, seed_base + static_cast<std::uint64_t>(i));
        GroundedTask task = ground(dom, inst);
        search::S2Result r = search::solve(task, search::SearchConfig{});
        if (!r.solved())
            throw std::runtime_error("filler solve failed");
        mem.append(testutil::make_record(dom, inst, r.plan, system, 0.001));
    }
    return mem;
}

// --- criterion 1: Algorithm-1 branch fixtures -------------------------------

bool run_branch_fixtures(std::string &message) {
    Check check;
    const Domain &dom = testutil::bw_domain();
    const MetaParams defaults;
    const double prob = (1.0 - defaults.T3) * defaults.epsilon;
    check.require(std::abs(prob - 0.04) < 1e-12, "default exploration probability must be 0.04");

    Instance two = instance_from(kTwoOnTable);
    Plan solving;
    solving.steps = {"(pick-up a)", "(stack a b)"};

    { // 1. MC1-adopt: T1 gate open, S1 usages < T2 -> K = 0; cx = 1 >= 0.6
        CaseMemory mem = filler_records(19, 1000, SystemUsed::S2);
        mem.append(testutil::make_record(dom, two, solving, SystemUsed::S2, 0.001));
        auto out = metacog::solve(dom, two, 10.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc1_adopt, "fixture 1: expected MC1-adopt");
        check.require(out.solved() && out.system_used == SystemUsed::S1 &&
                          out.correctness == Ratio(1, 1),
                      "fixture 1: expected S1 adoption with correctness 1");
        check.require(out.trace.K == Ratio(0, 1), "fixture 1: K must be 0 below T2");
    }
    { // 2. MC2-cost-exceeded: est_t = 12 against TL = 10 -> est_cost > 1
        CaseMemory mem;
        mem.append(testutil::make_record(dom, two, solving, SystemUsed::S2, 12.0));
        auto out = metacog::solve(dom, two, 10.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc2_cost_exceeded,
                      "fixture 2: expected MC2-cost-exceeded");
        check.require(std::abs(out.trace.est_t - 12.0) < 1e-9, "fixture 2: est_t must be 12");
        check.require(out.trace.est_cost > 1.0, "fixture 2: est_cost must exceed 1");
        check.require(out.trace.rem_t > 0 &&
                          std::abs(out.trace.est_cost - out.trace.est_t / out.trace.rem_t) < 1e-9,
                      "fixture 2: est_cost = est_t / rem_t");
        check.require(out.solved() && out.system_used == SystemUsed::S1,
                      "fixture 2: expected the S1 plan to be adopted");
    }
    { // 3. MC2-explore: the coin lands at or below prob = 0.04
        CaseMemory mem;
        mem.append(testutil::make_record(dom, two, solving, SystemUsed::S1, 0.001));
        auto out = metacog::solve(dom, two, 10.0, defaults, mem, S1Kind::jaccard,
                                  exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc2_explore, "fixture 3: expected MC2-explore");
        check.require(out.solved() && out.system_used == SystemUsed::S1,
                      "fixture 3: expected the S1 plan to be adopted");
        check.require(std::abs(out.trace.prob - 0.04) < 1e-12, "fixture 3: prob = (1-T3)*eps");
    }
    { // 4. MC2-keep-S1: C = 1, K = 0, est_cost > 0 -> lhs < 1 = rhs
        CaseMemory mem;
        mem.append(testutil::make_record(dom, two, solving, SystemUsed::S2, 0.5));
        auto out = metacog::solve(dom, two, 10.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc2_keep_s1, "fixture 4: expected MC2-keep-S1");
        check.require(out.trace.est_cost > 0.0, "fixture 4: est_cost must be positive");
        check.require(out.solved() && out.system_used == SystemUsed::S1 &&
                          out.correctness == Ratio(1, 1),
                      "fixture 4: expected the fully correct S1 plan kept");
    }
    { // 5. MC2-engage-S2-with-fallback: C = 3/5 >= A, est_cost ~ 0.5
      //    1 - 0.5*0.4 = 0.8 >= 0.6 = C*(1-K)
        Instance five = instance_from(kThreeOfFive);
        CaseMemory mem;
        mem.append(testutil::make_record(dom, five, Plan{}, SystemUsed::S1, 0.001));
        Instance other = bench::gen_blocksworld(5, 777);
        GroundedTask otask = ground(dom, other);
        auto osolved = search::solve(otask, search::SearchConfig{});
        check.require(osolved.solved(), "fixture 5: helper solve failed");
        mem.append(testutil::make_record(dom, other, osolved.plan, SystemUsed::S2, 5.0));
        auto out = metacog::solve(dom, five, 10.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc2_engage_s2_with_fallback,
                      "fixture 5: expected MC2-engage-S2-with-fallback");
        check.require(std::abs(out.trace.est_t - 5.0) < 1e-9, "fixture 5: est_t must be 5");
        check.require(out.trace.est_cost > 0.45 && out.trace.est_cost < 0.55,
                      "fixture 5: est_cost must be near 0.5");
        check.require(out.solved() && out.system_used == SystemUsed::S2 &&
                          out.correctness == Ratio(1, 1),
                      "fixture 5: expected S2 to finish with correctness 1");
    }
    { // 6. MC2-engage-S2-no-fallback: retrieved plan scores 0 < A
        CaseMemory mem;
        mem.append(testutil::make_record(dom, two, Plan{}, SystemUsed::S1, 0.001));
        auto out = metacog::solve(dom, two, 10.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(out.trace.branch == Branch::mc2_engage_s2_no_fallback,
                      "fixture 6: expected MC2-engage-S2-no-fallback");
        check.require(out.solved() && out.system_used == SystemUsed::S2,
                      "fixture 6: expected S2 to solve");
    }
    { // 7. opt-out: empty memory, contradictory goal with no goal true in
      //    init (the empty proposal scores 0 < A), S2 exhausts the space
        Instance impossible = instance_from(
            "(define (problem imp) (:domain blocksworld) (:objects a b - block)"
            " (:init (handempty) (ontable a) (ontable b) (clear a) (clear b))"
            " (:goal (and (on a b) (on b a))))");
        CaseMemory mem;
        std::size_t before = mem.size();
        auto out = metacog::solve(dom, impossible, 5.0, defaults, mem, S1Kind::jaccard,
                                  non_exploring_seed(prob));
        check.require(!out.solved(), "fixture 7: expected opt-out");
        check.require(out.trace.branch == Branch::opt_out, "fixture 7: expected opt-out branch");
        check.require(mem.size() == before, "fixture 7: opt-out must append nothing");
    }
    message = check.message;
    return check.ok;
}

// --- criterion 2: validator vs naive oracle ---------------------------------

bool run_validator_exactness(std::string &message) {
    Check check;
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4); // 2..5 blocks
        Instance inst = bench::gen_blocksworld(n, rng());
        GroundedTask task = ground(testutil::bw_domain(), inst);
        Plan plan = testutil::random_plan(task, rng, 24);
        auto [sat, total] = testutil::oracle_execute(task, plan);
        if (correctness(task, plan) != Ratio(sat, total)) {
            check.require(false, "mismatch on trial " + std::to_string(trial) + " (" +
                                     std::to_string(sat) + "/" + std::to_string(total) + ")");
            break;
        }
    }
    message = check.message;
    return check.ok;
}

// --- criterion 3: planner soundness + optimality -----------------------------

bool run_planner_soundness(std::string &message) {
    Check check;
    for (int n = 2; n <= 4 && check.ok; ++n) {
        for (std::uint64_t i = 0; i < 50 && check.ok; ++i) {
            Instance inst = bench::gen_blocksworld(n, 50000 + i);
            GroundedTask task = ground(testutil::bw_domain(), inst);

            search::SearchConfig bfs;
            bfs.strategy = search::SearchConfig::Strategy::bfs_optimal;
            bfs.deadline_s = 60.0;
            auto r = search::solve(task, bfs);
            check.require(r.solved(), "BFS failed on " + inst.name);
            if (!r.solved())
                break;
            check.require(correctness(task, r.plan) == Ratio(1, 1),
                          "BFS plan fails validation on " + inst.name);
            auto oracle = testutil::oracle_bfs_plan_length(task);
            check.require(oracle.has_value() &&
                              static_cast<int>(r.plan.size()) == *oracle,
                          "BFS plan length differs from the oracle on " + inst.name);

            auto g = search::solve(task, search::SearchConfig{});
            check.require(g.solved() && correctness(task, g.plan) == Ratio(1, 1),
                          "greedy plan fails validation on " + inst.name);
        }
    }
    message = check.message;
    return check.ok;
}

// --- criterion 4: metric oracles ---------------------------------------------

bool run_metric_oracles(std::string &message) {
    Check check;
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 500 && check.ok; ++trial) {
        std::string a = testutil::random_string(rng, 8, 5);
        std::string b = testutil::random_string(rng, 8, 5);
        check.require(levenshtein(a, b) == testutil::oracle_levenshtein(a, b),
                      "levenshtein mismatch on '" + a + "' vs '" + b + "'");
    }
    for (int trial = 0; trial < 500 && check.ok; ++trial) {
        std::set<std::string> sa, sb;
        for (int i = 0; i < static_cast<int>(rng() % 12); ++i)
            sa.insert(std::string(1, static_cast<char>('a' + rng() % 16)));
        for (int i = 0; i < static_cast<int>(rng() % 12); ++i)
            sb.insert(std::string(1, static_cast<char>('a' + rng() % 16)));
        std::vector<std::string> va(sa.begin(), sa.end()), vb(sb.begin(), sb.end());
        check.require(jaccard(va, vb) == testutil::oracle_jaccard(sa, sb),
                      "jaccard mismatch on trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 200 && check.ok; ++trial) {
        std::string a = testutil::random_string(rng, 8, 3);
        std::string b = testutil::random_string(rng, 8, 3);
        std::string c = testutil::random_string(rng, 8, 3);
        check.require(levenshtein(a, a) == 0, "identity violated");
        check.require(levenshtein(a, b) == levenshtein(b, a), "symmetry violated");
        check.require(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c),
                      "triangle inequality violated");
        std::vector<std::string> va(1, a), vb(1, b);
        check.require(jaccard(va, vb) == jaccard(vb, va), "jaccard symmetry violated");
    }
    message = check.message;
    return check.ok;
}

// --- criterion 5: reachable configurations at n = 4 --------------------------

bool run_reachability(std::string &message) {
    Check check;
    Instance inst = instance_from(
        "(define (problem canon) (:domain blocksworld) (:objects b1 b2 b3 b4 - block)"
        " (:init (handempty) (ontable b1) (ontable b2) (ontable b3) (ontable b4)"
        "        (clear b1) (clear b2) (clear b3) (clear b4))"
        " (:goal (and (on b1 b2))))");
    GroundedTask task = ground(testutil::bw_domain(), inst);
    std::set<std::set<std::string>> configs;
    for (auto &s : testutil::reachable_states(task)) {
        auto atoms = testutil::state_atoms(task, s);
        if (atoms.count("handempty"))
            configs.insert(atoms);
    }
    std::set<std::set<std::string>> enumerated;
    for (auto &cfg : testutil::enumerate_configurations(4))
        enumerated.insert(testutil::configuration_atoms(cfg));
    check.require(enumerated.size() == 73,
                  "enumerator produced " + std::to_string(enumerated.size()) + " configurations");
    check.require(configs.size() == 73,
                  "reached " + std::to_string(configs.size()) + " configurations, expected 73");
    check.require(configs == enumerated, "reachable configurations differ from the enumeration");
    message = check.message;
    return check.ok;
}

// --- criteria 6-9: the scaled experiment and its derived checks ---------------

bench::SuiteSpec scaled_spec() {
    bench::SuiteSpec spec;
    spec.blocks_counts = {{4, 50}, {5, 50}};
    spec.seed = 7;
    spec.tl_s = 5.0;
    spec.configs = {bench::Config::s2_only, bench::Config::jac, bench::Config::lev,
                    bench::Config::mix, bench::Config::rng};
    spec.memory_seed_count = 25;
    return spec;
}

struct ScaledArtifacts {
    bench::RunResults results;
    std::string rows_csv;
    std::string agg_csv;
};

ScaledArtifacts run_scaled() {
    ScaledArtifacts art;
    art.results = bench::run_suite(scaled_spec());
    std::ostringstream rows, agg;
    bench::emit_rows_csv(art.results, rows);
    bench::emit_aggregates_csv(art.results, agg);
    art.rows_csv = rows.str();
    art.agg_csv = agg.str();
    return art;
}

const bench::Aggregate *find_agg(const bench::RunResults &results, const std::string &config) {
    for (auto &a : results.aggregates)
        if (a.config == config)
            return &a;
    return nullptr;
}

bool run_scaled_experiment(const ScaledArtifacts &art, std::string &message) {
    Check check;
    const auto *s2 = find_agg(art.results, "s2");
    const auto *jac = find_agg(art.results, "jac");
    check.require(s2 && jac, "missing aggregates");
    if (!check.ok) {
        message = check.message;
        return false;
    }
    check.require(jac->solved >= s2->solved,
                  "jac solved " + std::to_string(jac->solved) + " < s2 solved " +
                      std::to_string(s2->solved));
    check.require(jac->s1_calls > 0, "jac made no S1 calls");
    check.require(s2->s1_calls == 0, "s2-only reported S1 calls");

    double s1_time_sum = 0.0;
    int s1_rows = 0;
    for (auto &row : art.results.rows) {
        if (row.system == "S1") {
            check.require(row.correctness >= Ratio(1, 2),
                          "adopted S1 solution below correctness 0.5 on " + row.instance_id);
            s1_time_sum += row.wall_time_s;
            ++s1_rows;
        }
    }
    check.require(s1_rows > 0, "no S1 adoptions in the whole experiment");
    if (s1_rows > 0)
        check.require(s1_time_sum / s1_rows < scaled_spec().tl_s / 2.0,
                      "mean S1 adoption time not below TL/2");
    message = check.message;
    return check.ok;
}

bool run_full_correctness_mode(std::string &message) {
    Check check;
    bench::SuiteSpec spec = scaled_spec();
    spec.configs = {bench::Config::jac};
    spec.params.A = Ratio(1, 1);
    bench::RunResults results = bench::run_suite(spec);
    int solved = 0;
    for (auto &row : results.rows) {
        if (row.status == "Solved") {
            ++solved;
            check.require(row.correctness == Ratio(1, 1),
                          "solved row below correctness 1 on " + row.instance_id);
        }
    }
    check.require(solved > 0, "nothing solved in A=1 mode");
    message = check.message;
    return check.ok;
}

std::string strip_column(const std::string &csv, std::size_t column) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string field;
        std::size_t i = 0;
        bool first = true;
        while (std::getline(fields, field, ',')) {
            if (i++ == column)
                continue;
            out += first ? "" : ",";
            out += field;
            first = false;
        }
        out += '\n';
    }
    return out;
}

bool run_determinism(const ScaledArtifacts &first, std::string &message) {
    Check check;
    ScaledArtifacts second = run_scaled();
    // wall-time columns excluded: rows column 6, aggregates column 2
    check.require(strip_column(first.rows_csv, 6) == strip_column(second.rows_csv, 6),
                  "row CSVs differ beyond the wall-time column");
    check.require(strip_column(first.agg_csv, 2) == strip_column(second.agg_csv, 2),
                  "aggregate CSVs differ beyond the mean-time column");
    message = check.message;
    return check.ok;
}

bool run_memory_roundtrip(const ScaledArtifacts &art, std::string &message) {
    Check check;
    const CaseMemory &final_jac = art.results.final_memories.at("jac");
    check.require(final_jac.size() >= 25, "jac memory lost its seed records");
    auto path = std::filesystem::temp_directory_path() / "sofai-acceptance-roundtrip.mem";
    final_jac.save(path);
    CaseMemory loaded = CaseMemory::load(path);
    std::filesystem::remove(path);
    check.require(loaded == final_jac, "save/load is not an identity on the final memory");
    message = check.message;
    return check.ok;
}

} // namespace

int main() {
    struct Criterion {
        std::string name;
        double limit_s; // 0 = no stated bound
        std::function<bool(std::string &)> fn;
    };

    ScaledArtifacts scaled; // shared by criteria 6-9; built lazily below
    bool scaled_ready = false;
    auto ensure_scaled = [&]() {
        if (!scaled_ready) {
            scaled = run_scaled();
            scaled_ready = true;
        }
    };

    std::vector<Criterion> criteria = {
        {"algorithm1-branch-fixtures", 1.0, run_branch_fixtures},
        {"validator-correctness-exactness", 10.0, run_validator_exactness},
        {"planner-soundness-optimality", 60.0, run_planner_soundness},
        {"metric-oracles", 10.0, run_metric_oracles},
        {"reachable-states-n4", 5.0, run_reachability},
        {"scaled-table1-experiment", 900.0,
         [&](std::string &m) {
             ensure_scaled();
             return run_scaled_experiment(scaled, m);
         }},
        {"full-correctness-mode-A1", 900.0, run_full_correctness_mode},
        {"determinism", 0.0,
         [&](std::string &m) {
             ensure_scaled();
             return run_determinism(scaled, m);
         }},
        {"memory-roundtrip", 0.0,
         [&](std::string &m) {
             ensure_scaled();
             return run_memory_roundtrip(scaled, m);
         }},
    };

    int failures = 0;
    for (auto &criterion : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string message;
        bool ok = false;
        try {
            ok = criterion.fn(message);
        } catch (const std::exception &e) {
            ok = false;
            message = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && criterion.limit_s > 0 && elapsed >= criterion.limit_s) {
            ok = false;
            message = "runtime " + std::to_string(elapsed) + " s exceeded the " +
                      std::to_string(criterion.limit_s) + " s bound";
        }
        std::printf("[%s] %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                    elapsed, message.empty() ? "" : ": ", message.c_str());
        failures += ok ? 0 : 1;
    }
    if (failures)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures;
}
