#include "sofai/bench.hpp"

#include "sofai/retrieval.hpp"
#include "sofai/search.hpp"
#include "sofai/util.hpp"
#include "sofai/validator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sofai::bench {

namespace {

// seed-derivation tags
constexpr std::uint64_t kEvalTag = 0xe7a1;
constexpr std::uint64_t kMemTag = 0x3e3d;
constexpr std::uint64_t kRunTag = 0x9047;
constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kGoalTag = 2;

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::string to_string(Config c) {
    switch (c) {
    case Config::s2_only:
        return "s2";
    case Config::jac:
        return "jac";
    case Config::lev:
        return "lev";
    case Config::mix:
        return "mix";
    case Config::rng:
        return "rng";
    }
    return "?";
}

std::optional<Config> config_from_string(const std::string &name) {
    if (name == "s2")
        return Config::s2_only;
    if (name == "jac")
        return Config::jac;
    if (name == "lev")
        return Config::lev;
    if (name == "mix")
        return Config::mix;
    if (name == "rng")
        return Config::rng;
    return std::nullopt;
}

const std::string &blocksworld_domain_text() {
    static const std::string text = R"((define (domain blocksworld)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";
    return text;
}

const Domain &blocksworld_domain() {
    static const Domain dom = parse_domain(blocksworld_domain_text());
    return dom;
}

namespace {

// towers[t] lists a tower bottom-up
using Towers = std::vector<std::vector<int>>;

Towers sample_towers(int n_blocks, std::mt19937_64 &rng) {
    std::vector<int> order(static_cast<std::size_t>(n_blocks));
    for (int i = 0; i < n_blocks; ++i)
        order[static_cast<std::size_t>(i)] = i;
    for (int i = n_blocks - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[rng() % static_cast<std::uint64_t>(i + 1)]);
    Towers towers;
    for (int b : order) {
        std::uint64_t pick = rng() % (towers.size() + 1);
        if (pick == towers.size())
            towers.push_back({b});
        else
            towers[pick].push_back(b);
    }
    return towers;
}

std::string block_name(int i) { return "b" + std::to_string(i + 1); }

void render_placement(std::ostream &out, const Towers &towers) {
    for (auto &tower : towers) {
        out << " (ontable " << block_name(tower[0]) << ")";
        for (std::size_t i = 1; i < tower.size(); ++i)
            out << " (on " << block_name(tower[i]) << " " << block_name(tower[i - 1]) << ")";
    }
}

} // namespace

Instance gen_blocksworld(int n_blocks, std::uint64_t seed) {
    if (n_blocks < 2)
        throw std::invalid_argument("gen_blocksworld: need at least 2 blocks");
    std::mt19937_64 init_rng(mix_seed(seed, kInitTag));
    std::mt19937_64 goal_rng(mix_seed(seed, kGoalTag));
    Towers init = sample_towers(n_blocks, init_rng);
    Towers goal = sample_towers(n_blocks, goal_rng);

    std::ostringstream text;
    text << "(define (problem bw" << n_blocks << "-" << seed << ")\n";
    text << "  (:domain blocksworld)\n";
    text << "  (:objects";
    for (int i = 0; i < n_blocks; ++i)
        text << " " << block_name(i);
    text << " - block)\n";
    text << "  (:init (handempty)";
    render_placement(text, init);
    for (auto &tower : init)
        text << " (clear " << block_name(tower.back()) << ")";
    text << ")\n";
    text << "  (:goal (and";
    render_placement(text, goal);
    text << ")))\n";
    return parse_instance(text.str(), blocksworld_domain());
}

// Exhaustive BFS stays comfortably in memory up to this size (about half a
// million states at 7 blocks); larger suite sizes seed from capped instances.
constexpr int kMaxSeedBlocks = 7;

CaseMemory seed_memory(const SuiteSpec &spec, int count) {
    if (count < 0)
        throw std::invalid_argument("seed_memory: negative count");
    CaseMemory mem;
    if (count == 0)
        return mem;
    if (spec.blocks_counts.empty())
        throw std::invalid_argument("seed_memory: no block sizes in suite spec");
    const Domain &dom = blocksworld_domain();
    for (int i = 0; i < count; ++i) {
        int n = spec.blocks_counts[static_cast<std::size_t>(i) % spec.blocks_counts.size()].first;
        n = std::min(n, kMaxSeedBlocks);
        Instance inst = gen_blocksworld(n, mix_seed(spec.seed, kMemTag + static_cast<std::uint64_t>(i)));
        GroundedTask task = ground(dom, inst);
        search::SearchConfig cfg;
        cfg.strategy = search::SearchConfig::Strategy::bfs_optimal;
        cfg.deadline_s = 3600.0;
        cfg.node_limit = 5'000'000; // fail loudly rather than exhaust memory
        search::S2Result r = search::solve(task, cfg);
        if (!r.solved())
            throw std::runtime_error("seed_memory: offline solve failed on " + inst.name);
        ExecutionTrace exec = execute(task, r.plan);
        if (exec.satisfied_goals != exec.total_goals)
            throw std::runtime_error("seed_memory: offline plan does not reach the goal on " +
                                     inst.name);
        CaseRecord rec;
        rec.domain_name = dom.name;
        rec.string_encoding = encode_string(inst);
        rec.instance_fingerprint = fingerprint(rec.string_encoding);
        rec.formula_set = encode_set(inst);
        rec.plan = r.plan;
        rec.system = SystemUsed::S2;
        rec.difficulty = compute_difficulty(inst);
        // deterministic proxy: expanded nodes at a nominal 1e6 nodes/s
        rec.wall_time_s = static_cast<double>(r.stats.expanded) * 1e-6;
        rec.total_goals = exec.total_goals;
        rec.solved_goals = exec.satisfied_goals;
        mem.append(std::move(rec));
    }
    return mem;
}

std::vector<Aggregate> compute_aggregates(const std::vector<RunRow> &rows, double tl_s,
                                          const std::vector<Config> &configs) {
    std::vector<Aggregate> out;
    const Ratio half(1, 2);
    for (Config c : configs) {
        Aggregate agg;
        agg.config = to_string(c);
        int n = 0;
        double time_sum = 0.0, corr_sum = 0.0;
        for (auto &row : rows) {
            if (row.config != agg.config)
                continue;
            ++n;
            if (row.status == "Solved") {
                time_sum += row.wall_time_s;
                corr_sum += row.correctness.to_double();
            } else {
                time_sum += tl_s; // unsolved: charged the full budget, zero correctness
            }
            if (row.status == "Solved" && row.correctness >= half)
                ++agg.solved;
            if (row.system == "S1")
                ++agg.s1_calls;
        }
        if (n > 0) {
            agg.mean_time_s = time_sum / n;
            agg.mean_corr = corr_sum / n;
        }
        out.push_back(agg);
    }
    return out;
}

RunResults run_suite(const SuiteSpec &spec) {
    if (spec.tl_s <= 0)
        throw std::invalid_argument("run_suite: TL must be positive");
    for (auto &[n, count] : spec.blocks_counts)
        if (count < 1)
            throw std::invalid_argument("run_suite: instance_count must be >= 1");

    const Domain &dom = blocksworld_domain();

    struct Item {
        std::string id;
        int n_blocks;
        Instance inst;
        std::uint64_t seed;
    };
    std::vector<Item> items;
    int idx = 0;
    for (auto &[n, count] : spec.blocks_counts) {
        for (int i = 0; i < count; ++i, ++idx) {
            std::uint64_t inst_seed = mix_seed(spec.seed, kEvalTag + static_cast<std::uint64_t>(idx));
            char id[32];
            std::snprintf(id, sizeof id, "bw%d_%03d", n, i);
            items.push_back({id, n, gen_blocksworld(n, inst_seed),
                             mix_seed(spec.seed, kRunTag + static_cast<std::uint64_t>(idx))});
        }
    }

    const CaseMemory seeded = seed_memory(spec, spec.memory_seed_count);

    RunResults results;
    for (Config config : spec.configs) {
        CaseMemory mem = seeded;
        for (auto &item : items) {
            RunRow row;
            row.instance_id = item.id;
            row.n_blocks = item.n_blocks;
            row.difficulty = compute_difficulty(item.inst);
            row.config = to_string(config);

            if (config == Config::s2_only) {
                GroundedTask task = ground(dom, item.inst);
                search::SearchConfig cfg;
                cfg.deadline_s = spec.tl_s;
                cfg.node_limit = metacog::default_s2_node_limit;
                search::S2Result r = search::solve(task, cfg);
                row.branch = "s2-only";
                row.wall_time_s = r.stats.wall_s;
                if (r.solved()) {
                    row.status = "Solved";
                    row.system = "S2";
                    row.correctness = correctness(task, r.plan);
                } else {
                    row.status = "OptOut";
                    row.system = "none";
                }
            } else {
                S1Kind kind = S1Kind::jaccard;
                switch (config) {
                case Config::jac:
                    kind = S1Kind::jaccard;
                    break;
                case Config::lev:
                    kind = S1Kind::levenshtein;
                    break;
                case Config::mix:
                    kind = S1Kind::mix;
                    break;
                case Config::rng:
                    kind = S1Kind::rng;
                    break;
                case Config::s2_only:
                    break;
                }
                metacog::SolveOutcome outcome = metacog::solve(dom, item.inst, spec.tl_s,
                                                               spec.params, mem, kind, item.seed);
                row.branch = metacog::to_string(outcome.trace.branch);
                row.wall_time_s = outcome.wall_time_s;
                if (outcome.solved()) {
                    row.status = "Solved";
                    row.system = to_string(outcome.system_used);
                    row.correctness = outcome.correctness;
                } else {
                    row.status = "OptOut";
                    row.system = "none";
                }
            }
            results.rows.push_back(std::move(row));
        }
        results.final_memories.emplace(to_string(config), std::move(mem));
    }

    std::stable_sort(results.rows.begin(), results.rows.end(),
                     [](const RunRow &a, const RunRow &b) { return a.difficulty < b.difficulty; });
    results.aggregates = compute_aggregates(results.rows, spec.tl_s, spec.configs);
    return results;
}

void emit_rows_csv(const RunResults &results, std::ostream &out) {
    out << "instance_id,n_blocks,difficulty,config,status,system,wall_time_s,correctness,branch\n";
    for (auto &row : results.rows)
        out << row.instance_id << ',' << row.n_blocks << ',' << row.difficulty << ',' << row.config
            << ',' << row.status << ',' << row.system << ',' << fixed6(row.wall_time_s) << ','
            << fixed6(row.correctness.to_double()) << ',' << row.branch << '\n';
}

void emit_aggregates_csv(const RunResults &results, std::ostream &out) {
    out << "config,solved,mean_time_s,mean_corr,s1_calls\n";
    for (auto &agg : results.aggregates)
        out << agg.config << ',' << agg.solved << ',' << fixed6(agg.mean_time_s) << ','
            << fixed6(agg.mean_corr) << ',' << agg.s1_calls << '\n';
}

void emit_csv(const RunResults &results, const std::string &prefix) {
    std::ofstream rows(prefix + ".rows.csv", std::ios::binary);
    if (!rows)
        throw std::runtime_error("cannot write " + prefix + ".rows.csv");
    emit_rows_csv(results, rows);
    std::ofstream agg(prefix + ".agg.csv", std::ios::binary);
    if (!agg)
        throw std::runtime_error("cannot write " + prefix + ".agg.csv");
    emit_aggregates_csv(results, agg);
    if (!rows || !agg)
        throw std::runtime_error("CSV write failed for prefix " + prefix);
}

} // namespace sofai::bench
