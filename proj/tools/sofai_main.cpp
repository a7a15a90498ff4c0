#include "sofai/bench.hpp"
#include "sofai/case_memory.hpp"
#include "sofai/metacog.hpp"
#include "sofai/retrieval.hpp"
#include "sofai/search.hpp"
#include "sofai/strips.hpp"
#include "sofai/validator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitOptOut = 2;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct ParamFlags {
    std::string A = "0.5";
    long long T1 = 20;
    long long T2 = 20;
    double T3 = 0.6;
    double epsilon = 0.1;

    sofai::metacog::MetaParams to_params() const {
        sofai::metacog::MetaParams p;
        p.A = sofai::Ratio::from_decimal(A);
        p.T1 = T1;
        p.T2 = T2;
        p.T3 = T3;
        p.epsilon = epsilon;
        p.validate();
        return p;
    }
};

void add_param_flags(CLI::App *cmd, ParamFlags &flags) {
    cmd->add_option("--A", flags.A, "Acceptable correctness threshold (exact decimal)")
        ->capture_default_str();
    cmd->add_option("--T1", flags.T1, "Minimum domain experience count")->capture_default_str();
    cmd->add_option("--T2", flags.T2, "Minimum S1-usage count for accountability")
        ->capture_default_str();
    cmd->add_option("--T3", flags.T3, "Risk aversion in [0,1]")->capture_default_str();
    cmd->add_option("--epsilon", flags.epsilon, "Exploration scale in [0,1]")
        ->capture_default_str();
}

sofai::CaseMemory load_memory_or_empty(const std::string &path) {
    if (path.empty() || !std::filesystem::exists(path))
        return {};
    return sofai::CaseMemory::load(path);
}

int run_solve(const std::string &domain_path, const std::string &problem_path,
              const std::string &memory_path, double tl, const std::string &config,
              const ParamFlags &flags, std::uint64_t seed, const std::string &external_path,
              const std::string &out_path) {
    const std::string domain_text = read_file(domain_path);
    const std::string problem_text = read_file(problem_path);
    sofai::Domain dom = sofai::parse_domain(domain_text);
    sofai::Instance inst = sofai::parse_instance(problem_text, dom);

    sofai::metacog::S2Fn s2;
    if (!external_path.empty()) {
        auto planner = sofai::search::load_external_descriptor(external_path);
        s2 = [planner, domain_text, problem_text](const sofai::GroundedTask &, double deadline,
                                                  const std::atomic<bool> *) {
            return sofai::search::solve_external(planner, domain_text, problem_text, deadline);
        };
    }

    std::string plan_text;
    std::ostringstream report;
    bool solved = false;

    if (config == "s2") {
        sofai::GroundedTask task = sofai::ground(dom, inst);
        sofai::search::S2Result result;
        if (s2)
            result = s2(task, tl, nullptr);
        else {
            sofai::search::SearchConfig cfg;
            cfg.deadline_s = tl;
            cfg.node_limit = sofai::metacog::default_s2_node_limit;
            result = sofai::search::solve(task, cfg);
        }
        solved = result.solved();
        if (solved) {
            plan_text = sofai::render_plan(result.plan);
            report << "; system: S2\n";
            report << "; correctness: "
                   << fixed6(sofai::correctness(task, result.plan).to_double()) << "\n";
        }
        report << "; branch: s2-only\n";
        std::cerr << "wall_time_s: " << result.stats.wall_s << "\n";
        std::cerr << "nodes_expanded: " << result.stats.expanded << "\n";
    } else {
        auto kind = sofai::s1_kind_from_string(config);
        if (!kind)
            throw CLI::ValidationError("--config", "unknown configuration '" + config + "'");
        sofai::CaseMemory mem = load_memory_or_empty(memory_path);
        sofai::metacog::SolveOptions opts;
        opts.s2 = s2;
        sofai::metacog::SolveOutcome outcome =
            sofai::metacog::solve(dom, inst, tl, flags.to_params(), mem, *kind, seed, opts);
        solved = outcome.solved();
        if (solved) {
            plan_text = sofai::render_plan(outcome.plan);
            report << "; system: " << sofai::to_string(outcome.system_used) << "\n";
            report << "; correctness: " << fixed6(outcome.correctness.to_double()) << "\n";
        }
        report << "; branch: " << sofai::metacog::to_string(outcome.trace.branch) << "\n";
        if (solved && !memory_path.empty())
            mem.save(memory_path);
        std::cerr << "wall_time_s: " << outcome.wall_time_s << "\n";
        std::cerr << "s1_retrieval_s: " << outcome.trace.elapsed_s1 << "\n";
    }

    std::cout << plan_text << report.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << plan_text << report.str();
        if (!out)
            throw std::runtime_error("cannot write " + out_path);
    }
    return solved ? kExitOk : kExitOptOut;
}

int run_validate(const std::string &domain_path, const std::string &problem_path,
                 const std::string &plan_path) {
    sofai::Domain dom = sofai::parse_domain(read_file(domain_path));
    sofai::Instance inst = sofai::parse_instance(read_file(problem_path), dom);
    sofai::GroundedTask task = sofai::ground(dom, inst);
    sofai::Plan plan = sofai::parse_plan_text(read_file(plan_path));

    sofai::ExecutionTrace trace = sofai::execute(task, plan);
    std::cout << "steps: " << plan.size() << "\n";
    std::cout << "executed_prefix: " << trace.executed_prefix << "\n";
    if (trace.truncated_at)
        std::cout << "truncated_at: step " << trace.truncated_at->first << " ("
                  << trace.truncated_at->second << ")\n";
    std::cout << "satisfied_goals: " << trace.satisfied_goals << "/" << trace.total_goals << "\n";
    std::cout << "correctness: "
              << fixed6(sofai::Ratio(trace.satisfied_goals, trace.total_goals).to_double()) << "\n";
    return kExitOk;
}

int run_bench(const std::string &blocks, double tl, const std::string &configs, std::uint64_t seed,
              int seed_count, const ParamFlags &flags, const std::string &out_prefix) {
    sofai::bench::SuiteSpec spec;
    spec.seed = seed;
    spec.tl_s = tl;
    spec.memory_seed_count = seed_count;
    spec.params = flags.to_params();

    std::stringstream bs(blocks);
    std::string part;
    while (std::getline(bs, part, ',')) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--blocks", "expected n:count pairs, e.g. 4:50,5:50");
        spec.blocks_counts.emplace_back(std::stoi(part.substr(0, colon)),
                                        std::stoi(part.substr(colon + 1)));
    }
    std::stringstream cs(configs);
    while (std::getline(cs, part, ',')) {
        auto c = sofai::bench::config_from_string(part);
        if (!c)
            throw CLI::ValidationError("--configs", "unknown configuration '" + part + "'");
        spec.configs.push_back(*c);
    }
    if (spec.blocks_counts.empty() || spec.configs.empty())
        throw CLI::ValidationError("bench", "need at least one block size and one config");

    sofai::bench::RunResults results = sofai::bench::run_suite(spec);
    sofai::bench::emit_csv(results, out_prefix);
    for (auto &agg : results.aggregates)
        std::cout << agg.config << ": solved=" << agg.solved
                  << " mean_time_s=" << fixed6(agg.mean_time_s)
                  << " mean_corr=" << fixed6(agg.mean_corr) << " s1_calls=" << agg.s1_calls
                  << "\n";
    std::cout << "wrote " << out_prefix << ".rows.csv and " << out_prefix << ".agg.csv\n";
    return kExitOk;
}

int run_mem(const std::string &memory_path) {
    sofai::CaseMemory mem = sofai::CaseMemory::load(memory_path);
    std::map<std::string, std::map<std::string, int>> counts;
    std::map<int, std::pair<double, int>> buckets;
    for (auto &r : mem.records()) {
        ++counts[r.domain_name][sofai::to_string(r.system)];
        if (r.system == sofai::SystemUsed::S2) {
            buckets[r.difficulty].first += r.wall_time_s;
            ++buckets[r.difficulty].second;
        }
    }
    std::cout << "records: " << mem.size() << "\n";
    for (auto &[domain, by_system] : counts) {
        std::cout << domain << ":";
        for (auto &[system, count] : by_system)
            std::cout << " " << system << "=" << count;
        std::cout << "\n";
    }
    for (auto &[bucket, acc] : buckets)
        std::cout << "difficulty " << bucket << ": mean_s2_time_s=" << fixed6(acc.first / acc.second)
                  << " records=" << acc.second << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dual-process planner: case-based retrieval (S1) arbitrated against "
                 "deliberate search (S2) under a time budget"};
    app.require_subcommand(1);

    // solve
    auto *solve = app.add_subcommand("solve", "Solve one instance");
    std::string domain_path, problem_path, memory_path, config = "jac", external_path, out_path;
    double tl = 60.0;
    std::uint64_t seed = 0;
    ParamFlags flags;
    solve->add_option("--domain", domain_path, "Domain file (PDDL subset)")->required();
    solve->add_option("--problem", problem_path, "Problem file (PDDL subset)")->required();
    solve->add_option("--memory", memory_path, "Case memory file (created when missing)");
    solve->add_option("--tl", tl, "Time limit in seconds")->capture_default_str();
    solve->add_option("--config", config, "Solver configuration: s2|jac|lev|mix|rng")
        ->capture_default_str();
    add_param_flags(solve, flags);
    solve->add_option("--seed", seed, "Random seed")->capture_default_str();
    solve->add_option("--external", external_path, "External planner descriptor (JSON)");
    solve->add_option("--out", out_path, "Also write the report to this file");

    // validate
    auto *validate = app.add_subcommand("validate", "Execute a plan and report goal satisfaction");
    std::string v_domain, v_problem, v_plan;
    validate->add_option("--domain", v_domain, "Domain file")->required();
    validate->add_option("--problem", v_problem, "Problem file")->required();
    validate->add_option("--plan", v_plan, "Plan file, one (name args) step per line")->required();

    // bench
    auto *bench = app.add_subcommand("bench", "Run a benchmark sweep and emit CSVs");
    std::string blocks = "4:50,5:50", configs = "s2,jac,lev,mix,rng", out_prefix = "results";
    double b_tl = 60.0;
    std::uint64_t b_seed = 0;
    int seed_count = 25;
    ParamFlags b_flags;
    bench->add_option("--blocks", blocks, "Comma-separated n:count pairs")->capture_default_str();
    bench->add_option("--tl", b_tl, "Per-instance time limit in seconds")->capture_default_str();
    bench->add_option("--configs", configs, "Comma-separated configuration list")
        ->capture_default_str();
    bench->add_option("--seed", b_seed, "Suite seed")->capture_default_str();
    bench->add_option("--seed-count", seed_count, "Solved instances preloaded into memory")
        ->capture_default_str();
    add_param_flags(bench, b_flags);
    bench->add_option("--out", out_prefix, "Output prefix for CSV files")->capture_default_str();

    // mem
    auto *mem = app.add_subcommand("mem", "Inspect a case memory file");
    std::string m_path;
    mem->add_option("--memory", m_path, "Case memory file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (solve->parsed())
            return run_solve(domain_path, problem_path, memory_path, tl, config, flags, seed,
                             external_path, out_path);
        if (validate->parsed())
            return run_validate(v_domain, v_problem, v_plan);
        if (bench->parsed())
            return run_bench(blocks, b_tl, configs, b_seed, seed_count, b_flags, out_prefix);
        if (mem->parsed())
            return run_mem(m_path);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
