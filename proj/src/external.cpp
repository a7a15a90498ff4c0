#include "sofai/search.hpp"
#include "sofai/util.hpp"
#include "sofai/validator.hpp"

#include <json.hpp>

#include <chrono>
#include <csignal>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

namespace sofai::search {

namespace fs = std::filesystem;

ExternalPlanner load_external_descriptor(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read external planner descriptor: " + path);
    nlohmann::json j;
    in >> j;
    ExternalPlanner p;
    p.exec = j.at("exec").get<std::string>();
    for (auto &a : j.at("args"))
        p.args.push_back(a.get<std::string>());
    return p;
}

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        auto base = fs::temp_directory_path();
        for (int i = 0; i < 100; ++i) {
            auto candidate =
                base / ("sofai-ext-" + std::to_string(::getpid()) + "-" + std::to_string(i));
            std::error_code ec;
            if (fs::create_directory(candidate, ec)) {
                path = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temporary directory for external planner");
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
}

std::string substitute_placeholders(std::string arg, const std::string &domain,
                                    const std::string &problem, const std::string &planfile) {
    auto replace_all = [&arg](const std::string &from, const std::string &to) {
        for (std::size_t pos = 0; (pos = arg.find(from, pos)) != std::string::npos; pos += to.size())
            arg.replace(pos, from.size(), to);
    };
    replace_all("{domain}", domain);
    replace_all("{problem}", problem);
    replace_all("{planfile}", planfile);
    return arg;
}

} // namespace

S2Result solve_external(const ExternalPlanner &planner, const std::string &domain_text,
                        const std::string &problem_text, double deadline_s) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    if (::access(planner.exec.c_str(), X_OK) != 0)
        throw std::runtime_error("external planner executable not found: " + planner.exec);

    // validation task built from the same texts the planner sees
    Domain dom = parse_domain(domain_text);
    Instance inst = parse_instance(problem_text, dom);
    GroundedTask task = ground(dom, inst);

    TempDir tmp;
    const std::string domain_path = (tmp.path / "domain.pddl").string();
    const std::string problem_path = (tmp.path / "problem.pddl").string();
    const std::string plan_path = (tmp.path / "plan.txt").string();
    write_file(domain_path, domain_text);
    write_file(problem_path, problem_text);

    std::vector<std::string> argv_store;
    argv_store.push_back(planner.exec);
    for (auto &a : planner.args)
        argv_store.push_back(substitute_placeholders(a, domain_path, problem_path, plan_path));
    std::vector<char *> argv;
    for (auto &a : argv_store)
        argv.push_back(a.data());
    argv.push_back(nullptr);

    pid_t pid = ::fork();
    if (pid < 0)
        throw std::runtime_error("fork failed for external planner");
    if (pid == 0) {
        ::setpgid(0, 0);    // own process group, so the deadline kill reaps helpers too
        ::dup2(2, 1);       // planner chatter must not mix into our stdout
        ::execv(planner.exec.c_str(), argv.data());
        ::_exit(127);
    }

    S2Result result;
    auto finish = [&](S2Result::Outcome outcome, std::string diag = {}) {
        result.outcome = outcome;
        result.diagnostic = std::move(diag);
        result.stats.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
        return result;
    };

    int status = 0;
    bool exited = false;
    while (true) {
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            exited = true;
            break;
        }
        if (std::chrono::duration<double>(Clock::now() - t0).count() >= deadline_s) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!exited)
        return finish(S2Result::Outcome::timeout, "killed at deadline");

    std::ifstream plan_in(plan_path);
    if (!plan_in) {
        int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return finish(S2Result::Outcome::unsolvable,
                      "planner exited with code " + std::to_string(code) + " and no plan file");
    }
    std::stringstream buf;
    buf << plan_in.rdbuf();
    Plan plan = parse_plan_text(buf.str()); // throws on unparsable output

    Ratio c = correctness(task, plan);
    if (c != Ratio(1, 1))
        return finish(S2Result::Outcome::unsolvable,
                      "returned plan validates to correctness " + c.to_string());
    result.plan = std::move(plan);
    return finish(S2Result::Outcome::solved);
}

} // namespace sofai::search
