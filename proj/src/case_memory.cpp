#include "sofai/case_memory.hpp"

#include "sofai/util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace sofai {

std::string to_string(SystemUsed s) { return s == SystemUsed::S1 ? "S1" : "S2"; }

std::string fingerprint(const std::string &string_encoding) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(string_encoding)));
    return buf;
}

namespace {

void check_invariants(const CaseRecord &r, std::optional<std::size_t> index) {
    if (r.total_goals < 1)
        throw MemoryError("record has total_goals < 1", index);
    if (r.solved_goals < 0 || r.solved_goals > r.total_goals)
        throw MemoryError("record has solved_goals outside [0, total_goals]", index);
    if (r.system == SystemUsed::S2 && r.solved_goals != r.total_goals)
        throw MemoryError("S2 record must have correctness 1", index);
    if (r.wall_time_s < 0 || !std::isfinite(r.wall_time_s))
        throw MemoryError("record has invalid wall time", index);
}

std::string join(const std::vector<std::string> &items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out.push_back(sep);
        out += items[i];
    }
    return out;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(text.substr(pos));
            break;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

// %.17g round-trips doubles exactly
std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

constexpr int kFieldCount = 10;

std::string encode_record(const CaseRecord &r) {
    std::vector<std::string> fields = {
        r.domain_name,
        r.instance_fingerprint,
        to_string(r.system),
        std::to_string(r.difficulty),
        format_time(r.wall_time_s),
        std::to_string(r.solved_goals),
        std::to_string(r.total_goals),
        r.string_encoding,
        join(r.formula_set, ';'),
        join(r.plan.steps, ';'),
    };
    return join(fields, '\t');
}

CaseRecord decode_record(const std::string &line, std::size_t index) {
    auto fields = split(line, '\t');
    if (fields.size() != kFieldCount)
        throw MemoryError("corrupted record " + std::to_string(index) + ": expected " +
                              std::to_string(kFieldCount) + " fields, got " +
                              std::to_string(fields.size()),
                          index);
    CaseRecord r;
    r.domain_name = fields[0];
    r.instance_fingerprint = fields[1];
    if (fields[2] == "S1")
        r.system = SystemUsed::S1;
    else if (fields[2] == "S2")
        r.system = SystemUsed::S2;
    else
        throw MemoryError("corrupted record " + std::to_string(index) + ": bad system '" +
                              fields[2] + "'",
                          index);
    try {
        r.difficulty = std::stoi(fields[3]);
        r.wall_time_s = std::stod(fields[4]);
        r.solved_goals = std::stoi(fields[5]);
        r.total_goals = std::stoi(fields[6]);
    } catch (const std::exception &) {
        throw MemoryError("corrupted record " + std::to_string(index) + ": bad numeric field",
                          index);
    }
    r.string_encoding = fields[7];
    if (!fields[8].empty())
        r.formula_set = split(fields[8], ';');
    if (!fields[9].empty())
        r.plan.steps = split(fields[9], ';');
    check_invariants(r, index);
    return r;
}

} // namespace

void CaseMemory::append(CaseRecord r) {
    check_invariants(r, std::nullopt);
    records_.push_back(std::move(r));
}

std::vector<const CaseRecord *> CaseMemory::solved_instances(const std::string &domain_name,
                                                             std::optional<SystemUsed> system) const {
    std::vector<const CaseRecord *> out;
    for (auto &r : records_)
        if (r.domain_name == domain_name && (!system || r.system == *system))
            out.push_back(&r);
    return out;
}

double CaseMemory::avg_t_from_diff(int difficulty) const {
    // bucket -> (sum, count) over S2 records; memories stay small
    std::map<int, std::pair<double, int>> buckets;
    for (auto &r : records_)
        if (r.system == SystemUsed::S2) {
            auto &[sum, count] = buckets[r.difficulty];
            sum += r.wall_time_s;
            ++count;
        }
    if (buckets.empty())
        return 0.0;
    auto best = buckets.begin();
    for (auto it = buckets.begin(); it != buckets.end(); ++it) {
        int d_it = std::abs(it->first - difficulty);
        int d_best = std::abs(best->first - difficulty);
        if (d_it < d_best || (d_it == d_best && it->first < best->first))
            best = it;
    }
    return best->second.first / best->second.second;
}

void CaseMemory::save(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw MemoryError("cannot write memory file: " + path.string());
    out << header << '\n';
    for (auto &r : records_)
        out << encode_record(r) << '\n';
    if (!out)
        throw MemoryError("write failed: " + path.string());
}

CaseMemory CaseMemory::load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MemoryError("cannot read memory file: " + path.string());
    CaseMemory mem;
    std::string line;
    if (!std::getline(in, line))
        return mem; // empty file -> empty memory
    if (line != header)
        throw MemoryError("memory file version mismatch: got '" + line + "', expected '" +
                          std::string(header) + "'");
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        mem.records_.push_back(decode_record(line, index));
        ++index;
    }
    return mem;
}

} // namespace sofai
