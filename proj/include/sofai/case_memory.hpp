#pragma once

#include "sofai/ratio.hpp"
#include "sofai/strips.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sofai {

enum class SystemUsed { S1, S2 };

std::string to_string(SystemUsed s);

class MemoryError : public std::runtime_error {
  public:
    explicit MemoryError(const std::string &msg, std::optional<std::size_t> record = {})
        : std::runtime_error(msg), record_index(record) {}
    std::optional<std::size_t> record_index;
};

// One solved instance, as remembered by the architecture.
struct CaseRecord {
    std::string domain_name;
    std::string instance_fingerprint;      // hash of string_encoding
    std::vector<std::string> formula_set;  // sorted "init:..."/"goal:..." strings
    std::string string_encoding;           // "|"-separated canonical encoding
    Plan plan;
    SystemUsed system = SystemUsed::S2;
    int difficulty = 0;
    double wall_time_s = 0.0;
    int total_goals = 1;
    int solved_goals = 0;

    Ratio correctness() const { return Ratio(solved_goals, total_goals); }
    bool operator==(const CaseRecord &) const = default;
};

// Append-only store of solved instances. One writer at a time; the line
// format below is the on-disk contract.
class CaseMemory {
  public:
    static constexpr std::string_view header = "SOFAI-MEM v1";

    // Throws MemoryError when the record violates its invariants
    // (ratio out of range, or an S2 record with correctness != 1).
    void append(CaseRecord r);

    const std::vector<CaseRecord> &records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    // Records for a domain in insertion order, optionally filtered by system.
    std::vector<const CaseRecord *> solved_instances(const std::string &domain_name,
                                                     std::optional<SystemUsed> system = {}) const;

    // Mean wall time of S2-solved records in the same difficulty bucket.
    // Falls back to the nearest bucket with S2 data (ties toward the smaller
    // bucket), then to 0 when no S2 timing exists at all.
    double avg_t_from_diff(int difficulty) const;

    void save(const std::filesystem::path &path) const;
    static CaseMemory load(const std::filesystem::path &path);

    bool operator==(const CaseMemory &) const = default;

  private:
    std::vector<CaseRecord> records_;
};

// FNV-1a over the canonical string encoding, rendered as 16 hex digits.
std::string fingerprint(const std::string &string_encoding);

} // namespace sofai
