#pragma once

#include "sofai/case_memory.hpp"
#include "sofai/strips.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sofai {

enum class S1Kind { jaccard, levenshtein, mix, rng };

std::string to_string(S1Kind k);
std::optional<S1Kind> s1_kind_from_string(const std::string &name);

// A retrieved plan plus the retrieving solver's confidence in it.
struct S1Proposal {
    Plan plan;                 // empty when the same-domain memory is empty
    double confidence = 0.0;   // in [0,1]; 0 when nothing was retrieved
    std::optional<std::size_t> source_record;
    double retrieval_time_s = 0.0;
};

// Sorted set of canonical atom strings tagged "init:" / "goal:", with goal
// polarity rendered as "goal:not(...)".
std::vector<std::string> encode_set(const Instance &inst);

// Sorted init atoms then sorted goal literals, "|"-joined with a "||"
// divider between the two sections.
std::string encode_string(const Instance &inst);

// |A ∩ B| / |A ∪ B| over sorted string sets; 1 when both are empty.
double jaccard(const std::vector<std::string> &a, const std::vector<std::string> &b);

// Minimum insert/delete/substitute edits.
int levenshtein(std::string_view a, std::string_view b);

// 1 - d / max(|a|, |b|, 1), in [0,1].
double levenshtein_similarity(std::string_view a, std::string_view b);

// Case-based retrieval over same-domain records. Jaccard and Levenshtein
// score every record and return the argmax (ties to the earliest record);
// mix scores each record with the better of the two similarities; rng picks
// a record uniformly under the seed and reports its Jaccard similarity as
// confidence.
S1Proposal retrieve(const CaseMemory &mem, const std::string &domain_name, const Instance &inst,
                    S1Kind kind, std::uint64_t rng_seed);

} // namespace sofai
