#include "sofai/retrieval.hpp"

#include "sofai/util.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace sofai {

std::string to_string(S1Kind k) {
    switch (k) {
    case S1Kind::jaccard:
        return "jac";
    case S1Kind::levenshtein:
        return "lev";
    case S1Kind::mix:
        return "mix";
    case S1Kind::rng:
        return "rng";
    }
    return "?";
}

std::optional<S1Kind> s1_kind_from_string(const std::string &name) {
    if (name == "jac")
        return S1Kind::jaccard;
    if (name == "lev")
        return S1Kind::levenshtein;
    if (name == "mix")
        return S1Kind::mix;
    if (name == "rng")
        return S1Kind::rng;
    return std::nullopt;
}

std::vector<std::string> encode_set(const Instance &inst) {
    std::vector<std::string> out;
    out.reserve(inst.init.size() + inst.goal.size());
    for (auto &a : inst.init)
        out.push_back("init:" + render_atom(a));
    for (auto &g : inst.goal)
        out.push_back("goal:" + render_literal(g));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string encode_string(const Instance &inst) {
    std::vector<std::string> init, goal;
    for (auto &a : inst.init)
        init.push_back(render_atom(a));
    for (auto &g : inst.goal)
        goal.push_back(render_literal(g));
    std::sort(init.begin(), init.end());
    std::sort(goal.begin(), goal.end());
    std::string out;
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (i)
            out.push_back('|');
        out += init[i];
    }
    out += "||";
    for (std::size_t i = 0; i < goal.size(); ++i) {
        if (i)
            out.push_back('|');
        out += goal[i];
    }
    return out;
}

double jaccard(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    if (a.empty() && b.empty())
        return 1.0;
    std::size_t i = 0, j = 0, inter = 0, uni = 0;
    while (i < a.size() && j < b.size()) {
        ++uni;
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    uni += (a.size() - i) + (b.size() - j);
    return static_cast<double>(inter) / static_cast<double>(uni);
}

int levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size())
        std::swap(a, b);
    std::vector<int> row(a.size() + 1);
    for (std::size_t i = 0; i <= a.size(); ++i)
        row[i] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
        int diag = row[0];
        row[0] = static_cast<int>(j);
        for (std::size_t i = 1; i <= a.size(); ++i) {
            int up = row[i];
            int subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[i] = std::min({row[i - 1] + 1, up + 1, subst});
            diag = up;
        }
    }
    return row[a.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
    std::size_t denom = std::max({a.size(), b.size(), std::size_t{1}});
    return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

S1Proposal retrieve(const CaseMemory &mem, const std::string &domain_name, const Instance &inst,
                    S1Kind kind, std::uint64_t rng_seed) {
    const auto t0 = std::chrono::steady_clock::now();
    S1Proposal out;
    auto done = [&]() {
        out.retrieval_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };

    const auto query_set = encode_set(inst);
    const auto query_string = encode_string(inst);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < mem.records().size(); ++i)
        if (mem.records()[i].domain_name == domain_name)
            candidates.push_back(i);
    if (candidates.empty())
        return done();

    std::size_t chosen = candidates[0];
    double best = -1.0;

    if (kind == S1Kind::rng) {
        std::mt19937_64 rng(rng_seed);
        chosen = candidates[rng() % candidates.size()];
        best = jaccard(query_set, mem.records()[chosen].formula_set);
    } else {
        for (std::size_t i : candidates) {
            const CaseRecord &r = mem.records()[i];
            double score = 0.0;
            switch (kind) {
            case S1Kind::jaccard:
                score = jaccard(query_set, r.formula_set);
                break;
            case S1Kind::levenshtein:
                score = levenshtein_similarity(query_string, r.string_encoding);
                break;
            case S1Kind::mix:
                score = std::max(jaccard(query_set, r.formula_set),
                                 levenshtein_similarity(query_string, r.string_encoding));
                break;
            case S1Kind::rng:
                break;
            }
            if (score > best) { // strict: ties keep the earliest record
                best = score;
                chosen = i;
            }
        }
    }

    out.plan = mem.records()[chosen].plan;
    out.confidence = best;
    out.source_record = chosen;
    return done();
}

} // namespace sofai
