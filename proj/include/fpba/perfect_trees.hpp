#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace fpba {

// Strings over {0,1} are std::string of '0'/'1'; η ∈ 2^m likewise.
enum class BandOrder {
    Repaired,   // the no-split band of stage s carries all s+1 bits of η
    AsPrinted,  // the band carries the parent's s bits, padded with one 0
};

struct TreeData {
    std::vector<std::size_t> w;         // W_η, sorted
    std::vector<std::string> branches;  // maximal members of U_η, all of length k(lg η)
    bool operator==(const TreeData&) const = default;
};

struct PerfectTreeFamily {
    unsigned depth = 0;
    BandOrder order = BandOrder::Repaired;
    std::vector<std::size_t> k;                    // k(0..depth)
    std::vector<std::size_t> k1;                   // k¹(0..depth-1)
    std::vector<std::vector<std::size_t>> w_star;  // W_m(*) for m ≤ depth
    std::map<std::string, TreeData> trees;         // every η with lg η ≤ depth

    const TreeData& tree(const std::string& eta) const;
    // U_η as a prefix-closed set.
    std::set<std::string> nodes(const std::string& eta) const;
    PerfectTreeFamily truncated(unsigned m) const;
    nlohmann::json to_json() const;

    bool operator==(const PerfectTreeFamily&) const = default;
};

inline constexpr unsigned max_tree_depth = 7;

PerfectTreeFamily build_family(unsigned depth, BandOrder order = BandOrder::Repaired);

struct TreeCheck {
    std::string name;
    bool pass = true;
    std::size_t checked = 0;
    std::string violation;  // first failure
};

struct WindowStat {
    unsigned stage = 0;
    std::size_t begin = 0, end = 0;  // [k¹(s), k(s+1))
    std::size_t min_splits = 0, max_splits = 0;
};

struct TreeReport {
    std::vector<TreeCheck> checks;  // A, B, C, D, E, F(a), F(b), F(c), coherence
    std::vector<WindowStat> windows;
    // incomparable cross pairs by clause; comparable meets are all clause (c)
    std::size_t clause_a = 0, clause_b = 0, comparable_meets = 0, multiple_clauses = 0;
    bool pass() const;
    const TreeCheck& check(const std::string& name) const;
    nlohmann::json to_json() const;
};

TreeReport verify_family(const PerfectTreeFamily& f);

// Members of U_η of length `horizon` (k(lg η) when horizon is npos).
std::vector<std::string> branches(const PerfectTreeFamily& f, const std::string& eta,
                                  std::size_t horizon = std::string::npos);

}  // namespace fpba
