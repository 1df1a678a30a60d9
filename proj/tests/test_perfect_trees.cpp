#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fpba/errors.hpp"
#include "fpba/perfect_trees.hpp"
#include "oracles.hpp"

using namespace fpba;

namespace {
std::size_t meet_length(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
}

bool contains(const std::vector<std::size_t>& xs, std::size_t x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }
}  // namespace

TEST_CASE("level markers match the hand computation") {
    auto f = build_family(2);
    REQUIRE(f.k.size() == 3);
    for (std::size_t s = 0; s < oracle::hand_k.size(); ++s) CHECK(f.k[s] == oracle::hand_k[s]);
    auto g = build_family(3);
    REQUIRE(g.k1.size() == 3);
    for (std::size_t s = 0; s < oracle::hand_k1.size(); ++s) CHECK(g.k1[s] == oracle::hand_k1[s]);
    CHECK(f.w_star[0].empty());
    CHECK(contains(f.w_star[1], 0));
    CHECK_THROWS_AS(build_family(max_tree_depth + 1), BudgetExceeded);
}

TEST_CASE("small families pass every check") {
    for (unsigned d = 0; d <= 4; ++d) {
        auto f = build_family(d);
        auto r = verify_family(f);
        for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, "depth " << d << " " << c.name << ": " << c.violation);
    }
}

TEST_CASE("direct re-check of splitting, disjointness and coherence") {
    auto f = build_family(4);
    for (const auto& [eta, t] : f.trees) {
        for (auto w : t.w) CHECK_FALSE(contains(f.w_star[f.depth], w));
        for (std::size_t i = 0; i < t.branches.size(); ++i) {
            CHECK(t.branches[i].size() == f.k[eta.size()]);
            for (std::size_t j = i + 1; j < t.branches.size(); ++j)
                CHECK(contains(t.w, meet_length(t.branches[i], t.branches[j])));
        }
        if (eta.empty()) continue;
        const auto parent = eta.substr(0, eta.size() - 1);
        const auto bound = f.k[parent.size()];
        std::vector<std::size_t> low;
        for (auto w : t.w)
            if (w < bound) low.push_back(w);
        CHECK(low == f.tree(parent).w);
        std::set<std::string> cut;
        for (const auto& b : t.branches) cut.insert(b.substr(0, bound));
        CHECK(std::set<std::string>(f.tree(parent).branches.begin(), f.tree(parent).branches.end()) == cut);
    }
}

TEST_CASE("corrupting a marker is caught") {
    auto f = build_family(3);
    auto& t = f.trees.at("01");
    REQUIRE(t.branches.size() >= 2);
    const auto split = meet_length(t.branches[0], t.branches[1]);
    t.w.erase(std::find(t.w.begin(), t.w.end(), split));
    auto r = verify_family(f);
    CHECK_FALSE(r.check("C").pass);
    CHECK_FALSE(r.pass());
}

TEST_CASE("cross-tree meets fall into exactly one clause") {
    auto r = verify_family(build_family(3));
    CHECK(r.check("D").pass);
    CHECK(r.multiple_clauses == 0);
    CHECK(r.clause_a + r.clause_b > 0);
    CHECK(r.comparable_meets > 0);

    auto printed = verify_family(build_family(3, BandOrder::AsPrinted));
    CHECK_FALSE(printed.check("D").pass);
}

TEST_CASE("branches") {
    auto f = build_family(4);
    for (const auto& [eta, t] : f.trees) {
        auto b = branches(f, eta);
        CHECK(b.size() >= (std::size_t{1} << eta.size()));
        CHECK(b == t.branches);
    }
    auto f0 = build_family(0);
    CHECK(branches(f0, "") == std::vector<std::string>{""});

    // truncating the horizon keeps prefixes
    auto shorter = branches(f, "0110", f.k[2]);
    for (const auto& s : shorter) CHECK(s.size() == f.k[2]);
}

TEST_CASE("determinism and depth monotonicity") {
    CHECK(build_family(5) == build_family(5));
    CHECK(build_family(5).to_json() == build_family(5).to_json());
    for (unsigned d = 0; d < 5; ++d) CHECK(build_family(d + 1).truncated(d) == build_family(d));
}
