#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fpba {

struct SuiteOptions {
    std::uint64_t seed = 1;
    unsigned depth = 5;                  // trees
    std::size_t budget_generators = 40;  // realize
    unsigned threads = 0;                // 0: hardware concurrency
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    std::vector<std::string> failures;
    nlohmann::json details = nlohmann::json::object();
    double seconds = 0;

    bool pass() const { return failures.empty(); }
    nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(std::string_view name);
// Throws PreconditionError for an unknown name.
SuiteReport run_suite(std::string_view name, const SuiteOptions& opts = {});

SuiteReport suite_closed_form(const SuiteOptions& opts);
SuiteReport suite_surgery(const SuiteOptions& opts);
SuiteReport suite_ba_ext(const SuiteOptions& opts);
SuiteReport suite_trr_quotient(const SuiteOptions& opts);
SuiteReport suite_trees(const SuiteOptions& opts);
SuiteReport suite_chains(const SuiteOptions& opts);
SuiteReport suite_rigidity(const SuiteOptions& opts);

}  // namespace fpba
