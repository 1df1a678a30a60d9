#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpba/errors.hpp"
#include "fpba/suites.hpp"

using namespace fpba;

TEST_CASE("fast suites pass") {
    SuiteOptions opts;
    opts.depth = 4;
    for (const char* name : {"surgery", "ba-ext", "trees", "chains", "rigidity"}) {
        auto r = run_suite(name, opts);
        CHECK_MESSAGE(r.pass(), name << ": " << (r.failures.empty() ? "" : r.failures.front()));
        CHECK(r.instances > 0);
        CHECK(r.to_json()["suite"] == name);
    }
}

TEST_CASE("suite names") {
    CHECK(suite_names().size() == 7);
    for (const auto& n : suite_names()) CHECK(is_suite(n));
    CHECK_FALSE(is_suite("nope"));
    CHECK_THROWS_AS(run_suite("nope"), PreconditionError);
}

TEST_CASE("reports are reproducible for a fixed seed") {
    SuiteOptions opts;
    opts.seed = 17;
    auto a = run_suite("chains", opts), b = run_suite("chains", opts);
    CHECK(a.instances == b.instances);
    CHECK(a.details == b.details);
}
