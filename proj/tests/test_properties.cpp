#include "properties.hpp"

#include <doctest.h>

using namespace necklace;

TEST_CASE("structural properties hold over a seeded corpus")
{
    for (std::uint32_t seed : {7u, 2026u}) {
        CAPTURE(seed);
        const auto entries = props::corpus(seed, 4, 1);
        const auto run = props::run_properties(entries);
        for (const auto& v : run.violations) {
            MESSAGE(v.spec << ": " << v.property << ": " << v.detail);
        }
        CHECK(run.violations.empty());
        CHECK(run.checks > 100);
        // Built-ins never hit a cap.
        for (const std::string& s : run.skipped) {
            CHECK(s.rfind("random", 0) == 0);
        }
    }
}

TEST_CASE("relabeling comparison catches a mismatched pair")
{
    // fig2 posing as a relabeling of the gasket: n differs, N2 differs.
    std::vector<props::CorpusEntry> entries{{"gasket", gasket_spec(), -1}, {"fake", fig2_spec(), 0}};
    const auto run = props::run_properties(entries, 1);
    REQUIRE(run.violations.size() == 1);
    CHECK(run.violations[0].property == "relabeling invariance");
}

TEST_CASE("random specs validate and are deterministic per seed")
{
    std::mt19937 a(11), b(11);
    const auto x = oracle::random_valid_specs(a, 5, 20000);
    const auto y = oracle::random_valid_specs(b, 5, 20000);
    REQUIRE(x.size() == 5);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i] == y[i]);
        CHECK(validate_spec(x[i], 6).pass);
    }
}
