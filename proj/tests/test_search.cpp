#include <doctest.h>

#include "helpers.hpp"
#include "lumpbn/checkers.hpp"
#include "lumpbn/errors.hpp"
#include "lumpbn/search.hpp"

using namespace lumpbn;
using namespace testutil;

TEST_CASE("bell numbers") {
    CHECK(bell_number(0) == 1);
    CHECK(bell_number(2) == 2);
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(5) == 52);
    CHECK(bell_number(6) == 203);
}

TEST_CASE("partition iterator matches bell counts and RGS invariants") {
    for (int n = 2; n <= 6; ++n) {
        PartitionIterator it(n);
        std::uint64_t count = 0;
        do {
            ++count;
            const auto& rgs = it.current();
            CHECK(rgs[0] == 0);
            int max = 0;
            for (std::size_t i = 1; i < rgs.size(); ++i) {
                CHECK(rgs[i] <= max + 1);
                max = std::max(max, rgs[i]);
            }
        } while (it.advance());
        CHECK(count == bell_number(n));
    }
}

TEST_CASE("enumerate_lumpings counts") {
    const BayesNet net = simple_ex();  // |A| = 3
    CHECK(enumerate_lumpings(net, true).size() == 4);
    EnumerateOptions with_trivial;
    with_trivial.include_trivial = true;
    CHECK(enumerate_lumpings(net, true, with_trivial).size() == 5);
    EnumerateOptions capped;
    capped.max_classes = 1;
    CHECK(enumerate_lumpings(net, true, capped).size() == 1);
    EnumerateOptions tight;
    tight.partition_budget = 2;
    CHECK_THROWS_AS(enumerate_lumpings(net, true, tight), ModelTooLarge);
}

TEST_CASE("per-vertex enumeration is the product space") {
    const BayesNet net = simple_ex();
    EnumerateOptions with_trivial;
    with_trivial.include_trivial = true;
    // Bell(3)^2 combinations
    CHECK(enumerate_lumpings(net, false, with_trivial).size() == 25);
    CHECK(enumerate_lumpings(net, false).size() == 24);
}

TEST_CASE("search_valid_lumpings filters by the checker") {
    const BayesNet ks = chain3(ks_matrix(), uniform3());
    const auto found = search_valid_lumpings(ks, Property::D3, true);
    bool has_merge12 = false;
    for (const auto& [l, rep] : found) {
        CHECK(rep.holds());
        if (l.map[0] == std::vector<int>{0, 0, 1}) has_merge12 = true;
    }
    CHECK(has_merge12);

    const BayesNet bad = chain3(not_d1_matrix(), uniform3());
    for (const auto& [l, rep] : search_valid_lumpings(bad, Property::D1, true)) {
        CHECK(l.map[0] != std::vector<int>{0, 0, 1});
    }
}

TEST_CASE("counterexample search on the 3-chain") {
    const Dag chain({"v1", "v2", "v3"}, {{"v1", "v2"}, {"v2", "v3"}});
    const Lumping l = merge12(3);
    const auto found = find_d1_counterexample(chain, abc(), l, {});
    REQUIRE(found.has_value());
    CHECK(found->second.fails());
    // the emitted net re-checks as a D1 failure
    CHECK(check_d1(found->first, l).fails());
}

TEST_CASE("counterexample search on the 3-fork") {
    const Dag fork({"v1", "v2", "v3"}, {{"v1", "v2"}, {"v1", "v3"}});
    const auto found = find_d1_counterexample(fork, abc(), merge12(3), {});
    REQUIRE(found.has_value());
    CHECK(check_d1(found->first, merge12(3)).fails());
}

TEST_CASE("counterexample search is deterministic given the seed") {
    const Dag chain({"v1", "v2", "v3"}, {{"v1", "v2"}, {"v2", "v3"}});
    CounterexampleOptions opts;
    opts.seed = 42;
    const auto a = find_d1_counterexample(chain, abc(), merge12(3), opts);
    const auto b = find_d1_counterexample(chain, abc(), merge12(3), opts);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(joint(a->first) == joint(b->first));
}

TEST_CASE("counterexample preconditions") {
    // v-structure only: not applicable
    const Dag vee({"v1", "v2", "v3"}, {{"v1", "v3"}, {"v2", "v3"}});
    CHECK_THROWS_AS(find_d1_counterexample(vee, abc(), merge12(3), {}),
                    StructuralPreconditionViolated);
    // disconnected
    const Dag disc({"v1", "v2", "v3"}, {{"v1", "v2"}});
    CHECK_THROWS_AS(find_d1_counterexample(disc, abc(), merge12(3), {}),
                    StructuralPreconditionViolated);
    // all-to-one target is not allowed (|B| must exceed 1)
    const Dag chain({"v1", "v2", "v3"}, {{"v1", "v2"}, {"v2", "v3"}});
    const Lumping one = Lumping::shared(
        std::vector<Alphabet>(3, abc()), {{"a1", "b"}, {"a2", "b"}, {"a3", "b"}});
    CHECK_THROWS_AS(find_d1_counterexample(chain, abc(), one, {}),
                    StructuralPreconditionViolated);
}
