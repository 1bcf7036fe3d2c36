#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "matchlab/abelian.hpp"

using namespace matchlab;

namespace {

// Independent quadruple-loop oracle for the Sidon property.
bool sidon_brute(const GSubset& b) {
    const int k = b.size();
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            for (int z = 0; z < k; ++z)
                for (int w = 0; w < k; ++w) {
                    if (add(b.group, b.elems[x], b.elems[y]) != add(b.group, b.elems[z], b.elems[w]))
                        continue;
                    if (x != z && x != w && y != z && y != w) return false;
                }
    return true;
}

GSubset random_subset(const GroupSpec& g, int k, std::mt19937_64& rng) {
    std::vector<std::int64_t> idx(g.cardinality());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<GElem> es;
    for (int i = 0; i < k; ++i) es.push_back(g.elem_of(idx[i]));
    return GSubset::of(g, std::move(es));
}

}  // namespace

TEST_CASE("group spec validation") {
    CHECK_THROWS_AS(GroupSpec({1}), input_error);
    CHECK_THROWS_AS(GroupSpec(std::vector<std::int64_t>{}), input_error);
    CHECK_THROWS_AS(GroupSpec({1 << 16, 1 << 16, 2}), input_error);  // above the 2^31 cap
    GroupSpec g({2, 3});
    CHECK(g.cardinality() == 6);
    CHECK(g.exponent() == 6);
    CHECK(GroupSpec::cyclic(7).is_cyclic_prime());
    CHECK_FALSE(GroupSpec::cyclic(6).is_cyclic_prime());
    CHECK_FALSE(GroupSpec({7, 7}).is_cyclic_prime());
}

TEST_CASE("element arithmetic") {
    GroupSpec z7 = GroupSpec::cyclic(7);
    CHECK(add(z7, {3}, {5}) == GElem{1});
    CHECK(scalar_mul(z7, 2, {4}) == GElem{1});
    GroupSpec g({2, 3});
    CHECK(neg(g, {1, 2}) == GElem({1, 1}));
    CHECK(scalar_mul(g, -1, {1, 2}) == GElem({1, 1}));
    CHECK(add(z7, {3}, neg(z7, {3})) == z7.zero());
    CHECK_THROWS_AS(add(z7, {3}, {7}), input_error);       // not reduced
    CHECK_THROWS_AS(add(g, {1, 1}, GElem{1}), input_error);  // rank mismatch
    CHECK(scalar_mul(z7, 2, {4}) == add(z7, {4}, {4}));
}

TEST_CASE("element index round trip") {
    GroupSpec g({2, 3, 5});
    for (std::int64_t i = 0; i < g.cardinality(); ++i) CHECK(g.index_of(g.elem_of(i)) == i);
}

TEST_CASE("subset canonicalization") {
    GroupSpec z7 = GroupSpec::cyclic(7);
    GSubset s = GSubset::of_residues(z7, {4, 1, 2});
    CHECK(s.elems == std::vector<GElem>({{1}, {2}, {4}}));
    CHECK(s.contains({2}));
    CHECK_FALSE(s.contains({3}));
    CHECK_THROWS_AS(GSubset::of_residues(z7, {1, 1}), input_error);
    CHECK_THROWS_AS(GSubset::of_residues(z7, {7}), input_error);
}

TEST_CASE("sumset and dilate") {
    GroupSpec z7 = GroupSpec::cyclic(7);
    GSubset a = GSubset::of_residues(z7, {1, 2});
    GSubset b = GSubset::of_residues(z7, {0, 3});
    CHECK(sumset(a, b) == GSubset::of_residues(z7, {1, 2, 4, 5}));
    GSubset zero = GSubset::of_residues(z7, {0});
    GSubset s = GSubset::of_residues(z7, {1, 2, 4});
    CHECK(sumset(s, zero) == s);
    CHECK(dilate(2, s) == s);  // the doubling orbit is 2-invariant
    CHECK(dilate(1, s) == s);
    GroupSpec z6 = GroupSpec::cyclic(6);
    CHECK_THROWS_AS(sumset(a, GSubset::of_residues(z6, {1})), input_error);
}

TEST_CASE("sumset properties on random subsets") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        GroupSpec g = trial % 2 ? GroupSpec({2, 5}) : GroupSpec::cyclic(9);
        GSubset a = random_subset(g, 3, rng);
        GSubset b = random_subset(g, 2, rng);
        GSubset c = random_subset(g, 2, rng);
        CHECK(sumset(a, b) == sumset(b, a));
        CHECK(sumset(sumset(a, b), c) == sumset(a, sumset(b, c)));
    }
}

TEST_CASE("dilate by a unit permutes subsets") {
    GroupSpec g = GroupSpec::cyclic(10);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        GSubset a = random_subset(g, 4, rng);
        for (std::int64_t m : {1, 3, 7, 9}) {  // units mod 10
            CHECK(dilate(m, a).size() == a.size());
        }
        CHECK(dilate(3, a) == dilate(3 + 10, a));
    }
}

TEST_CASE("cauchy-davenport examples") {
    GroupSpec z13 = GroupSpec::cyclic(13);
    GSubset a = GSubset::of_residues(z13, {0, 1, 2});
    GSubset b = GSubset::of_residues(z13, {0, 5, 10});
    CHECK(sumset(a, b).size() == 9);
    CHECK(cauchy_davenport_holds(a, b));
    GroupSpec z5 = GroupSpec::cyclic(5);
    GSubset all5 = GSubset::of_residues(z5, {0, 1, 2, 3, 4});
    CHECK(cauchy_davenport_holds(all5, all5));
    GroupSpec z7 = GroupSpec::cyclic(7);
    CHECK(cauchy_davenport_holds(GSubset::of_residues(z7, {1}), GSubset::of_residues(z7, {2})));
    GroupSpec z6 = GroupSpec::cyclic(6);
    CHECK_THROWS_AS(
        cauchy_davenport_holds(GSubset::of_residues(z6, {1}), GSubset::of_residues(z6, {2})),
        input_error);
}

TEST_CASE("cauchy-davenport exhaustive for small primes") {
    for (std::int64_t p : {2, 3, 5, 7}) {
        GroupSpec g = GroupSpec::cyclic(p);
        const std::uint32_t full = (1u << p) - 1;
        for (std::uint32_t am = 1; am <= full; ++am) {
            std::vector<std::int64_t> ar;
            for (int i = 0; i < p; ++i)
                if ((am >> i) & 1) ar.push_back(i);
            GSubset a = GSubset::of_residues(g, ar);
            for (std::uint32_t bm = 1; bm <= full; ++bm) {
                std::vector<std::int64_t> br;
                for (int i = 0; i < p; ++i)
                    if ((bm >> i) & 1) br.push_back(i);
                CHECK(cauchy_davenport_holds(a, GSubset::of_residues(g, br)));
            }
        }
    }
}

TEST_CASE("sidon examples") {
    GroupSpec z20 = GroupSpec::cyclic(20);
    CHECK(is_sidon(GSubset::of_residues(z20, {1, 2, 4, 8})));
    GroupSpec z10 = GroupSpec::cyclic(10);
    CHECK_FALSE(is_sidon(GSubset::of_residues(z10, {0, 1, 2, 3})));  // 0+3 = 1+2
    CHECK(is_sidon(GSubset::of_residues(z10, {3})));
    CHECK(is_sidon(GSubset::from_sorted_unique(z10, {})));
}

TEST_CASE("sidon agrees with the quadruple brute force") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        GroupSpec g = trial % 2 ? GroupSpec::cyclic(12) : GroupSpec({3, 4});
        GSubset b = random_subset(g, 2 + trial % 5, rng);
        CHECK(is_sidon(b) == sidon_brute(b));
    }
}

TEST_CASE("element order and cyclic subgroup") {
    GroupSpec z6 = GroupSpec::cyclic(6);
    CHECK(element_order(z6, {2}) == 3);
    CHECK(cyclic_subgroup(z6, {2}) == GSubset::of_residues(z6, {0, 2, 4}));
    GroupSpec z7 = GroupSpec::cyclic(7);
    CHECK(element_order(z7, {0}) == 1);
    GroupSpec g({2, 3});
    CHECK(element_order(g, {1, 1}) == 6);
    for (std::int64_t i = 0; i < g.cardinality(); ++i)
        CHECK(g.cardinality() % element_order(g, g.elem_of(i)) == 0);
}
