#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "matchlab/acyclic.hpp"
#include "matchlab/matchcount.hpp"

using namespace matchlab;

namespace {

// Permutation-sum permanent, independent of the inclusion-exclusion path.
BigInt permanent_naive(const BitMatrix& m) {
    std::vector<int> cols(m.k);
    for (int i = 0; i < m.k; ++i) cols[i] = i;
    BigInt total = 0;
    std::sort(cols.begin(), cols.end());
    do {
        bool ok = true;
        for (int i = 0; i < m.k && ok; ++i) ok = m.get(i, cols[i]);
        if (ok) ++total;
    } while (std::next_permutation(cols.begin(), cols.end()));
    if (m.k == 0) total = 1;
    return total;
}

BitMatrix random_matrix(int k, double density, std::mt19937_64& rng) {
    BitMatrix m = BitMatrix::zero(k);
    std::bernoulli_distribution bit(density);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (bit(rng)) m.set(i, j);
    return m;
}

BitMatrix ones(int k) {
    BitMatrix m = BitMatrix::zero(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m.set(i, j);
    return m;
}

BitMatrix eye(int k) {
    BitMatrix m = BitMatrix::zero(k);
    for (int i = 0; i < k; ++i) m.set(i, i);
    return m;
}

BitMatrix ones_minus_eye(int k) {
    BitMatrix m = ones(k);
    for (int i = 0; i < k; ++i) m.rows[i] &= ~(1u << i);
    return m;
}

}  // namespace

TEST_CASE("biadjacency construction") {
    GroupSpec z7 = GroupSpec::cyclic(7);
    GSubset s = GSubset::of_residues(z7, {1, 2, 4});
    Biadjacency big = build_bigraph(s, s);
    CHECK(big.mat.rows == ones_minus_eye(3).rows);

    // a + 0 = a stays in A: the column of b = 0 is all zeros.
    GSubset b0 = GSubset::of_residues(z7, {0, 3, 5});
    Biadjacency withzero = build_bigraph(s, b0);
    for (int i = 0; i < 3; ++i) CHECK_FALSE(withzero.mat.get(i, 0));

    // A disjoint from A+B: every bijection is a matching, all entries 1.
    GroupSpec z20 = GroupSpec::cyclic(20);
    GSubset a = GSubset::of_residues(z20, {0, 5, 10});
    GSubset b = GSubset::of_residues(z20, {1, 2, 4});
    CHECK(build_bigraph(a, b).mat.rows == ones(3).rows);

    CHECK_THROWS_AS(build_bigraph(s, GSubset::of_residues(z7, {1, 2})), input_error);
}

TEST_CASE("perfect matching search") {
    CHECK(has_perfect_matching(eye(3)));
    CHECK(find_perfect_matching(eye(3))->sigma == std::vector<int>({0, 1, 2}));

    // Z/11, subsets of size 3 avoiding 0 always match.
    GroupSpec z11 = GroupSpec::cyclic(11);
    GSubset a = GSubset::of_residues(z11, {0, 1, 2});
    GSubset b = GSubset::of_residues(z11, {3, 7, 9});
    CHECK(has_perfect_matching(build_bigraph(a, b).mat));

    // Subgroup obstruction: A = <2> in Z/6 against B containing 2.
    GroupSpec z6 = GroupSpec::cyclic(6);
    GSubset sub = GSubset::of_residues(z6, {0, 2, 4});
    GSubset bb = GSubset::of_residues(z6, {1, 2, 3});
    CHECK_FALSE(has_perfect_matching(build_bigraph(sub, bb).mat));
    CHECK_FALSE(find_perfect_matching(build_bigraph(sub, bb).mat).has_value());
}

TEST_CASE("subgroup obstruction across a small corpus") {
    // An element g of order 1 < t < #G: the cyclic subgroup cannot match any
    // B of size t containing g, since a + g stays inside the subgroup.
    for (const GroupSpec& g : {GroupSpec::cyclic(4), GroupSpec::cyclic(6), GroupSpec({2, 2}),
                               GroupSpec({2, 3}), GroupSpec::cyclic(9)}) {
        for (std::int64_t gi = 0; gi < g.cardinality(); ++gi) {
            GElem gen = g.elem_of(gi);
            std::int64_t t = element_order(g, gen);
            if (t <= 1 || t >= g.cardinality()) continue;
            GSubset a = cyclic_subgroup(g, gen);
            // all B of size t with g in B, 0 not in B
            std::vector<GElem> pool;
            for (std::int64_t i = 0; i < g.cardinality(); ++i) {
                GElem e = g.elem_of(i);
                if (e != gen && e != g.zero()) pool.push_back(e);
            }
            const int need = static_cast<int>(t) - 1;
            std::vector<int> pick(need);
            std::function<void(int, int)> rec = [&](int start, int chosen) {
                if (chosen == need) {
                    std::vector<GElem> bs{gen};
                    for (int i = 0; i < need; ++i) bs.push_back(pool[pick[i]]);
                    GSubset b = GSubset::of(g, bs);
                    CHECK_FALSE(has_perfect_matching(build_bigraph(a, b).mat));
                    return;
                }
                for (int i = start; i < static_cast<int>(pool.size()); ++i) {
                    pick[chosen] = i;
                    rec(i + 1, chosen + 1);
                }
            };
            rec(0, 0);
        }
    }
}

TEST_CASE("matching enumeration") {
    EnumerationResult two = enumerate_matchings(ones_minus_eye(3));
    REQUIRE(two.matchings.size() == 2);  // the two 3-cycles
    CHECK(two.matchings[0].sigma == std::vector<int>({1, 2, 0}));
    CHECK(two.matchings[1].sigma == std::vector<int>({2, 0, 1}));
    CHECK_FALSE(two.truncated);

    CHECK(enumerate_matchings(eye(4)).matchings.size() == 1);

    BitMatrix zr = ones(3);
    zr.rows[1] = 0;
    CHECK(enumerate_matchings(zr).matchings.empty());

    EnumerationResult lim = enumerate_matchings(ones(4), 5);
    CHECK(lim.matchings.size() == 5);
    CHECK(lim.truncated);
    EnumerationResult exact = enumerate_matchings(ones(4), 24);
    CHECK(exact.matchings.size() == 24);
    CHECK_FALSE(exact.truncated);

    Caps tight;
    tight.cap_enum = 3;
    CHECK_THROWS_AS(enumerate_matchings(ones(4), {}, tight), cap_error);
}

TEST_CASE("enumeration is lexicographic") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        BitMatrix m = random_matrix(4 + trial % 2, 0.6, rng);
        auto r = enumerate_matchings(m);
        for (size_t i = 1; i < r.matchings.size(); ++i)
            CHECK(r.matchings[i - 1].sigma < r.matchings[i].sigma);
    }
}

TEST_CASE("permanent basics") {
    CHECK(permanent(eye(3)) == 1);
    CHECK(permanent(ones(3)) == 6);
    CHECK(permanent(ones_minus_eye(3)) == 2);  // derangements of 3
    CHECK(permanent(BitMatrix::zero(0)) == 1);
    Caps tight;
    tight.cap_perm = 3;
    CHECK_THROWS_AS(permanent(ones(4), tight), cap_error);
}

TEST_CASE("permanent agrees with the permutation-sum oracle") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int k = 1 + trial % 7;
        BitMatrix m = random_matrix(k, 0.2 + 0.1 * (trial % 7), rng);
        CHECK(permanent(m) == permanent_naive(m));
    }
}

TEST_CASE("permanent counts matchings exactly") {
    GroupSpec z8 = GroupSpec::cyclic(8);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 120; ++trial) {
        int k = 1 + trial % 4;
        std::vector<std::int64_t> idx{1, 2, 3, 4, 5, 6, 7};
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<std::int64_t> ar(idx.begin(), idx.begin() + k);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<std::int64_t> br(idx.begin(), idx.begin() + k);
        Biadjacency big = build_bigraph(GSubset::of_residues(z8, ar), GSubset::of_residues(z8, br));
        BigInt per = permanent(big.mat);
        auto en = enumerate_matchings(big.mat);
        CHECK(per == BigInt(en.matchings.size()));
        CHECK(has_perfect_matching(big.mat) == (per > 0));
        CHECK(en.matchings.empty() == (per == 0));
    }
}

TEST_CASE("bounds on the worked examples") {
    PermanentBounds b = bounds(ones_minus_eye(3));
    CHECK(b.bregman_minc_upper == doctest::Approx(2.8284271).epsilon(1e-6));
    CHECK(b.ostrand_lower == 0);

    PermanentBounds tight = bounds(ones(4));
    CHECK(tight.bregman_minc_upper == doctest::Approx(24.0));
    CHECK(tight.ostrand_lower == 24);
    CHECK(tight.row_or_col_choice == BoundSide::row);  // tie reports "row"

    BitMatrix zr = ones(3);
    zr.rows[1] = 0;
    PermanentBounds degenerate = bounds(zr);
    CHECK(degenerate.bregman_minc_upper == 0.0);
    CHECK(degenerate.ostrand_lower == 0);
}

TEST_CASE("bound sandwich on random matrices") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 400; ++trial) {
        int k = 1 + trial % 8;
        BitMatrix m = random_matrix(k, 0.15 + 0.1 * (trial % 8), rng);
        BigInt per = permanent(m);
        PermanentBounds b = bounds(m);
        CHECK(b.ostrand_lower <= per);
        CHECK(per.convert_to<double>() <= b.bregman_minc_upper * (1 + 1e-9) + 1e-9);
    }
}

TEST_CASE("degree profile") {
    BitMatrix m = ones_minus_eye(3);
    DegreeProfile d = degree_profile(m);
    CHECK(d.row_sums == std::vector<int>({2, 2, 2}));
    CHECK(d.col_sums == std::vector<int>({2, 2, 2}));
}

TEST_CASE("regular lower bound") {
    CHECK(vdw_lower(3, 2) == doctest::Approx(48.0 / 27.0));
    CHECK(permanent(ones_minus_eye(3)) >= BigInt(1));  // 2 >= 1.777...
    CHECK(vdw_lower(4, 4) == doctest::Approx(24.0));
    CHECK(vdw_lower(3, 1) == doctest::Approx(6.0 / 27.0));
    CHECK_THROWS_AS(vdw_lower(3, 0), input_error);
    CHECK_THROWS_AS(vdw_lower(3, 4), input_error);
}

TEST_CASE("counting matchings with a prescribed multiplicity") {
    GroupSpec z7 = GroupSpec::cyclic(7);
    GSubset s = GSubset::of_residues(z7, {1, 2, 4});
    MultiplicityFn m;
    m.counts[{3}] = 1;
    m.counts[{5}] = 1;
    m.counts[{6}] = 1;
    CHECK(count_with_multiplicity(s, s, m) == 2);  // both 3-cycles realize {3,5,6}

    MultiplicityFn unreal;
    unreal.counts[{0}] = 3;
    CHECK(count_with_multiplicity(s, s, unreal) == 0);

    // any realized multiplicity is counted at least once
    auto en = enumerate_matchings(build_bigraph(s, s).mat);
    for (const MatchingFn& f : en.matchings)
        CHECK(count_with_multiplicity(s, s, multiplicity(s, s, f)) >= 1);

    MultiplicityFn bad;
    bad.counts[{3}] = 1;
    CHECK_THROWS_AS(count_with_multiplicity(s, s, bad), input_error);  // mass mismatch
}
