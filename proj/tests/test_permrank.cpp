#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "matchlab/permrank.hpp"

using namespace matchlab;

namespace {

// Independent route to the t coefficient: evaluate det(tI - M) at k+1
// integer points and interpolate the characteristic polynomial exactly.
BigInt t_coeff_by_interpolation(const IntMatrix& m) {
    const int k = m.k;
    // Lagrange interpolation over t = 0..k; the coefficient of t is the sum
    // of q(t_i) * w_i with exact rational weights. We use the Newton forward
    // form instead, which stays integral: finite differences at 0..k.
    std::vector<BigInt> vals;
    for (int t = 0; t <= k; ++t) {
        IntMatrix shifted = m;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) shifted.a[i][j] = -shifted.a[i][j];
        for (int i = 0; i < k; ++i) shifted.a[i][i] += t;
        vals.push_back(det_exact(shifted));
    }
    // Newton form: q(t) = sum_j D_j * C(t, j), D_j the j-th forward difference.
    std::vector<std::vector<BigInt>> diff{vals};
    for (int lvl = 1; lvl <= k; ++lvl) {
        std::vector<BigInt> next;
        for (size_t i = 0; i + 1 < diff.back().size(); ++i)
            next.push_back(diff.back()[i + 1] - diff.back()[i]);
        diff.push_back(next);
    }
    // C(t, j) = t(t-1)...(t-j+1)/j!; expand to get the linear coefficient.
    // coefficient of t in C(t, j) is (-1)^(j-1) (j-1)! / j! = (-1)^(j-1)/j,
    // so coeff_1 = sum_j D_j * (-1)^(j-1) / j (exact division overall).
    // To stay in integers, expand the falling factorials explicitly.
    std::vector<BigInt> poly(k + 2, 0);  // coefficients of q
    std::vector<BigInt> falling{1};      // coefficients of t(t-1)...(t-j+1)
    BigInt jfact = 1;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) {
            // falling *= (t - (j-1))
            std::vector<BigInt> nf(falling.size() + 1, 0);
            for (size_t i = 0; i < falling.size(); ++i) {
                nf[i + 1] += falling[i];
                nf[i] -= falling[i] * (j - 1);
            }
            falling = nf;
            jfact *= j;
        }
        // contribution D_j / j! * falling; accumulate numerators over a
        // common factorial, divide at the end
        for (size_t i = 0; i < falling.size(); ++i) {
            BigInt scaled = diff[j][0] * falling[i];
            // multiply by (k! / j!) to use k! as the common denominator
            BigInt mult = 1;
            for (int v = j + 1; v <= k; ++v) mult *= v;
            poly[i] += scaled * mult;
        }
    }
    BigInt kfact = 1;
    for (int v = 2; v <= k; ++v) kfact *= v;
    return poly[1] / kfact;
}

Permutation random_perm(int k, std::mt19937_64& rng) {
    Permutation s = identity_perm(k);
    std::shuffle(s.begin(), s.end(), rng);
    return s;
}

}  // namespace

TEST_CASE("permutation helpers") {
    CHECK(is_permutation({2, 0, 1}));
    CHECK_FALSE(is_permutation({0, 0, 1}));
    CHECK(compose({1, 2, 0}, {2, 0, 1}) == Permutation({0, 1, 2}));
    CHECK(inverse_perm({1, 2, 0}) == Permutation({2, 0, 1}));
}

TEST_CASE("permutation matrices") {
    CHECK(perm_matrix(identity_perm(3)).a == IntMatrix{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}.a);
    Permutation c3{1, 2, 0};
    // transpose of P is the matrix of the inverse permutation
    CHECK(transpose(perm_matrix(c3)).a == perm_matrix(inverse_perm(c3)).a);

    IntMatrix zero = theorem_matrix(identity_perm(3), identity_perm(3));
    for (const auto& row : zero.a)
        for (auto v : row) CHECK(v == 0);

    IntMatrix m = theorem_matrix(c3, c3);
    for (const auto& row : m.a) {
        std::int64_t sum = 0;
        for (auto v : row) sum += v;
        CHECK(sum == 0);  // rows of 2I - P - P' always sum to zero
    }
}

TEST_CASE("rank over F_p") {
    Permutation c3{1, 2, 0};
    IntMatrix m = theorem_matrix(c3, c3);  // 2(I - P)
    CHECK(rank_mod_p(m, 13) == 2);
    CHECK(rank_mod_p(m, 2) == 0);  // all entries even
    IntMatrix eye = perm_matrix(identity_perm(4));
    CHECK(rank_mod_p(eye, 5) == 4);
    CHECK_THROWS_AS(rank_mod_p(eye, 6), input_error);
}

TEST_CASE("rational rank follows the orbit count") {
    // The kernel of 2I - P_a - P_b is spanned by the indicator vectors of
    // the orbits of <a, b>: rank is k minus the orbit count, and k-1 exactly
    // in the transitive case.
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        int k = 2 + trial % 4;
        Permutation a = random_perm(k, rng), b = random_perm(k, rng);
        if (a == identity_perm(k) || b == identity_perm(k)) continue;
        CHECK(rank_rational(theorem_matrix(a, b)) == k - orbit_count(a, b));
    }
    // a shared fixed point drops the rank below k-1
    Permutation swap01{1, 0, 2};
    CHECK(orbit_count(swap01, swap01) == 2);
    CHECK(rank_rational(theorem_matrix(swap01, swap01)) == 1);
}

TEST_CASE("t coefficient") {
    CHECK(t_coefficient(IntMatrix::zero(2)) == 0);
    Permutation c3{1, 2, 0};
    // eigenvalues of 2(I - P) are 0, 2(1-w), 2(1-w^2): q(t) = t^3 - 6t^2 + 12t
    CHECK(t_coefficient(theorem_matrix(c3, c3)) == 12);
    // 1x1 edge: det(t - a) has linear coefficient 1
    IntMatrix one{1, {{5}}};
    CHECK(t_coefficient(one) == 1);
}

TEST_CASE("t coefficient agrees with interpolation") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 1 + trial % 5;
        IntMatrix m = IntMatrix::zero(k);
        std::uniform_int_distribution<std::int64_t> entry(-3, 3);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m.a[i][j] = entry(rng);
        CHECK(t_coefficient(m) == t_coeff_by_interpolation(m));
    }
    std::mt19937_64 rng2(32);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 2 + trial % 3;
        IntMatrix m = theorem_matrix(random_perm(k, rng2), random_perm(k, rng2));
        CHECK(t_coefficient(m) == t_coeff_by_interpolation(m));
    }
}

TEST_CASE("t coefficient bound for non-identity pairs") {
    for (int k = 2; k <= 4; ++k) {
        const Permutation id = identity_perm(k);
        std::vector<Permutation> perms;
        Permutation s = id;
        do {
            if (s != id) perms.push_back(s);
        } while (std::next_permutation(s.begin(), s.end()));
        const BigInt bound = BigInt(k) * (BigInt(1) << (k - 1));
        for (const auto& a : perms)
            for (const auto& b : perms) {
                BigInt t = t_coefficient(theorem_matrix(a, b));
                // nonzero exactly when <a, b> is transitive
                CHECK((t != 0) == (orbit_count(a, b) == 1));
                if (t < 0) t = -t;
                CHECK(t <= bound);
            }
    }
}

TEST_CASE("kernel over F_p") {
    Permutation c3{1, 2, 0};
    auto basis = kernel_mod_p(theorem_matrix(c3, c3), 13);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == basis[0][1]);
    CHECK(basis[0][1] == basis[0][2]);
    CHECK(basis[0][0] != 0);
}

TEST_CASE("pair sweep reports") {
    NullityReport r3 = nullity_property_check(3, 13, 0);
    CHECK(r3.exhaustive);
    CHECK(r3.pairs_checked == 25);       // (3! - 1)^2
    CHECK(r3.transitive_pairs == 22);    // all but the three (swap, same swap) pairs
    CHECK(r3.min_rank == 1);             // those three pairs have two orbits
    CHECK(r3.max_rank == 2);
    CHECK(r3.rank_matches_orbit_count);
    CHECK(r3.transitive_rank_k_minus_1);
    CHECK(r3.kernel_all_ones_when_transitive);
    CHECK(r3.t_nonzero_iff_transitive);
    CHECK(r3.max_abs_t_coeff <= 12);

    NullityReport r2 = nullity_property_check(2, 5, 0);
    CHECK(r2.pairs_checked == 1);  // only the swap
    CHECK(r2.min_rank == 1);
    CHECK(r2.transitive_pairs == 1);

    NullityReport r4 = nullity_property_check(4, 37, 200, false);
    CHECK_FALSE(r4.exhaustive);
    CHECK(r4.pairs_checked == 200);
    CHECK(r4.rank_matches_orbit_count);
    CHECK(r4.transitive_rank_k_minus_1);
    CHECK(r4.kernel_all_ones_when_transitive);
    CHECK(r4.t_nonzero_iff_transitive);

    CHECK_THROWS_AS(nullity_property_check(3, 11, 10), input_error);  // 3*4 = 12 >= 11
    CHECK_THROWS_AS(nullity_property_check(3, 14, 10), input_error);  // not prime
}

TEST_CASE("sampled sweep is deterministic in the seed") {
    NullityReport a = nullity_property_check(4, 37, 50, false, 7);
    NullityReport b = nullity_property_check(4, 37, 50, false, 7);
    CHECK(a.max_abs_t_coeff == b.max_abs_t_coeff);
}
