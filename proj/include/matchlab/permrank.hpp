#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchlab/bigint.hpp"
#include "matchlab/errors.hpp"

namespace matchlab {

// Bijection on {0..k-1}.
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& s);
Permutation identity_perm(int k);
Permutation compose(const Permutation& outer, const Permutation& inner);  // outer(inner(i))
Permutation inverse_perm(const Permutation& s);

struct IntMatrix {
    int k = 0;
    std::vector<std::vector<std::int64_t>> a;

    static IntMatrix zero(int k) {
        return IntMatrix{k, std::vector<std::vector<std::int64_t>>(k, std::vector<std::int64_t>(k, 0))};
    }
};

IntMatrix perm_matrix(const Permutation& s);
IntMatrix transpose(const IntMatrix& m);
// 2I - P_alpha - P_beta; every row sums to zero.
IntMatrix theorem_matrix(const Permutation& alpha, const Permutation& beta);

int rank_mod_p(const IntMatrix& m, std::int64_t p);
// Exact rank over the rationals (fraction-free integer elimination).
int rank_rational(const IntMatrix& m);
// Kernel basis over F_p (vectors of residues), for nullity inspection.
std::vector<std::vector<std::int64_t>> kernel_mod_p(const IntMatrix& m, std::int64_t p);

// Exact determinant (Bareiss fraction-free elimination over big integers).
BigInt det_exact(const IntMatrix& m);

// Coefficient of t in det(tI - M): (-1)^(k-1) times the sum of the principal
// (k-1)x(k-1) minors.
BigInt t_coefficient(const IntMatrix& m);

// Number of orbits of the group generated by two permutations.
int orbit_count(const Permutation& alpha, const Permutation& beta);

struct NullityReport {
    int k = 0;
    std::int64_t p = 0;
    bool exhaustive = false;
    std::uint64_t pairs_checked = 0;
    std::uint64_t transitive_pairs = 0;  // pairs whose generated group has one orbit
    int min_rank = 0;
    int max_rank = 0;
    BigInt max_abs_t_coeff = 0;
    // rank over F_p equals k minus the orbit count for every pair; the
    // kernel is then exactly the span of the orbit indicator vectors, so no
    // vector with pairwise distinct entries lies in it.
    bool rank_matches_orbit_count = false;
    bool transitive_rank_k_minus_1 = false;  // rank k-1 on every transitive pair
    bool kernel_all_ones_when_transitive = false;
    bool t_nonzero_iff_transitive = false;
};

// Sweeps pairs of non-identity permutations (exhaustively for small k,
// sampled otherwise) and checks the kernel structure of 2I - P_a - P_b over
// F_p: rank k - #orbits, all-ones kernel on transitive pairs, and a nonzero
// linear characteristic coefficient exactly in the transitive case.
// Requires k * 2^(k-1) < p.
NullityReport nullity_property_check(int k, std::int64_t p, std::int64_t trials,
                                     std::optional<bool> exhaustive = {}, std::uint64_t seed = 1);

}  // namespace matchlab
