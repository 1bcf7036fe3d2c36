#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "matchlab/abelian.hpp"
#include "matchlab/bigint.hpp"
#include "matchlab/caps.hpp"
#include "matchlab/multiplicity.hpp"

namespace matchlab {

// Square 0/1 matrix with rows kept as bit masks (bit j of rows[i] = entry i,j).
struct BitMatrix {
    int k = 0;
    std::vector<std::uint32_t> rows;

    static BitMatrix zero(int k) { return BitMatrix{k, std::vector<std::uint32_t>(k, 0)}; }
    bool get(int i, int j) const { return (rows[i] >> j) & 1u; }
    void set(int i, int j) { rows[i] |= (1u << j); }
};

// Bipartite graph on A u B with a_i ~ b_j iff a_i + b_j lies outside A,
// encoded by its biadjacency matrix. Row/column order is the canonical
// (sorted) order of the two subsets.
struct Biadjacency {
    BitMatrix mat;
    GSubset a, b;
};

// A bijection A -> B given as sigma with a_i -> b_{sigma[i]}; every selected
// entry of the biadjacency matrix is 1.
struct MatchingFn {
    std::vector<int> sigma;
    bool operator==(const MatchingFn& o) const { return sigma == o.sigma; }
    bool operator<(const MatchingFn& o) const { return sigma < o.sigma; }
};

struct DegreeProfile {
    std::vector<int> row_sums;  // #B_a per a in A
    std::vector<int> col_sums;  // #A_b per b in B
};

enum class BoundSide { row, col };

struct PermanentBounds {
    double bregman_minc_upper = 0.0;
    BigInt ostrand_lower = 0;
    BoundSide row_or_col_choice = BoundSide::row;  // which product attains the upper bound
};

struct EnumerationResult {
    std::vector<MatchingFn> matchings;
    bool truncated = false;
};

Biadjacency build_bigraph(const GSubset& a, const GSubset& b);

bool has_perfect_matching(const BitMatrix& m);
std::optional<MatchingFn> find_perfect_matching(const BitMatrix& m);

// Visits all permutations supported on 1-entries in lexicographic order on
// sigma. Return false from the visitor to stop early.
void for_each_matching(const BitMatrix& m, const std::function<bool(const std::vector<int>&)>& visit,
                       const Caps& caps = Caps{});

EnumerationResult enumerate_matchings(const BitMatrix& m, std::optional<std::int64_t> limit = {},
                                      const Caps& caps = Caps{});

// Exact permanent by inclusion-exclusion over column subsets with Gray-code
// row-sum updates; arbitrary-precision accumulation.
BigInt permanent(const BitMatrix& m, const Caps& caps = Caps{});

DegreeProfile degree_profile(const BitMatrix& m);

// Row-sum upper bound (minimum of the row and column products, with the
// empty-degree convention giving zero) and greedy factorial-style lower bound
// (maximum of the row and column variants).
PermanentBounds bounds(const BitMatrix& m);

// r^k * k! / k^k, the doubly-stochastic-scaling lower bound for an r-regular
// 0/1 matrix. Regularity is the caller's responsibility.
double vdw_lower(int k, int r);

// Number of matchings A -> B whose realized-sum multiset equals m.
BigInt count_with_multiplicity(const GSubset& a, const GSubset& b, const MultiplicityFn& m,
                               const Caps& caps = Caps{});

}  // namespace matchlab
