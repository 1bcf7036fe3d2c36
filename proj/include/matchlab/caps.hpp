#pragma once

#include <cstdint>

namespace matchlab {

// Resource ceilings for the exhaustive/exact algorithms. Exceeding a cap is
// always an error (cap_error), never a silent truncation or approximation.
struct Caps {
    // Max bipartite size k for full matching enumeration (k! worst case).
    int cap_enum = 12;
    // Max size k for the exact permanent (2^k inclusion-exclusion loop).
    int cap_perm = 24;
    // Max cardinality p^(m*n) of an ambient finite field.
    std::uint64_t cap_field = 1u << 20;
    // Max order of a GL(A) sweep in the linear acyclicity search.
    std::uint64_t cap_gl = 200000;
    // Max (A,B) pairs a sweep may visit before reporting a partial result.
    std::uint64_t pair_budget = 200000000ull;
};

}  // namespace matchlab
