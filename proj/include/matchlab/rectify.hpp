#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "matchlab/abelian.hpp"
#include "matchlab/caps.hpp"
#include "matchlab/matchcount.hpp"

namespace matchlab {

// The unique integer congruent to x mod p in (-p/2, p/2].
std::int64_t centered_rep(std::int64_t x, std::int64_t p);

// Injection of a subset X of Z/p into the integers that preserves every
// additive quadruple x+y = z+w. Realized by a dilation lambda whose images
// all lie in (-p/4, p/4), which forces the preservation; the quadruple
// property is nevertheless re-verified exhaustively at construction.
struct FreimanEmbedding {
    GSubset domain;   // X, over Z/p
    std::int64_t p = 0;
    std::int64_t lambda = 0;
    std::map<std::int64_t, std::int64_t> phi;  // residue -> integer image

    std::int64_t at_res(std::int64_t r) const;
    std::int64_t at(const GElem& e) const { return at_res(e.at(0)); }
    bool covers(const GSubset& s) const;
};

// Scans lambda = 1..p-1 for a dilation placing X in a short interval; the
// first hit wins. Absence is a valid answer (the search realizes a
// sufficient condition, not a necessary one).
std::optional<FreimanEmbedding> find_embedding(const GSubset& x);

// Greedy construction of a matching A -> B along the embedding order;
// splits B by sign, matches the phi-smallest block of A into the negative
// part. The result is re-verified to be a matching, and re-verified acyclic
// by enumeration when within caps; any failure raises soundness_error.
MatchingFn greedy_acyclic(const GSubset& a, const GSubset& b, const FreimanEmbedding& phi,
                          const Caps& caps = Caps{});

struct RectifyOutcome {
    std::optional<FreimanEmbedding> embedding;
    std::optional<MatchingFn> matching;
    std::string diagnostic;  // set when no embedding was found
};

// Rectify X = (A+B) u A u B u {0} and run the greedy construction. The
// embedding search is attempted regardless of any size hypothesis; it may
// succeed well beyond the guaranteed range.
RectifyOutcome acyclic_via_rectification(const GSubset& a, const GSubset& b,
                                         const Caps& caps = Caps{});

}  // namespace matchlab
