#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "matchlab/abelian.hpp"
#include "matchlab/caps.hpp"
#include "matchlab/matchcount.hpp"
#include "matchlab/multiplicity.hpp"

namespace matchlab {

// Exact realized-sum counts of a matching; throws if f is not a valid
// matching for (A, B).
MultiplicityFn multiplicity(const GSubset& a, const GSubset& b, const MatchingFn& f);
GSubset support(const GSubset& a, const GSubset& b, const MatchingFn& f);

struct AcyclicCheck {
    bool acyclic = false;
    // On a negative answer: another matching with the same multiplicity.
    std::optional<MatchingFn> witness;
};

// A matching is acyclic when no other matching shares its multiplicity
// function; decided by exhaustive enumeration within caps.
AcyclicCheck is_acyclic(const GSubset& a, const GSubset& b, const MatchingFn& f,
                        const Caps& caps = Caps{});

// Enumerates matchings, groups them by multiplicity function and returns the
// lexicographically least sigma among singleton classes, if any.
std::optional<MatchingFn> find_acyclic_matching(const GSubset& a, const GSubset& b,
                                                const Caps& caps = Caps{});

// The doubling orbit {1, 2, 4, ...} of 2 modulo an odd prime whose
// multiplicative order is odd. Such a set is invariant under doubling and of
// odd size, which forces every self-matching to share its multiplicity
// function with a distinct inverse; it admits no acyclic self-matching.
GSubset jafari_set(std::int64_t p);

struct IdentityAcyclicReport {
    bool is_matching = false;              // A and 2A disjoint
    bool guaranteed = false;               // additionally k * 2^(k-1) < p
    std::optional<bool> verified;          // exhaustive check when within caps
};

IdentityAcyclicReport identity_acyclic(const GSubset& a, const Caps& caps = Caps{});

// Under #A = #B, A disjoint from A+B, and B Sidon, an acyclic matching is
// guaranteed to exist; failing to find one within caps is a soundness error.
MatchingFn sidon_acyclic_search(const GSubset& a, const GSubset& b, const Caps& caps = Caps{});

// B = {1, 2, ..., 2^(k-1)} and A = {a + i*(2^(k-1)+1)} in Z/n; postconditions
// (disjoint sumset, Sidon B) are re-verified on every construction.
std::pair<GSubset, GSubset> geometric_example(std::int64_t n, int k, const GElem& a);

// A matching presented together with its subsets.
struct LabeledMatching {
    GSubset a, b;
    MatchingFn f;
};

// The unique matching shape at #A = #B = #G - 1: A = G \ {g1}, B = G \ {0},
// a -> g1 - a.
LabeledMatching max_size_matchings(const GroupSpec& g, const GElem& g1);

// Parameters determining a matching G\{g1,g2} -> G\{0,g3}. The second block
// B2 is the progression {g3 + i*(g2-g1) : i = 1..l} together with any number
// of full cosets of <g2-g1> avoiding 0 and g3 (full_cosets holds their
// minimal representatives). Over Z/p the subgroup is everything, no coset is
// available, and l alone determines the matching; in groups with torsion a
// coset can close up on itself and must be accounted for.
struct TwoDeficientMatching {
    GElem g1, g2, g3;
    std::int64_t l = 0;
    std::vector<GElem> full_cosets;
};

std::vector<TwoDeficientMatching> two_deficient_matchings(const GroupSpec& g, const GElem& g1,
                                                          const GElem& g2, const GElem& g3,
                                                          const Caps& caps = Caps{});
LabeledMatching expand_two_deficient(const GroupSpec& g, const TwoDeficientMatching& td);

struct WeakSweepOptions {
    bool require_sidon = false;  // additionally restrict to Sidon B
    int jobs = 1;
    Caps caps{};
};

struct WeakSweepReport {
    std::int64_t n = 0;
    int k_max = 0;
    bool holds = true;
    bool completed = true;          // false when the pair budget stopped the sweep
    int k_explored = 0;             // largest subset size fully swept
    std::uint64_t pairs_seen = 0;   // (A,B) pairs visited
    std::uint64_t eligible_pairs = 0;
    std::optional<std::pair<GSubset, GSubset>> counterexample;
};

// Sweeps all pairs A, B in Z/n with #A = #B <= k_max and A disjoint from
// A+B, requiring an acyclic matching for each; reports the first failure in
// the deterministic order (k, B, A).
WeakSweepReport weak_acyclic_property(std::int64_t n, int k_max,
                                      const WeakSweepOptions& opt = WeakSweepOptions{});

}  // namespace matchlab
