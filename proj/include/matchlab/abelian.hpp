#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchlab/errors.hpp"

namespace matchlab {

// Element of a finite abelian group Z/n_1 x ... x Z/n_r, stored as the vector
// of reduced residues (coords[i] in [0, n_i)).
using GElem = std::vector<std::int64_t>;

bool is_prime_u64(std::uint64_t n);

struct GroupSpec {
    std::vector<std::int64_t> orders;

    GroupSpec() = default;
    explicit GroupSpec(std::vector<std::int64_t> ns);
    static GroupSpec cyclic(std::int64_t n) { return GroupSpec({n}); }

    int rank() const { return static_cast<int>(orders.size()); }
    std::int64_t cardinality() const;
    std::int64_t exponent() const;  // lcm of the cyclic orders
    bool is_cyclic_prime() const;   // Z/p with p prime

    GElem zero() const { return GElem(orders.size(), 0); }
    GElem reduce(const GElem& x) const;
    bool contains(const GElem& x) const;
    void check_element(const GElem& x) const;  // throws input_error

    // Mixed-radix rank of an element; inverse of elem_of. Used as a compact
    // key in sweeps and multiplicity maps.
    std::int64_t index_of(const GElem& x) const;
    GElem elem_of(std::int64_t idx) const;

    bool operator==(const GroupSpec& o) const { return orders == o.orders; }
};

// Canonical subset: strictly sorted (lexicographic on coords), no duplicates.
struct GSubset {
    GroupSpec group;
    std::vector<GElem> elems;

    GSubset() = default;
    // Sorts input; rejects duplicates and out-of-group elements.
    static GSubset of(const GroupSpec& g, std::vector<GElem> elems);
    // Convenience for cyclic groups: residues -> one-coordinate elements.
    static GSubset of_residues(const GroupSpec& g, const std::vector<std::int64_t>& rs);
    // Internal fast path; caller guarantees canonical form.
    static GSubset from_sorted_unique(const GroupSpec& g, std::vector<GElem> elems);

    int size() const { return static_cast<int>(elems.size()); }
    bool contains(const GElem& x) const;  // binary search
    bool operator==(const GSubset& o) const { return group == o.group && elems == o.elems; }
};

GElem add(const GroupSpec& g, const GElem& x, const GElem& y);
GElem sub(const GroupSpec& g, const GElem& x, const GElem& y);
GElem neg(const GroupSpec& g, const GElem& x);
GElem scalar_mul(const GroupSpec& g, std::int64_t m, const GElem& x);

GSubset sumset(const GSubset& a, const GSubset& b);
GSubset dilate(std::int64_t m, const GSubset& a);

// Kneser's sumset bound specialized to groups with no nontrivial proper
// finite subgroup: #(A+B) >= min(p, #A+#B-1). Only meaningful over Z/p,
// p prime; used as a property-check oracle (must hold for every pair).
bool cauchy_davenport_holds(const GSubset& a, const GSubset& b);

// True iff x+y = z+w has no solution in B with {x,y} and {z,w} disjoint
// (pairs taken as multisets, repetition allowed).
bool is_sidon(const GSubset& b);

std::int64_t element_order(const GroupSpec& g, const GElem& x);
GSubset cyclic_subgroup(const GroupSpec& g, const GElem& x);

}  // namespace matchlab
