#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "matchlab/caps.hpp"
#include "matchlab/errors.hpp"

namespace matchlab {

// An element of the ambient field F_{p^(m n)}: the coefficient vector of its
// polynomial representative packed as base-p digits (digit i = coefficient
// of x^i), so 0 is 0, 1 is 1 and constants c < p are c themselves.
using FEl = std::uint32_t;

namespace detail {
struct TowerData;
}

// A tower F_p <= F = F_{p^m} <= L = F_{p^(m n)}. The ambient field is a
// single polynomial quotient (lexicographically least monic irreducible
// defining polynomial); the base field F is carved out as the fixed field of
// the m-fold Frobenius, and F-linear algebra runs in coordinates relative to
// a fixed F-basis of L. Cheap to copy.
class FieldTower {
  public:
    FieldTower(std::int64_t p, int m, int n, const Caps& caps = Caps{});

    std::int64_t p() const;
    int m() const;
    int n() const;         // [L : F]
    int d() const;         // m * n
    std::uint64_t q() const;     // #F
    std::uint64_t card() const;  // #L
    std::vector<std::int64_t> defining_poly() const;  // c_0..c_{d-1} of the monic polynomial

    FEl zero() const { return 0; }
    FEl one() const { return 1; }
    FEl add(FEl a, FEl b) const;
    FEl sub(FEl a, FEl b) const;
    FEl neg(FEl a) const;
    FEl mul(FEl a, FEl b) const;
    FEl inv(FEl a) const;
    FEl pow(FEl a, std::uint64_t e) const;
    FEl frobenius(FEl a) const;       // x -> x^p
    FEl base_frobenius(FEl a) const;  // x -> x^q, the Galois generator over F

    FEl from_digits(const std::vector<std::int64_t>& c) const;
    std::vector<std::int64_t> digits(FEl a) const;

    bool in_base_field(FEl a) const;
    const std::vector<FEl>& base_field_elements() const;  // ascending
    const std::vector<FEl>& f_basis_of_l() const;         // fixed F-basis of L, size n

    std::vector<FEl> coords_of(FEl a) const;              // F-coordinates, length n
    FEl from_coords(const std::vector<FEl>& c) const;

    // Degree over F of the minimal polynomial = size of the base-Frobenius orbit.
    int min_poly_degree(FEl a) const;
    bool is_primitive_element(FEl a) const;  // F(a) = L

    // Same ambient field, base enlarged to F_{p^(m r)}; requires r | n.
    FieldTower rebased(int r) const;

    bool same_ambient(const FieldTower& o) const;
    bool operator==(const FieldTower& o) const;  // same ambient and same base

  private:
    explicit FieldTower(std::shared_ptr<const detail::TowerData> data);
    std::shared_ptr<const detail::TowerData> data_;
};

// F-subspace of L in reduced echelon form; rows are F-coordinate vectors of
// length n with unit pivots, so equal subspaces have equal rows.
struct Subspace {
    FieldTower tower;
    std::vector<std::vector<FEl>> rows;

    int dim() const { return static_cast<int>(rows.size()); }
    bool operator==(const Subspace& o) const { return tower == o.tower && rows == o.rows; }
};

Subspace span(const FieldTower& t, const std::vector<FEl>& generators);
Subspace span_coords(const FieldTower& t, std::vector<std::vector<FEl>> coord_rows);
Subspace zero_subspace(const FieldTower& t);
Subspace full_subspace(const FieldTower& t);
Subspace intersect(const Subspace& u, const Subspace& v);
Subspace subspace_sum(const Subspace& u, const Subspace& v);
bool subspace_contains(const Subspace& u, FEl x);
// Coefficients of x along the echelon basis; nullopt when x is outside.
std::optional<std::vector<FEl>> solve_coords(const Subspace& u, FEl x);
// All q^dim elements, in coefficient-odometer order (last coefficient fastest).
std::vector<FEl> subspace_elements(const Subspace& u);
// Basis rows as ambient elements.
std::vector<FEl> basis_elements(const Subspace& u);

// d -> the intermediate field F_{q^d} as an F-subspace, for every d | n.
std::map<int, Subspace> subfield_lattice(const FieldTower& t);

// First element (ascending packed order) whose base-Frobenius orbit is an
// F-basis of L.
FEl normal_basis_element(const FieldTower& t);

// True iff W meets every proper intermediate field only in 0; equivalently
// every nonzero element of W has full degree n over F. Both routes are
// evaluated and must agree.
bool is_primitive_subspace(const FieldTower& t, const Subspace& w, const Caps& caps = Caps{});

// Index set for picking a subset of a normal basis orbit. T avoids every
// axis-aligned line of the product Z/p_1 x ... x Z/p_s; its complement T^c
// (one point per choice of the trailing coordinates) meets every line.
struct OrbitIndexSet {
    std::vector<std::int64_t> primes;                 // p_1 < ... < p_s
    std::vector<std::vector<std::int64_t>> t_tuples;  // sorted
    std::vector<std::vector<std::int64_t>> tc_tuples;
};

std::vector<std::int64_t> distinct_prime_factors(std::int64_t n);
OrbitIndexSet build_T_complement(const std::vector<std::int64_t>& primes);
// Exhaustive line property check (every axis line meets T^c, none inside T).
bool orbit_index_set_valid(const OrbitIndexSet& s);

struct MaxPrimitiveReport {
    int dim = 0;
    Subspace witness;
    std::int64_t radical = 0;      // product of the distinct primes of n
    int reduced_base_degree = 0;   // the construction works over F_{p^(m * n/radical)}
    FEl theta = 0;                 // normal basis element over the reduced base
    OrbitIndexSet index_set;
    std::vector<std::int64_t> orbit_subset;  // T decoded into Z/radical
};

// Largest dimension of a subspace meeting every proper intermediate field
// trivially: n minus the largest proper divisor of n, witnessed by an
// orbit-subset construction after reducing the base to the intersection of
// the maximal subfields.
MaxPrimitiveReport max_primitive_subspace(const FieldTower& t, const Caps& caps = Caps{});

// Greedy complement: W of dimension dim V - max dim V_i meeting every family
// member trivially. Requires family.size() <= #F.
Subspace complement_subspace(const Subspace& v, const std::vector<Subspace>& family);

}  // namespace matchlab
