#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "matchlab/caps.hpp"
#include "matchlab/gfield.hpp"

namespace matchlab {

// F-linear bijection between equal-dimensional subspaces of L, stored as an
// invertible matrix over F: column j holds the codomain coordinates of the
// image of the j-th echelon basis vector of the domain.
struct LinearIso {
    FieldTower tower;
    Subspace domain, codomain;
    std::vector<std::vector<FEl>> mat;  // k x k over F
};

LinearIso make_iso(const FieldTower& t, const Subspace& domain, const Subspace& codomain,
                   std::vector<std::vector<FEl>> mat);
// a -> alpha * a, onto alpha * A.
LinearIso multiplication_iso(const FieldTower& t, const Subspace& a, FEl alpha);
LinearIso identity_iso(const FieldTower& t, const Subspace& a);
FEl apply_iso(const LinearIso& f, FEl x);
LinearIso scale_iso(const LinearIso& f, FEl c);
bool is_scalar_multiple(const LinearIso& f, const LinearIso& g);

struct CriterionReport {
    std::vector<FEl> basis;            // the ordered basis a_1..a_k under test
    std::vector<Subspace> per_index;   // a_i^{-1} A n B
    bool passed = false;
    // Every J (1-based indices, ascending) violating the rank inequality.
    std::vector<std::vector<int>> failing_subsets;
    std::optional<std::vector<FEl>> matched_basis;  // ordered b_1..b_k
};

// Hall-type rank test: dim of the intersection over J of a_i^{-1}A n B may
// not exceed k - #J for any nonempty J. On success a matched basis of B is
// constructed (each a_i^{-1}A n B inside the span of the other b_j) and
// re-verified.
CriterionReport dimension_criterion(const Subspace& a, const std::vector<FEl>& basis_a,
                                    const Subspace& b, const Caps& caps = Caps{});

// Product-set criterion: no nonzero product a*b (a in A, b in B) falls back
// into A. When it holds, every F-linear isomorphism A -> B is a strong
// matching.
bool strong_matching_exists(const Subspace& a, const Subspace& b, const Caps& caps = Caps{});

// a f(a) = phi(a) g(phi(a)) for every a in A, checked by exhaustive
// evaluation (the identity is not bilinear; a basis check would not do).
bool equivalence_check(const LinearIso& f, const LinearIso& g, const LinearIso& phi,
                       const Caps& caps = Caps{});

// From f : E -> alpha E builds g(a) = (1/beta) f(a/beta), which is equivalent
// to f via phi(a) = beta a yet not a scalar multiple of f. Requires an
// intermediate field F < E < L, alpha outside E and beta in E \ F.
LinearIso prop38_counterexample(const FieldTower& t, const Subspace& e, FEl alpha, FEl beta,
                                const LinearIso& f);

struct LinearAcyclicResult {
    bool acyclic = false;
    // On a negative answer: an equivalent, non-scalar g together with the
    // automorphism phi realizing the equivalence.
    std::optional<std::pair<LinearIso, LinearIso>> witness;
};

// Sweeps all automorphisms phi of A; each phi pins g pointwise via
// g(phi(a)) = a f(a) / phi(a), accepted only when that assignment is an
// F-linear bijection onto B. f is acyclic iff every accepted g is a scalar
// multiple of f.
LinearAcyclicResult linear_acyclic_check(const LinearIso& f, const Caps& caps = Caps{});

// For finite towers the divisor lattice settles it: no intermediate field
// exists iff n is prime (or the extension is trivial).
bool has_linear_acyclic_property(const FieldTower& t);

// Enumeration helper shared by the GL sweeps: all invertible k x k matrices
// over F, ascending in the coefficient odometer; order Prod(q^k - q^i) must
// stay within caps.cap_gl.
std::vector<std::vector<std::vector<FEl>>> all_invertible_matrices(const FieldTower& t, int k,
                                                                   const Caps& caps = Caps{});

}  // namespace matchlab
