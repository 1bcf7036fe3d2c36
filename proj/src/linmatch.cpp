#include "matchlab/linmatch.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <string>
#include <unordered_map>

#include "matchlab/abelian.hpp"  // is_prime_u64

namespace matchlab {

namespace {

int matrix_rank(const FieldTower& t, std::vector<std::vector<FEl>> rows) {
    const int nr = static_cast<int>(rows.size());
    const int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
    int rank = 0;
    for (int c = 0; c < nc && rank < nr; ++c) {
        int pr = -1;
        for (int i = rank; i < nr; ++i)
            if (rows[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[rank], rows[pr]);
        FEl s = t.inv(rows[rank][c]);
        for (int j = c; j < nc; ++j) rows[rank][j] = t.mul(rows[rank][j], s);
        for (int i = rank + 1; i < nr; ++i) {
            if (rows[i][c] == 0) continue;
            FEl f = rows[i][c];
            for (int j = c; j < nc; ++j) rows[i][j] = t.sub(rows[i][j], t.mul(f, rows[rank][j]));
        }
        ++rank;
    }
    return rank;
}

std::vector<FEl> mat_vec(const FieldTower& t, const std::vector<std::vector<FEl>>& m,
                         const std::vector<FEl>& v) {
    const int k = static_cast<int>(m.size());
    std::vector<FEl> out(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (m[i][j] != 0 && v[j] != 0) out[i] = t.add(out[i], t.mul(m[i][j], v[j]));
    return out;
}

// Solve M x = rhs for invertible M (small k).
std::vector<FEl> solve_linear(const FieldTower& t, std::vector<std::vector<FEl>> m,
                              std::vector<FEl> rhs) {
    const int k = static_cast<int>(m.size());
    for (int c = 0; c < k; ++c) {
        int pr = -1;
        for (int i = c; i < k; ++i)
            if (m[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) throw input_error("matrix is singular");
        std::swap(m[c], m[pr]);
        std::swap(rhs[c], rhs[pr]);
        FEl s = t.inv(m[c][c]);
        for (int j = 0; j < k; ++j) m[c][j] = t.mul(m[c][j], s);
        rhs[c] = t.mul(rhs[c], s);
        for (int i = 0; i < k; ++i) {
            if (i == c || m[i][c] == 0) continue;
            FEl f = m[i][c];
            for (int j = 0; j < k; ++j) m[i][j] = t.sub(m[i][j], t.mul(f, m[c][j]));
            rhs[i] = t.sub(rhs[i], t.mul(f, rhs[c]));
        }
    }
    return rhs;
}

// Kernel basis of the map with the given rows (vectors of length nc).
std::vector<std::vector<FEl>> kernel_of_rows(const FieldTower& t,
                                             std::vector<std::vector<FEl>> rows, int nc) {
    // Row-reduce, then read the free columns.
    const int nr = static_cast<int>(rows.size());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < nc && r < nr; ++c) {
        int pr = -1;
        for (int i = r; i < nr; ++i)
            if (rows[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[r], rows[pr]);
        FEl s = t.inv(rows[r][c]);
        for (int j = c; j < nc; ++j) rows[r][j] = t.mul(rows[r][j], s);
        for (int i = 0; i < nr; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            FEl f = rows[i][c];
            for (int j = c; j < nc; ++j) rows[i][j] = t.sub(rows[i][j], t.mul(f, rows[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<char> is_pivot(nc, 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<std::vector<FEl>> basis;
    for (int free = 0; free < nc; ++free) {
        if (is_pivot[free]) continue;
        std::vector<FEl> v(nc, 0);
        v[free] = 1;
        for (size_t rr = 0; rr < pivots.size(); ++rr) v[pivots[rr]] = t.neg(rows[rr][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

LinearIso make_iso(const FieldTower& t, const Subspace& domain, const Subspace& codomain,
                   std::vector<std::vector<FEl>> mat) {
    if (!(domain.tower == t) || !(codomain.tower == t))
        throw input_error("subspaces belong to a different tower");
    const int k = domain.dim();
    if (codomain.dim() != k) throw input_error("domain and codomain dimensions differ");
    if (static_cast<int>(mat.size()) != k) throw input_error("matrix size mismatch");
    for (const auto& row : mat) {
        if (static_cast<int>(row.size()) != k) throw input_error("matrix size mismatch");
        for (FEl e : row)
            if (!t.in_base_field(e)) throw input_error("matrix entries must lie in F");
    }
    if (matrix_rank(t, mat) != k) throw input_error("matrix is not invertible over F");
    return LinearIso{t, domain, codomain, std::move(mat)};
}

LinearIso multiplication_iso(const FieldTower& t, const Subspace& a, FEl alpha) {
    if (alpha == 0) throw input_error("multiplication by zero is not an isomorphism");
    std::vector<FEl> dom_basis = basis_elements(a);
    std::vector<FEl> img;
    img.reserve(dom_basis.size());
    for (FEl e : dom_basis) img.push_back(t.mul(alpha, e));
    Subspace codomain = span(t, img);
    const int k = a.dim();
    std::vector<std::vector<FEl>> mat(k, std::vector<FEl>(k, 0));
    for (int j = 0; j < k; ++j) {
        auto c = solve_coords(codomain, img[j]);
        if (!c) throw soundness_error("image escaped its own span");
        for (int i = 0; i < k; ++i) mat[i][j] = (*c)[i];
    }
    return make_iso(t, a, codomain, std::move(mat));
}

LinearIso identity_iso(const FieldTower& t, const Subspace& a) {
    const int k = a.dim();
    std::vector<std::vector<FEl>> mat(k, std::vector<FEl>(k, 0));
    for (int i = 0; i < k; ++i) mat[i][i] = 1;
    return make_iso(t, a, a, std::move(mat));
}

FEl apply_iso(const LinearIso& f, FEl x) {
    auto c = solve_coords(f.domain, x);
    if (!c) throw input_error("element lies outside the domain");
    std::vector<FEl> y = mat_vec(f.tower, f.mat, *c);
    std::vector<FEl> acc(f.tower.n(), 0);
    for (size_t i = 0; i < y.size(); ++i)
        for (int j = 0; j < f.tower.n(); ++j)
            acc[j] = f.tower.add(acc[j], f.tower.mul(y[i], f.codomain.rows[i][j]));
    return f.tower.from_coords(acc);
}

LinearIso scale_iso(const LinearIso& f, FEl c) {
    if (c == 0 || !f.tower.in_base_field(c)) throw input_error("scale factor must be in F*");
    std::vector<std::vector<FEl>> mat = f.mat;
    for (auto& row : mat)
        for (auto& e : row) e = f.tower.mul(e, c);
    return LinearIso{f.tower, f.domain, f.codomain, std::move(mat)};
}

bool is_scalar_multiple(const LinearIso& f, const LinearIso& g) {
    if (!(f.domain == g.domain) || !(f.codomain == g.codomain)) return false;
    const FieldTower& t = f.tower;
    const int k = static_cast<int>(f.mat.size());
    FEl c = 0;
    for (int i = 0; i < k && c == 0; ++i)
        for (int j = 0; j < k && c == 0; ++j)
            if (f.mat[i][j] != 0) c = t.mul(g.mat[i][j], t.inv(f.mat[i][j]));
    if (c == 0) return false;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (g.mat[i][j] != t.mul(c, f.mat[i][j])) return false;
    return true;
}

CriterionReport dimension_criterion(const Subspace& a, const std::vector<FEl>& basis_a,
                                    const Subspace& b, const Caps& caps) {
    const FieldTower& t = a.tower;
    if (!(b.tower == t)) throw input_error("subspaces belong to different towers");
    const int k = a.dim();
    if (b.dim() != k) throw input_error("dim A must equal dim B");
    if (static_cast<int>(basis_a.size()) != k) throw input_error("basis size must equal dim A");
    if (k < 1) throw input_error("needs a positive dimension");
    if (k > caps.cap_enum) throw cap_error("criterion subset count 2^k exceeds the enumeration cap");
    {
        std::vector<std::vector<FEl>> rows;
        for (FEl e : basis_a) {
            if (e == 0) throw input_error("basis elements must be nonzero");
            if (!subspace_contains(a, e)) throw input_error("basis element outside A");
            rows.push_back(t.coords_of(e));
        }
        if (matrix_rank(t, rows) != k) throw input_error("the given elements do not form a basis of A");
    }

    CriterionReport rep{basis_a, {}, true, {}, std::nullopt};
    std::vector<FEl> a_basis_elems = basis_elements(a);
    for (FEl ai : basis_a) {
        FEl ai_inv = t.inv(ai);
        std::vector<FEl> gens;
        for (FEl e : a_basis_elems) gens.push_back(t.mul(ai_inv, e));
        rep.per_index.push_back(intersect(span(t, gens), b));
    }

    // Intersection dims over all nonempty J via shared-prefix dynamic programming.
    std::vector<std::optional<Subspace>> inter(std::size_t{1} << k);
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
        int low = std::countr_zero(mask);
        std::uint32_t rest = mask & (mask - 1);
        const Subspace& cur =
            rest == 0 ? rep.per_index[low] : intersect(*inter[rest], rep.per_index[low]);
        inter[mask] = cur;
        int popcount = std::popcount(mask);
        if (cur.dim() > k - popcount) {
            rep.passed = false;
            std::vector<int> j;
            for (int i = 0; i < k; ++i)
                if ((mask >> i) & 1) j.push_back(i + 1);
            rep.failing_subsets.push_back(std::move(j));
        }
    }
    if (!rep.passed) return rep;

    // Build the matched basis through annihilators: phi_i vanishing on
    // a_i^{-1}A n B, jointly independent; the inverse-dual basis of B then
    // satisfies the span condition. Backtracking cannot fail when the rank
    // inequalities hold.
    std::vector<std::vector<std::vector<FEl>>> annihilators(k);
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<FEl>> s_rows;
        for (FEl e : basis_elements(rep.per_index[i])) {
            auto c = solve_coords(b, e);
            if (!c) throw soundness_error("intersection escaped B");
            s_rows.push_back(*c);
        }
        annihilators[i] = kernel_of_rows(t, std::move(s_rows), k);
    }
    const auto& f_elems = t.base_field_elements();
    std::vector<std::vector<FEl>> chosen;
    std::function<bool(int)> pick = [&](int i) -> bool {
        if (i == k) return true;
        const auto& ann = annihilators[i];
        std::vector<std::size_t> odo(ann.size(), 0);
        while (true) {
            std::vector<FEl> cand(k, 0);
            for (std::size_t u = 0; u < ann.size(); ++u)
                for (int j = 0; j < k; ++j)
                    cand[j] = t.add(cand[j], t.mul(f_elems[odo[u]], ann[u][j]));
            bool nonzero = std::any_of(cand.begin(), cand.end(), [](FEl v) { return v != 0; });
            if (nonzero) {
                std::vector<std::vector<FEl>> stack = chosen;
                stack.push_back(cand);
                if (matrix_rank(t, stack) == static_cast<int>(stack.size())) {
                    chosen.push_back(cand);
                    if (pick(i + 1)) return true;
                    chosen.pop_back();
                }
            }
            int u = static_cast<int>(odo.size()) - 1;
            while (u >= 0 && odo[u] + 1 == f_elems.size()) odo[u--] = 0;
            if (u < 0) return false;
            ++odo[u];
        }
    };
    if (!pick(0))
        throw soundness_error("no dual system found although the rank inequalities hold");

    // Inverse-dual basis: phi_i(b_j) = delta_ij.
    std::vector<FEl> matched;
    for (int j = 0; j < k; ++j) {
        std::vector<FEl> rhs(k, 0);
        rhs[j] = 1;
        std::vector<FEl> coords = solve_linear(t, chosen, rhs);
        std::vector<FEl> acc(t.n(), 0);
        for (int i = 0; i < k; ++i)
            for (int col = 0; col < t.n(); ++col)
                acc[col] = t.add(acc[col], t.mul(coords[i], b.rows[i][col]));
        matched.push_back(t.from_coords(acc));
    }
    // Re-verify the span condition directly.
    for (int i = 0; i < k; ++i) {
        std::vector<FEl> others;
        for (int j = 0; j < k; ++j)
            if (j != i) others.push_back(matched[j]);
        Subspace hull = span(t, others);
        for (FEl e : basis_elements(rep.per_index[i]))
            if (!subspace_contains(hull, e))
                throw soundness_error("matched basis failed the span re-check");
    }
    rep.matched_basis = std::move(matched);
    return rep;
}

bool strong_matching_exists(const Subspace& a, const Subspace& b, const Caps& caps) {
    if (!(a.tower == b.tower)) throw input_error("subspaces belong to different towers");
    const FieldTower& t = a.tower;
    std::vector<FEl> ae = subspace_elements(a);
    std::vector<FEl> be = subspace_elements(b);
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(ae.size() - 1) * static_cast<std::uint64_t>(be.size() - 1);
    if (pairs > caps.cap_field)
        throw cap_error("product set enumeration of " + std::to_string(pairs) + " pairs exceeds cap");
    for (FEl x : ae) {
        if (x == 0) continue;
        for (FEl y : be) {
            if (y == 0) continue;
            if (subspace_contains(a, t.mul(x, y))) return false;
        }
    }
    return true;
}

bool equivalence_check(const LinearIso& f, const LinearIso& g, const LinearIso& phi,
                       const Caps& caps) {
    (void)caps;
    if (!(f.domain == g.domain) || !(f.codomain == g.codomain))
        throw input_error("f and g must share domain and codomain");
    if (!(phi.domain == f.domain) || !(phi.codomain == f.domain))
        throw input_error("phi must be an automorphism of the domain");
    const FieldTower& t = f.tower;
    for (FEl x : subspace_elements(f.domain)) {
        FEl px = apply_iso(phi, x);
        FEl lhs = t.mul(x, apply_iso(f, x));
        FEl rhs = t.mul(px, apply_iso(g, px));
        if (lhs != rhs) return false;
    }
    return true;
}

LinearIso prop38_counterexample(const FieldTower& t, const Subspace& e, FEl alpha, FEl beta,
                                const LinearIso& f) {
    if (!(e.tower == t)) throw input_error("subspace belongs to a different tower");
    const int de = e.dim();
    if (de <= 1 || de >= t.n())
        throw input_error("need a proper intermediate field: 1 < dim E < n");
    if (!subspace_contains(e, 1)) throw input_error("E must contain 1");
    std::vector<FEl> ebasis = basis_elements(e);
    for (FEl x : ebasis)
        for (FEl y : ebasis)
            if (!subspace_contains(e, t.mul(x, y)))
                throw input_error("E is not multiplicatively closed");
    if (subspace_contains(e, alpha)) throw input_error("alpha must lie outside E");
    if (!subspace_contains(e, beta) || t.in_base_field(beta))
        throw input_error("beta must lie in E \\ F");
    if (!(f.domain == e)) throw input_error("f must be defined on E");

    const FieldTower& tw = t;
    FEl beta_inv = tw.inv(beta);
    const int k = de;
    std::vector<std::vector<FEl>> mat(k, std::vector<FEl>(k, 0));
    for (int j = 0; j < k; ++j) {
        FEl img = tw.mul(beta_inv, apply_iso(f, tw.mul(beta_inv, ebasis[j])));
        auto c = solve_coords(f.codomain, img);
        if (!c) throw soundness_error("the scaled conjugate does not land in the codomain");
        for (int i = 0; i < k; ++i) mat[i][j] = (*c)[i];
    }
    LinearIso g = make_iso(tw, e, f.codomain, std::move(mat));
    LinearIso phi = multiplication_iso(tw, e, beta);
    if (!(phi.codomain == e)) throw soundness_error("beta E differs from E");
    if (!equivalence_check(f, g, phi)) throw soundness_error("constructed g is not equivalent to f");
    if (is_scalar_multiple(f, g)) throw soundness_error("constructed g collapsed to a scalar multiple");
    return g;
}

std::vector<std::vector<std::vector<FEl>>> all_invertible_matrices(const FieldTower& t, int k,
                                                                   const Caps& caps) {
    // |GL_k(F_q)| = prod_i (q^k - q^i)
    long double order = 1;
    std::uint64_t qk = 1;
    for (int i = 0; i < k; ++i) qk *= t.q();
    std::uint64_t qi = 1;
    for (int i = 0; i < k; ++i) {
        order *= static_cast<long double>(qk - qi);
        qi *= t.q();
    }
    if (order > static_cast<long double>(caps.cap_gl))
        throw cap_error("GL sweep order exceeds cap " + std::to_string(caps.cap_gl));
    const auto& fe = t.base_field_elements();
    std::vector<std::vector<std::vector<FEl>>> out;
    std::vector<std::size_t> odo(static_cast<std::size_t>(k) * k, 0);
    while (true) {
        std::vector<std::vector<FEl>> m(k, std::vector<FEl>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[i][j] = fe[odo[static_cast<std::size_t>(i) * k + j]];
        if (matrix_rank(t, m) == k) out.push_back(std::move(m));
        int u = static_cast<int>(odo.size()) - 1;
        while (u >= 0 && odo[u] + 1 == fe.size()) odo[u--] = 0;
        if (u < 0) break;
        ++odo[u];
    }
    return out;
}

LinearAcyclicResult linear_acyclic_check(const LinearIso& f, const Caps& caps) {
    const FieldTower& t = f.tower;
    const Subspace& a = f.domain;
    const Subspace& b = f.codomain;
    const int k = a.dim();
    if (k < 1) throw input_error("needs a positive dimension");
    if (!strong_matching_exists(a, b, caps))
        throw input_error("A n AB != {0}: no strong matching exists at all");

    std::vector<FEl> a_elems = subspace_elements(a);
    std::unordered_map<FEl, std::size_t> pos;
    for (std::size_t i = 0; i < a_elems.size(); ++i) pos.emplace(a_elems[i], i);
    std::vector<FEl> f_of(a_elems.size());
    for (std::size_t i = 0; i < a_elems.size(); ++i) f_of[i] = apply_iso(f, a_elems[i]);
    std::vector<FEl> a_basis = basis_elements(a);

    LinearAcyclicResult result;
    result.acyclic = true;
    for (auto& phi_mat : all_invertible_matrices(t, k, caps)) {
        // g is pinned pointwise by the equivalence identity.
        LinearIso phi{t, a, a, phi_mat};
        std::vector<FEl> g_at(a_elems.size(), 0);  // indexed by position of phi(a)
        bool ok = true;
        for (std::size_t i = 0; i < a_elems.size() && ok; ++i) {
            FEl x = a_elems[i];
            if (x == 0) continue;
            FEl px = apply_iso(phi, x);
            FEl val = t.mul(t.mul(x, f_of[i]), t.inv(px));
            if (!subspace_contains(b, val)) {
                ok = false;
                break;
            }
            g_at[pos.at(px)] = val;
        }
        if (!ok) continue;
        // Linearity: the candidate matrix from the basis must reproduce every value.
        std::vector<std::vector<FEl>> gmat(k, std::vector<FEl>(k, 0));
        for (int j = 0; j < k; ++j) {
            auto c = solve_coords(b, g_at[pos.at(a_basis[j])]);
            if (!c) {
                ok = false;
                break;
            }
            for (int i = 0; i < k; ++i) gmat[i][j] = (*c)[i];
        }
        if (!ok || matrix_rank(t, gmat) != k) continue;
        LinearIso g{t, a, b, gmat};
        for (std::size_t i = 0; i < a_elems.size() && ok; ++i)
            if (apply_iso(g, a_elems[i]) != g_at[i]) ok = false;
        if (!ok) continue;
        if (!is_scalar_multiple(f, g)) {
            result.acyclic = false;
            result.witness = std::make_pair(std::move(g), std::move(phi));
            return result;
        }
    }
    return result;
}

bool has_linear_acyclic_property(const FieldTower& t) {
    const int n = t.n();
    return n == 1 || is_prime_u64(static_cast<std::uint64_t>(n));
}

}  // namespace matchlab
