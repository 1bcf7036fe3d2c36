#include "matchlab/permrank.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "matchlab/abelian.hpp"  // is_prime_u64

namespace matchlab {

bool is_permutation(const Permutation& s) {
    std::vector<char> seen(s.size(), 0);
    for (int v : s) {
        if (v < 0 || v >= static_cast<int>(s.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Permutation identity_perm(int k) {
    Permutation s(k);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
    if (outer.size() != inner.size()) throw input_error("permutation sizes differ");
    Permutation r(outer.size());
    for (size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
    return r;
}

Permutation inverse_perm(const Permutation& s) {
    Permutation r(s.size());
    for (size_t i = 0; i < s.size(); ++i) r[s[i]] = static_cast<int>(i);
    return r;
}

IntMatrix perm_matrix(const Permutation& s) {
    if (!is_permutation(s)) throw input_error("not a permutation");
    IntMatrix m = IntMatrix::zero(static_cast<int>(s.size()));
    for (size_t i = 0; i < s.size(); ++i) m.a[i][s[i]] = 1;
    return m;
}

IntMatrix transpose(const IntMatrix& m) {
    IntMatrix t = IntMatrix::zero(m.k);
    for (int i = 0; i < m.k; ++i)
        for (int j = 0; j < m.k; ++j) t.a[j][i] = m.a[i][j];
    return t;
}

IntMatrix theorem_matrix(const Permutation& alpha, const Permutation& beta) {
    if (alpha.size() != beta.size()) throw input_error("permutation sizes differ");
    IntMatrix pa = perm_matrix(alpha), pb = perm_matrix(beta);
    IntMatrix m = IntMatrix::zero(static_cast<int>(alpha.size()));
    for (int i = 0; i < m.k; ++i) {
        for (int j = 0; j < m.k; ++j) m.a[i][j] = -pa.a[i][j] - pb.a[i][j];
        m.a[i][i] += 2;
    }
    return m;
}

namespace {

std::int64_t mod_pos(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
    std::int64_t r = 1 % p;
    b = mod_pos(b, p);
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

void check_prime(std::int64_t p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw input_error("modulus " + std::to_string(p) + " is not prime");
}

// Row-reduce mod p; returns pivot columns. rows is modified in place.
std::vector<int> row_reduce_mod_p(std::vector<std::vector<std::int64_t>>& rows, std::int64_t p) {
    const int nr = static_cast<int>(rows.size());
    const int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
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
        std::int64_t inv = pow_mod(rows[r][c], p - 2, p);
        for (int j = c; j < nc; ++j) rows[r][j] = rows[r][j] * inv % p;
        for (int i = 0; i < nr; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            std::int64_t f = rows[i][c];
            for (int j = c; j < nc; ++j) rows[i][j] = mod_pos(rows[i][j] - f * rows[r][j], p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<std::vector<std::int64_t>> reduced_rows(const IntMatrix& m, std::int64_t p) {
    std::vector<std::vector<std::int64_t>> rows(m.k, std::vector<std::int64_t>(m.k));
    for (int i = 0; i < m.k; ++i)
        for (int j = 0; j < m.k; ++j) rows[i][j] = mod_pos(m.a[i][j], p);
    return rows;
}

}  // namespace

int rank_mod_p(const IntMatrix& m, std::int64_t p) {
    check_prime(p);
    auto rows = reduced_rows(m, p);
    return static_cast<int>(row_reduce_mod_p(rows, p).size());
}

std::vector<std::vector<std::int64_t>> kernel_mod_p(const IntMatrix& m, std::int64_t p) {
    check_prime(p);
    auto rows = reduced_rows(m, p);
    std::vector<int> pivots = row_reduce_mod_p(rows, p);
    std::vector<char> is_pivot(m.k, 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<std::vector<std::int64_t>> basis;
    for (int free = 0; free < m.k; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::int64_t> v(m.k, 0);
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = mod_pos(-rows[r][free], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

int rank_rational(const IntMatrix& m) {
    // Fraction-free elimination with big-integer cross-multiplication.
    std::vector<std::vector<BigInt>> rows(m.k, std::vector<BigInt>(m.k));
    for (int i = 0; i < m.k; ++i)
        for (int j = 0; j < m.k; ++j) rows[i][j] = m.a[i][j];
    int rank = 0;
    for (int c = 0; c < m.k && rank < m.k; ++c) {
        int pr = -1;
        for (int i = rank; i < m.k; ++i)
            if (rows[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[rank], rows[pr]);
        for (int i = rank + 1; i < m.k; ++i) {
            if (rows[i][c] == 0) continue;
            for (int j = m.k - 1; j >= c; --j)
                rows[i][j] = rows[i][j] * rows[rank][c] - rows[rank][j] * rows[i][c];
        }
        ++rank;
    }
    return rank;
}

BigInt det_exact(const IntMatrix& m) {
    const int k = m.k;
    if (k == 0) return 1;
    std::vector<std::vector<BigInt>> a(k, std::vector<BigInt>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a[i][j] = m.a[i][j];
    BigInt prev = 1;
    int sign = 1;
    for (int l = 0; l < k - 1; ++l) {
        if (a[l][l] == 0) {
            int sw = -1;
            for (int i = l + 1; i < k; ++i)
                if (a[i][l] != 0) {
                    sw = i;
                    break;
                }
            if (sw < 0) return 0;
            std::swap(a[l], a[sw]);
            sign = -sign;
        }
        for (int i = l + 1; i < k; ++i)
            for (int j = l + 1; j < k; ++j) a[i][j] = (a[i][j] * a[l][l] - a[i][l] * a[l][j]) / prev;
        prev = a[l][l];
    }
    return sign > 0 ? a[k - 1][k - 1] : -a[k - 1][k - 1];
}

BigInt t_coefficient(const IntMatrix& m) {
    const int k = m.k;
    if (k < 1) throw input_error("t coefficient needs k >= 1");
    BigInt sum = 0;
    for (int drop = 0; drop < k; ++drop) {
        IntMatrix minor = IntMatrix::zero(k - 1);
        int ii = 0;
        for (int i = 0; i < k; ++i) {
            if (i == drop) continue;
            int jj = 0;
            for (int j = 0; j < k; ++j) {
                if (j == drop) continue;
                minor.a[ii][jj++] = m.a[i][j];
            }
            ++ii;
        }
        sum += det_exact(minor);
    }
    return (k - 1) % 2 == 0 ? sum : -sum;
}

int orbit_count(const Permutation& alpha, const Permutation& beta) {
    if (alpha.size() != beta.size()) throw input_error("permutation sizes differ");
    const int k = static_cast<int>(alpha.size());
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (int i = 0; i < k; ++i) {
        parent[find(i)] = find(alpha[i]);
        parent[find(i)] = find(beta[i]);
    }
    int count = 0;
    for (int i = 0; i < k; ++i)
        if (find(i) == i) ++count;
    return count;
}

namespace {

bool kernel_is_all_ones_line(const IntMatrix& m, std::int64_t p) {
    auto basis = kernel_mod_p(m, p);
    if (basis.size() != 1) return false;
    const auto& v = basis[0];
    std::int64_t first = v[0];
    if (first == 0) return false;
    for (std::int64_t x : v)
        if (x != first) return false;
    return true;
}

}  // namespace

NullityReport nullity_property_check(int k, std::int64_t p, std::int64_t trials,
                                     std::optional<bool> exhaustive, std::uint64_t seed) {
    check_prime(p);
    if (k < 2) throw input_error("pair sweep needs k >= 2");
    if (k >= 62 || static_cast<std::int64_t>(k) * (std::int64_t{1} << (k - 1)) >= p)
        throw input_error("hypothesis k * 2^(k-1) < p fails");
    NullityReport rep;
    rep.k = k;
    rep.p = p;
    rep.exhaustive = exhaustive.value_or(k <= 4);
    rep.min_rank = k;
    rep.max_rank = 0;
    rep.rank_matches_orbit_count = true;
    rep.transitive_rank_k_minus_1 = true;
    rep.kernel_all_ones_when_transitive = true;
    rep.t_nonzero_iff_transitive = true;
    auto consider = [&](const Permutation& alpha, const Permutation& beta) {
        IntMatrix m = theorem_matrix(alpha, beta);
        int r = rank_mod_p(m, p);
        int orbits = orbit_count(alpha, beta);
        rep.min_rank = std::min(rep.min_rank, r);
        rep.max_rank = std::max(rep.max_rank, r);
        if (r != k - orbits) rep.rank_matches_orbit_count = false;
        if (orbits == 1) {
            ++rep.transitive_pairs;
            if (r != k - 1) rep.transitive_rank_k_minus_1 = false;
            if (!kernel_is_all_ones_line(m, p)) rep.kernel_all_ones_when_transitive = false;
        }
        BigInt t = t_coefficient(m);
        if (t < 0) t = -t;
        if ((t != 0) != (orbits == 1)) rep.t_nonzero_iff_transitive = false;
        if (t > rep.max_abs_t_coeff) rep.max_abs_t_coeff = t;
        ++rep.pairs_checked;
    };
    const Permutation id = identity_perm(k);
    if (rep.exhaustive) {
        std::vector<Permutation> perms;
        Permutation s = id;
        do {
            if (s != id) perms.push_back(s);
        } while (std::next_permutation(s.begin(), s.end()));
        for (const auto& alpha : perms)
            for (const auto& beta : perms) consider(alpha, beta);
    } else {
        for (std::int64_t t = 0; t < trials; ++t) {
            // Per-trial generator keeps the sweep deterministic however the
            // trials are partitioned.
            std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(t));
            auto random_non_identity = [&]() {
                Permutation s = id;
                do {
                    std::shuffle(s.begin(), s.end(), rng);
                } while (s == id);
                return s;
            };
            Permutation alpha = random_non_identity();
            Permutation beta = random_non_identity();
            consider(alpha, beta);
        }
    }
    return rep;
}

}  // namespace matchlab
