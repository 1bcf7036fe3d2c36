#include "matchlab/gfield.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "matchlab/abelian.hpp"  // is_prime_u64

namespace matchlab {

namespace {

// --- dense polynomial arithmetic over F_p (construction-time only) --------

using Poly = std::vector<std::int64_t>;  // coefficient i of x^i; may carry trailing zeros

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, std::int64_t p) {
    std::vector<std::int64_t> prod(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    // reduce by the monic modulus
    const size_t dm = mod.size() - 1;
    for (size_t i = prod.size(); i-- > dm;) {
        std::int64_t c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (size_t j = 0; j < dm; ++j) prod[i - dm + j] = ((prod[i - dm + j] - c * mod[j]) % p + p) % p;
    }
    prod.resize(dm);
    return prod;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& mod, std::int64_t p) {
    Poly r{1};
    r.resize(mod.size() - 1, 0);
    base = poly_mulmod(base, Poly{1}, mod, p);  // proper reduction, not truncation
    while (e > 0) {
        if (e & 1) r = poly_mulmod(r, base, mod, p);
        base = poly_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    auto inv_mod = [&](std::int64_t v) {
        std::int64_t r = 1, e = p - 2, base = v % p;
        while (e > 0) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        // a mod b
        std::int64_t lead_inv = inv_mod(b.back());
        Poly r = a;
        while (r.size() >= b.size()) {
            std::int64_t c = r.back() * lead_inv % p;
            if (c != 0) {
                size_t off = r.size() - b.size();
                for (size_t j = 0; j < b.size(); ++j) r[off + j] = ((r[off + j] - c * b[j]) % p + p) % p;
            }
            r.pop_back();
            trim(r);
            if (r.size() < b.size()) break;
        }
        a = std::move(b);
        b = std::move(r);
        trim(b);
    }
    return a;
}

std::uint64_t u64_pow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

bool poly_is_irreducible(const Poly& g, std::int64_t p) {
    const int d = static_cast<int>(g.size()) - 1;
    Poly x{0, 1};
    // x^(p^d) == x mod g
    Poly t = x;
    for (int i = 0; i < d; ++i) t = poly_powmod(t, static_cast<std::uint64_t>(p), g, p);
    Poly diff = t;
    diff.resize(std::max(diff.size(), x.size()), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    trim(diff);
    if (!diff.empty()) return false;
    for (std::int64_t ell : distinct_prime_factors(d)) {
        Poly s = x;
        for (int i = 0; i < d / ell; ++i) s = poly_powmod(s, static_cast<std::uint64_t>(p), g, p);
        Poly sd = s;
        sd.resize(std::max(sd.size(), x.size()), 0);
        sd[1] = ((sd[1] - 1) % p + p) % p;
        trim(sd);
        Poly gc = poly_gcd(sd, g, p);
        if (static_cast<int>(gc.size()) - 1 != 0) return false;
    }
    return true;
}

}  // namespace

std::vector<std::int64_t> distinct_prime_factors(std::int64_t n) {
    std::vector<std::int64_t> ps;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// --- ambient field ---------------------------------------------------------

namespace detail {

struct Ambient {
    std::int64_t p = 0;
    int d = 0;
    std::uint64_t card = 0;
    Poly poly;  // monic degree d, stored as c_0..c_d with c_d = 1
    std::vector<FEl> exp_tab;       // exp_tab[i] = gen^i, size card-1
    std::vector<std::uint32_t> log_tab;  // inverse of exp_tab on nonzeros

    FEl pack(const Poly& c) const {
        FEl v = 0;
        for (int i = d - 1; i >= 0; --i)
            v = static_cast<FEl>(v * p + (i < static_cast<int>(c.size()) ? c[i] : 0));
        return v;
    }
    Poly unpack(FEl v) const {
        Poly c(d, 0);
        for (int i = 0; i < d; ++i) {
            c[i] = static_cast<std::int64_t>(v % p);
            v = static_cast<FEl>(v / p);
        }
        return c;
    }
    FEl add(FEl a, FEl b) const {
        if (p == 2) return a ^ b;
        FEl r = 0, mult = 1;
        for (int i = 0; i < d; ++i) {
            std::int64_t s = static_cast<std::int64_t>(a % p) + static_cast<std::int64_t>(b % p);
            if (s >= p) s -= p;
            r += static_cast<FEl>(s) * mult;
            a /= static_cast<FEl>(p);
            b /= static_cast<FEl>(p);
            mult *= static_cast<FEl>(p);
        }
        return r;
    }
    FEl neg(FEl a) const {
        if (p == 2) return a;
        FEl r = 0, mult = 1;
        for (int i = 0; i < d; ++i) {
            std::int64_t c = static_cast<std::int64_t>(a % p);
            r += static_cast<FEl>(c == 0 ? 0 : p - c) * mult;
            a /= static_cast<FEl>(p);
            mult *= static_cast<FEl>(p);
        }
        return r;
    }
    FEl mul(FEl a, FEl b) const {
        if (a == 0 || b == 0) return 0;
        std::uint64_t m = card - 1;
        return exp_tab[(static_cast<std::uint64_t>(log_tab[a]) + log_tab[b]) % m];
    }
    FEl inv(FEl a) const {
        if (a == 0) throw input_error("division by zero in the field");
        std::uint64_t m = card - 1;
        return exp_tab[(m - log_tab[a]) % m];
    }
    FEl pow(FEl a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        std::uint64_t m = card - 1;
        return exp_tab[(static_cast<std::uint64_t>(log_tab[a]) * (e % m)) % m];
    }
};

struct TowerData {
    std::shared_ptr<const Ambient> amb;
    int m = 0, n = 0;
    std::uint64_t q = 0;
    std::vector<FEl> f_elems;     // the base field, ascending
    std::vector<FEl> fp_basis_f;  // F_p-basis of F, size m
    std::vector<FEl> f_basis_l;   // F-basis of L, size n
    std::vector<std::vector<std::int64_t>> minv;  // inverse change-of-basis over F_p, d x d
};

}  // namespace detail

namespace {

using detail::Ambient;
using detail::TowerData;

std::shared_ptr<const Ambient> make_ambient(std::int64_t p, int d, std::uint64_t card) {
    auto amb = std::make_shared<Ambient>();
    amb->p = p;
    amb->d = d;
    amb->card = card;

    // Least monic irreducible of degree d: scan constant-first coefficient
    // packings in increasing order.
    for (std::uint64_t v = 0;; ++v) {
        if (v >= card) throw soundness_error("no irreducible polynomial found");
        Poly g(d + 1, 0);
        std::uint64_t w = v;
        for (int i = 0; i < d; ++i) {
            g[i] = static_cast<std::int64_t>(w % p);
            w /= static_cast<std::uint64_t>(p);
        }
        g[d] = 1;
        if (poly_is_irreducible(g, p)) {
            amb->poly = g;
            break;
        }
    }

    // Multiplicative generator, then full log/exp tables.
    std::vector<std::int64_t> factors = distinct_prime_factors(static_cast<std::int64_t>(card - 1));
    FEl gen = 0;
    for (std::uint64_t cand = 1; cand < card; ++cand) {
        Poly c = amb->unpack(static_cast<FEl>(cand));
        bool ok = true;
        for (std::int64_t ell : factors) {
            Poly t = poly_powmod(c, (card - 1) / static_cast<std::uint64_t>(ell), amb->poly, p);
            trim(t);
            if (t.size() == 1 && t[0] == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            gen = static_cast<FEl>(cand);
            break;
        }
    }
    if (gen == 0) throw soundness_error("no multiplicative generator found");

    // Multiplication by gen as an F_p-linear map, applied card-1 times.
    Poly gp = amb->unpack(gen);
    std::vector<Poly> mulgen_cols(d);
    for (int i = 0; i < d; ++i) {
        Poly xi(d, 0);
        xi[i] = 1;
        mulgen_cols[i] = poly_mulmod(xi, gp, amb->poly, p);
    }
    amb->exp_tab.assign(card - 1, 0);
    amb->log_tab.assign(card, 0);
    Poly cur(d, 0);
    cur[0] = 1;
    for (std::uint64_t i = 0; i < card - 1; ++i) {
        FEl packed = amb->pack(cur);
        if (packed == 0 || (i > 0 && packed == 1))
            throw soundness_error("generator order is too small");
        amb->exp_tab[i] = packed;
        amb->log_tab[packed] = static_cast<std::uint32_t>(i);
        Poly next(d, 0);
        for (int j = 0; j < d; ++j) {
            if (cur[j] == 0) continue;
            for (int r = 0; r < d; ++r) next[r] = (next[r] + cur[j] * mulgen_cols[j][r]) % p;
        }
        cur = std::move(next);
    }
    return amb;
}

std::vector<std::vector<std::int64_t>> invert_mod_p(std::vector<std::vector<std::int64_t>> a,
                                                    std::int64_t p) {
    const int d = static_cast<int>(a.size());
    std::vector<std::vector<std::int64_t>> inv(d, std::vector<std::int64_t>(d, 0));
    for (int i = 0; i < d; ++i) inv[i][i] = 1;
    auto inv_scalar = [&](std::int64_t v) {
        std::int64_t r = 1, e = p - 2, b = ((v % p) + p) % p;
        while (e > 0) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    for (int c = 0; c < d; ++c) {
        int pr = -1;
        for (int i = c; i < d; ++i)
            if (a[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) throw soundness_error("change-of-basis matrix is singular");
        std::swap(a[c], a[pr]);
        std::swap(inv[c], inv[pr]);
        std::int64_t s = inv_scalar(a[c][c]);
        for (int j = 0; j < d; ++j) {
            a[c][j] = a[c][j] * s % p;
            inv[c][j] = inv[c][j] * s % p;
        }
        for (int i = 0; i < d; ++i) {
            if (i == c || a[i][c] == 0) continue;
            std::int64_t f = a[i][c];
            for (int j = 0; j < d; ++j) {
                a[i][j] = ((a[i][j] - f * a[c][j]) % p + p) % p;
                inv[i][j] = ((inv[i][j] - f * inv[c][j]) % p + p) % p;
            }
        }
    }
    return inv;
}

std::shared_ptr<const TowerData> make_tower_data(std::shared_ptr<const Ambient> amb, int m, int n) {
    auto td = std::make_shared<TowerData>();
    td->amb = amb;
    td->m = m;
    td->n = n;
    td->q = u64_pow(static_cast<std::uint64_t>(amb->p), m);
    const std::uint64_t card = amb->card;
    const std::int64_t p = amb->p;
    const int d = amb->d;

    // Base field: fixed points of x -> x^q.
    for (std::uint64_t x = 0; x < card; ++x)
        if (amb->pow(static_cast<FEl>(x), td->q) == static_cast<FEl>(x))
            td->f_elems.push_back(static_cast<FEl>(x));
    if (td->f_elems.size() != td->q) throw soundness_error("fixed field has unexpected size");

    // F_p-basis of F (greedy over the ascending element order).
    {
        std::vector<char> in_span(card, 0);
        std::vector<FEl> span_elems{0};
        in_span[0] = 1;
        for (FEl e : td->f_elems) {
            if (in_span[e]) continue;
            td->fp_basis_f.push_back(e);
            std::vector<FEl> grown = span_elems;
            for (std::int64_t c = 1; c < p; ++c) {
                FEl ce = amb->mul(static_cast<FEl>(c), e);
                for (FEl s : span_elems) {
                    FEl v = amb->add(s, ce);
                    grown.push_back(v);
                    in_span[v] = 1;
                }
            }
            span_elems = std::move(grown);
            if (static_cast<int>(td->fp_basis_f.size()) == m) break;
        }
        if (static_cast<int>(td->fp_basis_f.size()) != m)
            throw soundness_error("base field basis extraction failed");
    }

    // F-basis of L (greedy, ascending).
    {
        std::vector<char> in_span(card, 0);
        std::vector<FEl> span_elems{0};
        in_span[0] = 1;
        for (std::uint64_t x = 1; x < card && static_cast<int>(td->f_basis_l.size()) < n; ++x) {
            if (in_span[x]) continue;
            td->f_basis_l.push_back(static_cast<FEl>(x));
            std::vector<FEl> grown = span_elems;
            for (FEl c : td->f_elems) {
                if (c == 0) continue;
                FEl cx = amb->mul(c, static_cast<FEl>(x));
                for (FEl s : span_elems) {
                    FEl v = amb->add(s, cx);
                    grown.push_back(v);
                    in_span[v] = 1;
                }
            }
            span_elems = std::move(grown);
        }
        if (static_cast<int>(td->f_basis_l.size()) != n)
            throw soundness_error("F-basis extraction failed");
    }

    // Change of basis {f_u * l_i} -> power basis, inverted over F_p.
    std::vector<std::vector<std::int64_t>> mchg(d, std::vector<std::int64_t>(d, 0));
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < m; ++u) {
            Poly col = amb->unpack(amb->mul(td->fp_basis_f[u], td->f_basis_l[i]));
            for (int r = 0; r < d; ++r) mchg[r][i * m + u] = col[r];
        }
    td->minv = invert_mod_p(std::move(mchg), p);
    return td;
}

}  // namespace

// --- FieldTower ------------------------------------------------------------

FieldTower::FieldTower(std::shared_ptr<const detail::TowerData> data) : data_(std::move(data)) {}

FieldTower::FieldTower(std::int64_t p, int m, int n, const Caps& caps) {
    if (!is_prime_u64(static_cast<std::uint64_t>(p))) throw input_error("p must be prime");
    if (m < 1 || n < 1) throw input_error("tower degrees must be >= 1");
    const int d = m * n;
    std::uint64_t card = 1;
    for (int i = 0; i < d; ++i) {
        if (card > caps.cap_field / static_cast<std::uint64_t>(p))
            throw cap_error("field cardinality p^(m*n) exceeds cap " + std::to_string(caps.cap_field));
        card *= static_cast<std::uint64_t>(p);
    }
    data_ = make_tower_data(make_ambient(p, d, card), m, n);
}

std::int64_t FieldTower::p() const { return data_->amb->p; }
int FieldTower::m() const { return data_->m; }
int FieldTower::n() const { return data_->n; }
int FieldTower::d() const { return data_->amb->d; }
std::uint64_t FieldTower::q() const { return data_->q; }
std::uint64_t FieldTower::card() const { return data_->amb->card; }

std::vector<std::int64_t> FieldTower::defining_poly() const {
    Poly g = data_->amb->poly;
    g.pop_back();  // drop the monic leading 1
    return g;
}

FEl FieldTower::add(FEl a, FEl b) const { return data_->amb->add(a, b); }
FEl FieldTower::sub(FEl a, FEl b) const { return data_->amb->add(a, data_->amb->neg(b)); }
FEl FieldTower::neg(FEl a) const { return data_->amb->neg(a); }
FEl FieldTower::mul(FEl a, FEl b) const { return data_->amb->mul(a, b); }
FEl FieldTower::inv(FEl a) const { return data_->amb->inv(a); }
FEl FieldTower::pow(FEl a, std::uint64_t e) const { return data_->amb->pow(a, e); }
FEl FieldTower::frobenius(FEl a) const { return data_->amb->pow(a, static_cast<std::uint64_t>(p())); }
FEl FieldTower::base_frobenius(FEl a) const { return data_->amb->pow(a, q()); }

FEl FieldTower::from_digits(const std::vector<std::int64_t>& c) const {
    if (static_cast<int>(c.size()) > d()) throw input_error("too many coefficients for the field");
    Poly g(d(), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        std::int64_t v = ((c[i] % p()) + p()) % p();
        g[i] = v;
    }
    return data_->amb->pack(g);
}

std::vector<std::int64_t> FieldTower::digits(FEl a) const { return data_->amb->unpack(a); }

bool FieldTower::in_base_field(FEl a) const {
    return std::binary_search(data_->f_elems.begin(), data_->f_elems.end(), a);
}

const std::vector<FEl>& FieldTower::base_field_elements() const { return data_->f_elems; }
const std::vector<FEl>& FieldTower::f_basis_of_l() const { return data_->f_basis_l; }

std::vector<FEl> FieldTower::coords_of(FEl a) const {
    const auto& td = *data_;
    Poly h = td.amb->unpack(a);
    const int dd = d();
    std::vector<FEl> out(n(), 0);
    for (int i = 0; i < n(); ++i) {
        FEl ci = 0;
        for (int u = 0; u < m(); ++u) {
            std::int64_t y = 0;
            const auto& row = td.minv[i * m() + u];
            for (int j = 0; j < dd; ++j) y += row[j] * h[j];
            y %= p();
            if (y != 0) ci = td.amb->add(ci, td.amb->mul(static_cast<FEl>(y), td.fp_basis_f[u]));
        }
        out[i] = ci;
    }
    return out;
}

FEl FieldTower::from_coords(const std::vector<FEl>& c) const {
    if (static_cast<int>(c.size()) != n()) throw input_error("coordinate length must be n");
    FEl r = 0;
    for (int i = 0; i < n(); ++i) r = add(r, mul(c[i], data_->f_basis_l[i]));
    return r;
}

int FieldTower::min_poly_degree(FEl a) const {
    int j = 1;
    FEl y = base_frobenius(a);
    while (y != a) {
        y = base_frobenius(y);
        ++j;
    }
    return j;
}

bool FieldTower::is_primitive_element(FEl a) const { return min_poly_degree(a) == n(); }

FieldTower FieldTower::rebased(int r) const {
    if (r < 1 || n() % r != 0) throw input_error("rebase degree must divide n");
    if (r == 1) return *this;
    return FieldTower(make_tower_data(data_->amb, m() * r, n() / r));
}

bool FieldTower::same_ambient(const FieldTower& o) const {
    return data_->amb == o.data_->amb ||
           (p() == o.p() && d() == o.d() && data_->amb->poly == o.data_->amb->poly);
}

bool FieldTower::operator==(const FieldTower& o) const { return same_ambient(o) && m() == o.m(); }

// --- F-linear algebra ------------------------------------------------------

namespace {

void check_same_tower(const Subspace& u, const Subspace& v) {
    if (!(u.tower == v.tower)) throw input_error("subspaces live in different towers");
}

// In-place reduced echelon form over F; returns pivot columns.
std::vector<int> rref(const FieldTower& t, std::vector<std::vector<FEl>>& rows) {
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
    rows.resize(pivots.size());
    return pivots;
}

}  // namespace

Subspace span_coords(const FieldTower& t, std::vector<std::vector<FEl>> coord_rows) {
    for (const auto& row : coord_rows)
        if (static_cast<int>(row.size()) != t.n()) throw input_error("coordinate row length must be n");
    rref(t, coord_rows);
    return Subspace{t, std::move(coord_rows)};
}

Subspace span(const FieldTower& t, const std::vector<FEl>& generators) {
    std::vector<std::vector<FEl>> rows;
    rows.reserve(generators.size());
    for (FEl g : generators) rows.push_back(t.coords_of(g));
    return span_coords(t, std::move(rows));
}

Subspace zero_subspace(const FieldTower& t) { return Subspace{t, {}}; }

Subspace full_subspace(const FieldTower& t) {
    std::vector<std::vector<FEl>> rows(t.n(), std::vector<FEl>(t.n(), 0));
    for (int i = 0; i < t.n(); ++i) rows[i][i] = 1;
    return Subspace{t, std::move(rows)};
}

Subspace subspace_sum(const Subspace& u, const Subspace& v) {
    check_same_tower(u, v);
    std::vector<std::vector<FEl>> rows = u.rows;
    rows.insert(rows.end(), v.rows.begin(), v.rows.end());
    return span_coords(u.tower, std::move(rows));
}

Subspace intersect(const Subspace& u, const Subspace& v) {
    check_same_tower(u, v);
    const FieldTower& t = u.tower;
    const int n = t.n();
    // Zassenhaus: reduce [u | u; v | 0]; rows with zero left half carry the
    // intersection in their right half.
    std::vector<std::vector<FEl>> wide;
    for (const auto& r : u.rows) {
        std::vector<FEl> w(2 * n, 0);
        std::copy(r.begin(), r.end(), w.begin());
        std::copy(r.begin(), r.end(), w.begin() + n);
        wide.push_back(std::move(w));
    }
    for (const auto& r : v.rows) {
        std::vector<FEl> w(2 * n, 0);
        std::copy(r.begin(), r.end(), w.begin());
        wide.push_back(std::move(w));
    }
    rref(t, wide);
    std::vector<std::vector<FEl>> inter;
    for (const auto& w : wide) {
        bool left_zero = std::all_of(w.begin(), w.begin() + n, [](FEl x) { return x == 0; });
        if (left_zero) inter.emplace_back(w.begin() + n, w.end());
    }
    return span_coords(t, std::move(inter));
}

std::optional<std::vector<FEl>> solve_coords(const Subspace& u, FEl x) {
    const FieldTower& t = u.tower;
    std::vector<FEl> cur = t.coords_of(x);
    std::vector<FEl> coeffs(u.rows.size(), 0);
    for (size_t r = 0; r < u.rows.size(); ++r) {
        // pivot column of row r
        int pc = -1;
        for (int j = 0; j < t.n(); ++j)
            if (u.rows[r][j] != 0) {
                pc = j;
                break;
            }
        FEl c = cur[pc];
        if (c != 0) {
            coeffs[r] = c;
            for (int j = 0; j < t.n(); ++j) cur[j] = t.sub(cur[j], t.mul(c, u.rows[r][j]));
        }
    }
    for (FEl v : cur)
        if (v != 0) return std::nullopt;
    return coeffs;
}

bool subspace_contains(const Subspace& u, FEl x) { return solve_coords(u, x).has_value(); }

std::vector<FEl> basis_elements(const Subspace& u) {
    std::vector<FEl> out;
    out.reserve(u.rows.size());
    for (const auto& r : u.rows) out.push_back(u.tower.from_coords(r));
    return out;
}

std::vector<FEl> subspace_elements(const Subspace& u) {
    const FieldTower& t = u.tower;
    const auto& fe = t.base_field_elements();
    std::vector<FEl> amb_basis = basis_elements(u);
    std::vector<FEl> out;
    const int k = u.dim();
    std::vector<size_t> odo(k, 0);
    while (true) {
        FEl v = 0;
        for (int i = 0; i < k; ++i) v = t.add(v, t.mul(fe[odo[i]], amb_basis[i]));
        out.push_back(v);
        int i = k - 1;
        while (i >= 0 && odo[i] + 1 == fe.size()) odo[i--] = 0;
        if (i < 0) break;
        ++odo[i];
    }
    return out;
}

std::map<int, Subspace> subfield_lattice(const FieldTower& t) {
    std::map<int, Subspace> out;
    const int n = t.n();
    for (int dd = 1; dd <= n; ++dd) {
        if (n % dd != 0) continue;
        // Kernel over F of (sigma^dd - id), sigma the base Frobenius.
        std::vector<std::vector<FEl>> mat(n, std::vector<FEl>(n, 0));
        for (int j = 0; j < n; ++j) {
            FEl y = t.f_basis_of_l()[j];
            for (int it = 0; it < dd; ++it) y = t.base_frobenius(y);
            std::vector<FEl> col = t.coords_of(y);
            for (int i = 0; i < n; ++i) mat[i][j] = col[i];
            mat[j][j] = t.sub(mat[j][j], 1);
        }
        std::vector<int> pivots = rref(t, mat);
        std::vector<char> is_pivot(n, 0);
        for (int c : pivots) is_pivot[c] = 1;
        std::vector<std::vector<FEl>> kernel;
        for (int free = 0; free < n; ++free) {
            if (is_pivot[free]) continue;
            std::vector<FEl> v(n, 0);
            v[free] = 1;
            for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = t.neg(mat[r][free]);
            kernel.push_back(std::move(v));
        }
        Subspace s = span_coords(t, std::move(kernel));
        if (s.dim() != dd) throw soundness_error("intermediate field has wrong dimension");
        out.emplace(dd, std::move(s));
    }
    return out;
}

FEl normal_basis_element(const FieldTower& t) {
    const int n = t.n();
    for (std::uint64_t x = 1; x < t.card(); ++x) {
        std::vector<std::vector<FEl>> rows;
        FEl y = static_cast<FEl>(x);
        for (int j = 0; j < n; ++j) {
            rows.push_back(t.coords_of(y));
            y = t.base_frobenius(y);
        }
        if (static_cast<int>(rref(t, rows).size()) == n) return static_cast<FEl>(x);
    }
    throw soundness_error("no normal basis element found");
}

bool is_primitive_subspace(const FieldTower& t, const Subspace& w, const Caps& caps) {
    (void)caps;
    if (!(w.tower == t)) throw input_error("subspace belongs to a different tower");
    // Route one: trivial intersection with every proper intermediate field.
    bool by_lattice = true;
    std::map<int, Subspace> lattice = subfield_lattice(t);
    for (const auto& [dd, e] : lattice) {
        if (dd == t.n()) continue;
        if (intersect(w, e).dim() != 0) {
            by_lattice = false;
            break;
        }
    }
    // Route two: every nonzero element has full degree.
    bool by_elements = true;
    for (FEl v : subspace_elements(w)) {
        if (v == 0) continue;
        if (t.min_poly_degree(v) != t.n()) {
            by_elements = false;
            break;
        }
    }
    if (by_lattice != by_elements)
        throw soundness_error("primitivity routes disagree; internal linear algebra is broken");
    return by_lattice;
}

OrbitIndexSet build_T_complement(const std::vector<std::int64_t>& primes) {
    if (primes.empty()) throw input_error("need at least one prime");
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime_u64(static_cast<std::uint64_t>(primes[i]))) throw input_error("factors must be prime");
        if (i > 0 && primes[i] <= primes[i - 1]) throw input_error("primes must be strictly ascending");
    }
    OrbitIndexSet out;
    out.primes = primes;
    const size_t s = primes.size();
    // T^c = {(sum_i j_i mod p_1, j_2, ..., j_s)}, the canonical surjections
    // being reduction mod p_1.
    std::vector<std::int64_t> j(s, 0);  // j[0] unused in the odometer
    while (true) {
        std::int64_t head = 0;
        for (size_t i = 1; i < s; ++i) head = (head + j[i]) % primes[0];
        std::vector<std::int64_t> tup(s);
        tup[0] = head;
        for (size_t i = 1; i < s; ++i) tup[i] = j[i];
        out.tc_tuples.push_back(std::move(tup));
        int i = static_cast<int>(s) - 1;
        while (i >= 1 && j[i] + 1 == primes[i]) j[i--] = 0;
        if (i < 1) break;
        ++j[i];
    }
    std::sort(out.tc_tuples.begin(), out.tc_tuples.end());
    // T = complement
    std::vector<std::int64_t> full(s, 0);
    while (true) {
        if (!std::binary_search(out.tc_tuples.begin(), out.tc_tuples.end(), full))
            out.t_tuples.push_back(full);
        int i = static_cast<int>(s) - 1;
        while (i >= 0 && full[i] + 1 == primes[i]) full[i--] = 0;
        if (i < 0) break;
        ++full[i];
    }
    if (!orbit_index_set_valid(out)) throw soundness_error("orbit index set failed the line check");
    return out;
}

bool orbit_index_set_valid(const OrbitIndexSet& s) {
    const size_t k = s.primes.size();
    // Every axis line must meet T^c (equivalently: not sit inside T).
    std::vector<std::int64_t> other(k, 0);
    for (size_t axis = 0; axis < k; ++axis) {
        std::fill(other.begin(), other.end(), 0);
        while (true) {
            bool hit = false;
            std::vector<std::int64_t> probe = other;
            for (std::int64_t v = 0; v < s.primes[axis]; ++v) {
                probe[axis] = v;
                if (std::binary_search(s.tc_tuples.begin(), s.tc_tuples.end(), probe)) {
                    hit = true;
                    break;
                }
            }
            if (!hit) return false;
            int i = static_cast<int>(k) - 1;
            while (i >= 0 &&
                   (i == static_cast<int>(axis) || other[i] + 1 == s.primes[i])) {
                if (i != static_cast<int>(axis)) other[i] = 0;
                --i;
            }
            if (i < 0) break;
            ++other[i];
        }
    }
    return true;
}

MaxPrimitiveReport max_primitive_subspace(const FieldTower& t, const Caps& caps) {
    const int n = t.n();
    if (n < 2) throw input_error("the extension must be proper (n > 1)");
    std::vector<std::int64_t> primes = distinct_prime_factors(n);
    std::int64_t rad = 1;
    for (std::int64_t pp : primes) rad *= pp;
    const int r = static_cast<int>(n / rad);
    const int target_dim = n - n / static_cast<int>(primes[0]);

    FieldTower reduced = t.rebased(r);
    FEl theta = normal_basis_element(reduced);
    OrbitIndexSet index_set = build_T_complement(primes);

    // Decode T from the prime product back into Z/rad.
    std::vector<std::int64_t> orbit_subset;
    for (std::int64_t jz = 0; jz < rad; ++jz) {
        std::vector<std::int64_t> tup(primes.size());
        for (size_t i = 0; i < primes.size(); ++i) tup[i] = jz % primes[i];
        if (std::binary_search(index_set.t_tuples.begin(), index_set.t_tuples.end(), tup))
            orbit_subset.push_back(jz);
    }

    // Orbit vectors over the reduced base, then their F-span in the original
    // tower (scaled through an F-basis of the reduced base field).
    std::vector<FEl> orbit_gens;
    for (std::int64_t jz : orbit_subset) {
        FEl y = theta;
        for (std::int64_t it = 0; it < jz; ++it) y = reduced.base_frobenius(y);
        orbit_gens.push_back(y);
    }
    {
        Subspace w_reduced = span(reduced, orbit_gens);
        if (w_reduced.dim() != static_cast<int>(orbit_subset.size()))
            throw soundness_error("orbit vectors over the reduced base are dependent");
    }
    std::vector<FEl> scale_basis;
    if (r == 1) {
        scale_basis.push_back(1);
    } else {
        scale_basis = basis_elements(subfield_lattice(t).at(r));
    }
    std::vector<FEl> gens;
    for (FEl b : scale_basis)
        for (FEl w : orbit_gens) gens.push_back(t.mul(b, w));
    Subspace witness = span(t, gens);
    if (witness.dim() != target_dim) throw soundness_error("witness has the wrong dimension");
    if (!is_primitive_subspace(t, witness, caps))
        throw soundness_error("witness failed the primitivity check");
    return MaxPrimitiveReport{target_dim,       std::move(witness),   rad,
                              t.m() * r,        theta,                std::move(index_set),
                              std::move(orbit_subset)};
}

Subspace complement_subspace(const Subspace& v, const std::vector<Subspace>& family) {
    const FieldTower& t = v.tower;
    for (const Subspace& s : family) {
        check_same_tower(v, s);
        for (FEl b : basis_elements(s))
            if (!subspace_contains(v, b)) throw input_error("family member is not a subspace of V");
    }
    if (family.size() > t.q())
        throw input_error("more subspaces than base field elements; a covering obstruction is possible");
    int maxdim = 0;
    for (const Subspace& s : family) maxdim = std::max(maxdim, s.dim());
    const int target = v.dim() - maxdim;
    Subspace w = zero_subspace(t);
    std::vector<FEl> elements = subspace_elements(v);
    for (int step = 0; step < target; ++step) {
        std::vector<Subspace> blocked;
        blocked.reserve(family.size());
        for (const Subspace& s : family) blocked.push_back(subspace_sum(s, w));
        bool found = false;
        for (FEl x : elements) {
            if (x == 0 || subspace_contains(w, x)) continue;
            bool ok = true;
            for (const Subspace& u : blocked)
                if (subspace_contains(u, x)) {
                    ok = false;
                    break;
                }
            if (ok) {
                std::vector<std::vector<FEl>> rows = w.rows;
                rows.push_back(t.coords_of(x));
                w = span_coords(t, std::move(rows));
                found = true;
                break;
            }
        }
        if (!found) throw soundness_error("greedy complement ran out of eligible elements");
    }
    for (const Subspace& s : family)
        if (intersect(w, s).dim() != 0) throw soundness_error("complement meets a family member");
    if (w.dim() != target) throw soundness_error("complement has the wrong dimension");
    return w;
}

}  // namespace matchlab
