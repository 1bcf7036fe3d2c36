#include "matchlab/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace matchlab {

namespace {
constexpr std::int64_t kMaxCardinality = std::int64_t{1} << 31;

std::int64_t mod_reduce(std::int64_t v, std::int64_t n) {
    std::int64_t r = v % n;
    return r < 0 ? r + n : r;
}
}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

GroupSpec::GroupSpec(std::vector<std::int64_t> ns) : orders(std::move(ns)) {
    if (orders.empty()) throw input_error("group spec needs at least one cyclic factor");
    std::int64_t card = 1;
    for (std::int64_t n : orders) {
        if (n < 2) throw input_error("cyclic factor orders must be >= 2");
        if (card > kMaxCardinality / n)
            throw input_error("group cardinality exceeds the 2^31 validation cap");
        card *= n;
    }
}

std::int64_t GroupSpec::cardinality() const {
    std::int64_t c = 1;
    for (std::int64_t n : orders) c *= n;
    return c;
}

std::int64_t GroupSpec::exponent() const {
    std::int64_t e = 1;
    for (std::int64_t n : orders) e = std::lcm(e, n);
    return e;
}

bool GroupSpec::is_cyclic_prime() const {
    return orders.size() == 1 && is_prime_u64(static_cast<std::uint64_t>(orders[0]));
}

GElem GroupSpec::reduce(const GElem& x) const {
    if (static_cast<int>(x.size()) != rank())
        throw input_error("element rank does not match group spec");
    GElem r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = mod_reduce(x[i], orders[i]);
    return r;
}

bool GroupSpec::contains(const GElem& x) const {
    if (static_cast<int>(x.size()) != rank()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0 || x[i] >= orders[i]) return false;
    return true;
}

void GroupSpec::check_element(const GElem& x) const {
    if (!contains(x)) throw input_error("element does not belong to the group (or is not reduced)");
}

std::int64_t GroupSpec::index_of(const GElem& x) const {
    check_element(x);
    std::int64_t idx = 0;
    for (size_t i = 0; i < x.size(); ++i) idx = idx * orders[i] + x[i];
    return idx;
}

GElem GroupSpec::elem_of(std::int64_t idx) const {
    GElem x(orders.size());
    for (int i = rank() - 1; i >= 0; --i) {
        x[i] = idx % orders[i];
        idx /= orders[i];
    }
    return x;
}

GSubset GSubset::of(const GroupSpec& g, std::vector<GElem> elems) {
    for (const GElem& e : elems) g.check_element(e);
    std::sort(elems.begin(), elems.end());
    if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
        throw input_error("subset contains duplicate elements");
    GSubset s;
    s.group = g;
    s.elems = std::move(elems);
    return s;
}

GSubset GSubset::of_residues(const GroupSpec& g, const std::vector<std::int64_t>& rs) {
    if (g.rank() != 1) throw input_error("residue shorthand only applies to cyclic groups");
    std::vector<GElem> es;
    es.reserve(rs.size());
    for (std::int64_t r : rs) es.push_back(GElem{r});
    return of(g, std::move(es));
}

GSubset GSubset::from_sorted_unique(const GroupSpec& g, std::vector<GElem> elems) {
    GSubset s;
    s.group = g;
    s.elems = std::move(elems);
    return s;
}

bool GSubset::contains(const GElem& x) const {
    return std::binary_search(elems.begin(), elems.end(), x);
}

GElem add(const GroupSpec& g, const GElem& x, const GElem& y) {
    g.check_element(x);
    g.check_element(y);
    GElem r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        r[i] = x[i] + y[i];
        if (r[i] >= g.orders[i]) r[i] -= g.orders[i];
    }
    return r;
}

GElem sub(const GroupSpec& g, const GElem& x, const GElem& y) {
    g.check_element(x);
    g.check_element(y);
    GElem r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        r[i] = x[i] - y[i];
        if (r[i] < 0) r[i] += g.orders[i];
    }
    return r;
}

GElem neg(const GroupSpec& g, const GElem& x) {
    g.check_element(x);
    GElem r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] == 0 ? 0 : g.orders[i] - x[i];
    return r;
}

GElem scalar_mul(const GroupSpec& g, std::int64_t m, const GElem& x) {
    g.check_element(x);
    GElem r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = mod_reduce(mod_reduce(m, g.orders[i]) * x[i], g.orders[i]);
    return r;
}

GSubset sumset(const GSubset& a, const GSubset& b) {
    if (!(a.group == b.group)) throw input_error("sumset requires subsets of the same group");
    std::set<GElem> out;
    for (const GElem& x : a.elems)
        for (const GElem& y : b.elems) out.insert(add(a.group, x, y));
    return GSubset::from_sorted_unique(a.group, std::vector<GElem>(out.begin(), out.end()));
}

GSubset dilate(std::int64_t m, const GSubset& a) {
    std::set<GElem> out;
    for (const GElem& x : a.elems) out.insert(scalar_mul(a.group, m, x));
    return GSubset::from_sorted_unique(a.group, std::vector<GElem>(out.begin(), out.end()));
}

bool cauchy_davenport_holds(const GSubset& a, const GSubset& b) {
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    if (!a.group.is_cyclic_prime())
        throw input_error("the Cauchy-Davenport bound is only asserted over Z/p, p prime");
    if (a.elems.empty() || b.elems.empty()) throw input_error("subsets must be nonempty");
    const std::int64_t p = a.group.orders[0];
    const std::int64_t s = sumset(a, b).size();
    return s >= std::min<std::int64_t>(p, a.size() + b.size() - 1);
}

bool is_sidon(const GSubset& b) {
    // Group unordered pairs (with repetition) by their sum; a violation is
    // two support-disjoint pairs in one sum class.
    const int k = b.size();
    std::map<GElem, std::vector<std::pair<int, int>>> by_sum;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            by_sum[add(b.group, b.elems[i], b.elems[j])].push_back({i, j});
    for (const auto& [sum, pairs] : by_sum) {
        for (size_t u = 0; u < pairs.size(); ++u)
            for (size_t v = u + 1; v < pairs.size(); ++v) {
                auto [x, y] = pairs[u];
                auto [z, w] = pairs[v];
                if (x != z && x != w && y != z && y != w) return false;
            }
    }
    return true;
}

std::int64_t element_order(const GroupSpec& g, const GElem& x) {
    g.check_element(x);
    std::int64_t ord = 1;
    for (size_t i = 0; i < x.size(); ++i)
        ord = std::lcm(ord, g.orders[i] / std::gcd(g.orders[i], x[i]));
    return ord;
}

GSubset cyclic_subgroup(const GroupSpec& g, const GElem& x) {
    std::vector<GElem> elems;
    GElem cur = g.zero();
    do {
        elems.push_back(cur);
        cur = add(g, cur, x);
    } while (cur != g.zero());
    std::sort(elems.begin(), elems.end());
    return GSubset::from_sorted_unique(g, std::move(elems));
}

}  // namespace matchlab
