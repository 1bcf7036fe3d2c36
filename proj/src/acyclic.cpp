#include "matchlab/acyclic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <thread>

namespace matchlab {

MultiplicityFn multiplicity(const GSubset& a, const GSubset& b, const MatchingFn& f) {
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    const int k = a.size();
    if (b.size() != k || static_cast<int>(f.sigma.size()) != k)
        throw input_error("matching size does not fit the subsets");
    std::vector<char> used(k, 0);
    MultiplicityFn m;
    for (int i = 0; i < k; ++i) {
        int j = f.sigma[i];
        if (j < 0 || j >= k || used[j]) throw input_error("sigma is not a permutation");
        used[j] = 1;
        GElem s = add(a.group, a.elems[i], b.elems[j]);
        if (a.contains(s)) throw input_error("f violates the matching condition: a + f(a) lies in A");
        ++m.counts[std::move(s)];
    }
    return m;
}

GSubset support(const GSubset& a, const GSubset& b, const MatchingFn& f) {
    MultiplicityFn m = multiplicity(a, b, f);
    std::vector<GElem> elems;
    for (const auto& [e, c] : m.counts)
        if (c > 0) elems.push_back(e);
    return GSubset::from_sorted_unique(a.group, std::move(elems));
}

namespace {

// Multiset of realized sums as a sorted vector of element ranks; cheap
// equality key for grouping matchings into multiplicity classes.
std::vector<std::int64_t> sum_key(const GSubset& a, const GSubset& b, const std::vector<int>& sigma) {
    std::vector<std::int64_t> key(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i)
        key[i] = a.group.index_of(add(a.group, a.elems[i], b.elems[sigma[i]]));
    std::sort(key.begin(), key.end());
    return key;
}

}  // namespace

AcyclicCheck is_acyclic(const GSubset& a, const GSubset& b, const MatchingFn& f, const Caps& caps) {
    multiplicity(a, b, f);  // validates f
    Biadjacency big = build_bigraph(a, b);
    const std::vector<std::int64_t> target = sum_key(a, b, f.sigma);
    AcyclicCheck out;
    out.acyclic = true;
    for_each_matching(
        big.mat,
        [&](const std::vector<int>& sigma) {
            if (sigma != f.sigma && sum_key(a, b, sigma) == target) {
                out.acyclic = false;
                out.witness = MatchingFn{sigma};
                return false;
            }
            return true;
        },
        caps);
    return out;
}

std::optional<MatchingFn> find_acyclic_matching(const GSubset& a, const GSubset& b, const Caps& caps) {
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    if (a.size() != b.size()) throw input_error("subsets must have equal size");
    if (b.contains(b.group.zero())) throw input_error("B must not contain the neutral element");
    Biadjacency big = build_bigraph(a, b);
    // class key -> (count, first sigma in lexicographic order)
    std::map<std::vector<std::int64_t>, std::pair<std::int64_t, std::vector<int>>> classes;
    for_each_matching(
        big.mat,
        [&](const std::vector<int>& sigma) {
            auto [it, fresh] = classes.try_emplace(sum_key(a, b, sigma), 1, sigma);
            if (!fresh) ++it->second.first;
            return true;
        },
        caps);
    std::optional<MatchingFn> best;
    for (const auto& [key, entry] : classes) {
        if (entry.first != 1) continue;
        if (!best || entry.second < best->sigma) best = MatchingFn{entry.second};
    }
    return best;
}

GSubset jafari_set(std::int64_t p) {
    if (p < 3 || !is_prime_u64(static_cast<std::uint64_t>(p)) || p % 2 == 0)
        throw input_error("expected an odd prime");
    std::int64_t ord = 1, cur = 2 % p;
    while (cur != 1) {
        cur = cur * 2 % p;
        ++ord;
    }
    if (ord % 2 == 0)
        throw input_error("the multiplicative order of 2 mod " + std::to_string(p) +
                          " is even; the construction needs an odd order");
    GroupSpec g = GroupSpec::cyclic(p);
    std::vector<std::int64_t> rs;
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < ord; ++i) {
        rs.push_back(v);
        v = v * 2 % p;
    }
    return GSubset::of_residues(g, rs);
}

IdentityAcyclicReport identity_acyclic(const GSubset& a, const Caps& caps) {
    if (!a.group.is_cyclic_prime()) throw input_error("identity check is stated over Z/p, p prime");
    const std::int64_t p = a.group.orders[0];
    const int k = a.size();
    IdentityAcyclicReport rep;
    GSubset doubled = dilate(2, a);
    rep.is_matching = true;
    for (const GElem& e : doubled.elems)
        if (a.contains(e)) {
            rep.is_matching = false;
            break;
        }
    if (!rep.is_matching) return rep;
    rep.guaranteed = k < 62 && static_cast<std::int64_t>(k) * (std::int64_t{1} << (k - 1)) < p;
    if (k <= caps.cap_enum) {
        MatchingFn id;
        id.sigma.resize(k);
        for (int i = 0; i < k; ++i) id.sigma[i] = i;
        rep.verified = is_acyclic(a, a, id, caps).acyclic;
    }
    return rep;
}

MatchingFn sidon_acyclic_search(const GSubset& a, const GSubset& b, const Caps& caps) {
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    if (a.size() != b.size()) throw input_error("subsets must have equal size");
    GSubset ab = sumset(a, b);
    for (const GElem& e : a.elems)
        if (ab.contains(e)) throw input_error("precondition A disjoint from A+B is violated");
    if (!is_sidon(b)) throw input_error("precondition B Sidon is violated");
    auto found = find_acyclic_matching(a, b, caps);
    if (!found)
        throw soundness_error(
            "no acyclic matching found although the Sidon construction guarantees one");
    return *found;
}

std::pair<GSubset, GSubset> geometric_example(std::int64_t n, int k, const GElem& a) {
    GroupSpec g = GroupSpec::cyclic(n);
    g.check_element(a);
    if (k <= 1) throw input_error("the geometric construction needs k > 1");
    if (k > 30 || static_cast<std::int64_t>(k - 1) * ((std::int64_t{1} << (k - 1)) + 1) >= n)
        throw input_error("size condition (k-1)(2^(k-1)+1) < n fails");
    const std::int64_t step = (std::int64_t{1} << (k - 1)) + 1;
    std::vector<std::int64_t> bs, as;
    for (int i = 0; i < k; ++i) {
        bs.push_back((std::int64_t{1} << i) % n);
        as.push_back((a[0] + static_cast<std::int64_t>(i) * step) % n);
    }
    GSubset bset = GSubset::of_residues(g, bs);
    GSubset aset = GSubset::of_residues(g, as);
    GSubset sums = sumset(aset, bset);
    for (const GElem& e : aset.elems)
        if (sums.contains(e))
            throw soundness_error("constructed A meets A+B; the progression parameters are unusable");
    if (!is_sidon(bset)) throw soundness_error("constructed B is not Sidon");
    return {aset, bset};
}

namespace {

int index_in(const GSubset& s, const GElem& e) {
    auto it = std::lower_bound(s.elems.begin(), s.elems.end(), e);
    if (it == s.elems.end() || *it != e) throw soundness_error("element unexpectedly missing");
    return static_cast<int>(it - s.elems.begin());
}

GSubset group_minus(const GroupSpec& g, const std::vector<GElem>& removed) {
    std::vector<GElem> elems;
    const std::int64_t card = g.cardinality();
    for (std::int64_t idx = 0; idx < card; ++idx) {
        GElem e = g.elem_of(idx);
        if (std::find(removed.begin(), removed.end(), e) == removed.end()) elems.push_back(std::move(e));
    }
    return GSubset::from_sorted_unique(g, std::move(elems));
}

}  // namespace

LabeledMatching max_size_matchings(const GroupSpec& g, const GElem& g1) {
    g.check_element(g1);
    LabeledMatching out;
    out.a = group_minus(g, {g1});
    out.b = group_minus(g, {g.zero()});
    out.f.sigma.resize(out.a.size());
    for (int i = 0; i < out.a.size(); ++i)
        out.f.sigma[i] = index_in(out.b, sub(g, g1, out.a.elems[i]));
    multiplicity(out.a, out.b, out.f);  // sanity: valid matching
    return out;
}

namespace {

// Expands the parameters into the piecewise bijection, or reports failure
// when the two branches miss or clash on some element.
std::optional<LabeledMatching> try_expand_two_deficient(const GroupSpec& g,
                                                        const TwoDeficientMatching& td) {
    const GElem d = sub(g, td.g2, td.g1);
    LabeledMatching out{group_minus(g, {td.g1, td.g2}), group_minus(g, {g.zero(), td.g3}),
                        MatchingFn{}};
    std::set<GElem> b2;
    GElem cur = td.g3;
    for (std::int64_t i = 1; i <= td.l; ++i) {
        cur = add(g, cur, d);
        b2.insert(cur);
    }
    for (const GElem& rep : td.full_cosets) {
        GElem e = rep;
        do {
            if (e == g.zero() || e == td.g3) return std::nullopt;
            b2.insert(e);
            e = add(g, e, d);
        } while (e != rep);
    }
    out.f.sigma.assign(out.a.size(), -1);
    std::vector<char> used(out.b.size(), 0);
    for (int i = 0; i < out.a.size(); ++i) {
        const GElem& a = out.a.elems[i];
        GElem y1 = sub(g, td.g1, a);
        GElem y2 = sub(g, td.g2, a);
        bool take1 = out.b.contains(y1) && !b2.count(y1);
        bool take2 = b2.count(y2) > 0;
        if (take1 == take2) return std::nullopt;  // no image or an ambiguous one
        int j = index_in(out.b, take1 ? y1 : y2);
        if (used[j]) return std::nullopt;
        used[j] = 1;
        out.f.sigma[i] = j;
    }
    multiplicity(out.a, out.b, out.f);  // sanity: valid matching
    return out;
}

}  // namespace

std::vector<TwoDeficientMatching> two_deficient_matchings(const GroupSpec& g, const GElem& g1,
                                                          const GElem& g2, const GElem& g3,
                                                          const Caps& caps) {
    g.check_element(g1);
    g.check_element(g2);
    g.check_element(g3);
    if (g1 == g2) throw input_error("needs g1 != g2");
    if (g3 == g.zero()) throw input_error("needs g3 != 0");
    const GElem d = sub(g, g2, g1);
    const GElem ng3 = neg(g, g3);
    // Progression lengths whose chain avoids 0 and -g3. Only the length
    // whose chain exits exactly at -g3 expands to a total bijection, so at
    // most one survives the filter.
    std::vector<std::int64_t> lengths;
    if (d == ng3) {
        lengths.push_back(0);
    } else {
        GElem cur = d;
        std::int64_t l = 1;
        while (cur != g.zero() && cur != ng3) {
            lengths.push_back(l);
            cur = add(g, cur, d);
            ++l;
        }
    }
    // Cosets of <d> avoiding both 0 and g3 may join B2 wholesale (they close
    // under the step and never force an exit).
    std::vector<GElem> coset_reps;
    {
        std::set<GElem> seen;
        const std::int64_t card = g.cardinality();
        for (std::int64_t idx = 0; idx < card; ++idx) {
            GElem e = g.elem_of(idx);
            if (seen.count(e)) continue;
            GElem cur = e;
            bool eligible = true;
            do {
                seen.insert(cur);
                if (cur == g.zero() || cur == g3) eligible = false;
                cur = add(g, cur, d);
            } while (cur != e);
            if (eligible) coset_reps.push_back(e);
        }
    }
    if (coset_reps.size() > 20)
        throw cap_error("too many step cosets to enumerate (" + std::to_string(coset_reps.size()) +
                        ")");
    (void)caps;
    std::vector<TwoDeficientMatching> out;
    for (std::int64_t l : lengths) {
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << coset_reps.size()); ++mask) {
            TwoDeficientMatching td{g1, g2, g3, l, {}};
            for (size_t i = 0; i < coset_reps.size(); ++i)
                if ((mask >> i) & 1) td.full_cosets.push_back(coset_reps[i]);
            if (try_expand_two_deficient(g, td)) out.push_back(std::move(td));
        }
    }
    return out;
}

LabeledMatching expand_two_deficient(const GroupSpec& g, const TwoDeficientMatching& td) {
    auto lm = try_expand_two_deficient(g, td);
    if (!lm) throw input_error("progression parameters do not determine a total matching");
    return *lm;
}

// ---------------------------------------------------------------------------
// Bitmask sweep over pairs of subsets of Z/n.

namespace {

std::uint32_t rotl_mod(std::uint32_t m, int s, int n, std::uint32_t full) {
    if (s == 0) return m;
    return ((m << s) | (m >> (n - s))) & full;
}

std::vector<int> mask_residues(std::uint32_t m) {
    std::vector<int> rs;
    while (m) {
        rs.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return rs;
}

bool sidon_mask(const std::vector<int>& b, int n) {
    const int k = static_cast<int>(b.size());
    for (int x = 0; x < k; ++x)
        for (int y = x; y < k; ++y)
            for (int z = 0; z < k; ++z)
                for (int w = z; w < k; ++w) {
                    if ((b[x] + b[y]) % n != (b[z] + b[w]) % n) continue;
                    if (x != z && x != w && y != z && y != w) return false;
                }
    return true;
}

// Does some multiplicity class of matchings A -> B contain exactly one
// matching? Sums are packed five bits apiece into a 64-bit key (n <= 31,
// k <= 12).
bool acyclic_exists_masks(int n, std::uint32_t a_mask, const std::vector<int>& a_res,
                          const std::vector<int>& b_res, const Caps& caps) {
    const int k = static_cast<int>(a_res.size());
    BitMatrix m = BitMatrix::zero(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int s = a_res[i] + b_res[j];
            if (s >= n) s -= n;
            if (!((a_mask >> s) & 1u)) m.set(i, j);
        }
    std::vector<std::pair<std::uint64_t, int>> classes;
    int sums[12];
    for_each_matching(
        m,
        [&](const std::vector<int>& sigma) {
            for (int i = 0; i < k; ++i) {
                int s = a_res[i] + b_res[sigma[i]];
                if (s >= n) s -= n;
                int t = i;
                while (t > 0 && sums[t - 1] > s) {
                    sums[t] = sums[t - 1];
                    --t;
                }
                sums[t] = s;
            }
            std::uint64_t key = 0;
            for (int i = 0; i < k; ++i) key = (key << 5) | static_cast<std::uint64_t>(sums[i]);
            for (auto& e : classes)
                if (e.first == key) {
                    ++e.second;
                    return true;
                }
            classes.push_back({key, 1});
            return true;
        },
        caps);
    for (const auto& e : classes)
        if (e.second == 1) return true;
    return false;
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

struct StripeResult {
    std::uint64_t pairs = 0, eligible = 0;
    bool found_ce = false;
    std::size_t ce_b_pos = 0;
    std::uint32_t ce_a_mask = 0;
};

}  // namespace

WeakSweepReport weak_acyclic_property(std::int64_t n, int k_max, const WeakSweepOptions& opt) {
    if (n < 2 || n > 31) throw input_error("sweep supports 2 <= n <= 31");
    if (k_max < 1) throw input_error("k_max must be positive");
    const int jobs = std::max(1, opt.jobs);
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    WeakSweepReport rep;
    rep.n = n;
    rep.k_max = k_max;
    GroupSpec g = GroupSpec::cyclic(n);

    for (int k = 1; k <= std::min<int>(k_max, static_cast<int>(n)); ++k) {
        const std::uint64_t planned = binom(static_cast<int>(n), k) * binom(static_cast<int>(n), k);
        if (rep.pairs_seen + planned > opt.caps.pair_budget) {
            rep.completed = false;
            return rep;
        }
        // All k-subset masks in increasing order.
        std::vector<std::uint32_t> masks;
        for (std::uint32_t m = (std::uint32_t{1} << k) - 1; m <= full;) {
            masks.push_back(m);
            std::uint32_t c = m & -m, r = m + c;
            std::uint32_t next = (((r ^ m) >> 2) / c) | r;
            if (r > full || next == m) break;
            m = next;
        }
        std::vector<StripeResult> results(jobs);
        auto worker = [&](int t) {
            StripeResult& res = results[t];
            for (std::size_t bi = t; bi < masks.size(); bi += static_cast<std::size_t>(jobs)) {
                const std::uint32_t b_mask = masks[bi];
                std::vector<int> b_res = mask_residues(b_mask);
                if (opt.require_sidon && !sidon_mask(b_res, static_cast<int>(n))) {
                    res.pairs += masks.size();
                    continue;
                }
                for (std::uint32_t a_mask : masks) {
                    ++res.pairs;
                    std::uint32_t sums = 0;
                    for (int b : b_res) sums |= rotl_mod(a_mask, b, static_cast<int>(n), full);
                    if (a_mask & sums) continue;
                    ++res.eligible;
                    std::vector<int> a_res = mask_residues(a_mask);
                    if (!acyclic_exists_masks(static_cast<int>(n), a_mask, a_res, b_res, opt.caps)) {
                        if (!res.found_ce || bi < res.ce_b_pos ||
                            (bi == res.ce_b_pos && a_mask < res.ce_a_mask)) {
                            res.found_ce = true;
                            res.ce_b_pos = bi;
                            res.ce_a_mask = a_mask;
                        }
                    }
                }
            }
        };
        if (jobs == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
            for (auto& th : pool) th.join();
        }
        bool found = false;
        std::size_t best_b = 0;
        std::uint32_t best_a = 0;
        for (const StripeResult& res : results) {
            rep.pairs_seen += res.pairs;
            rep.eligible_pairs += res.eligible;
            if (res.found_ce &&
                (!found || res.ce_b_pos < best_b || (res.ce_b_pos == best_b && res.ce_a_mask < best_a))) {
                found = true;
                best_b = res.ce_b_pos;
                best_a = res.ce_a_mask;
            }
        }
        rep.k_explored = k;
        if (found) {
            rep.holds = false;
            auto to_subset = [&](std::uint32_t m) {
                std::vector<std::int64_t> rs;
                for (int r : mask_residues(m)) rs.push_back(r);
                return GSubset::of_residues(g, rs);
            };
            rep.counterexample = {to_subset(best_a), to_subset(masks[best_b])};
            return rep;
        }
    }
    return rep;
}

}  // namespace matchlab
