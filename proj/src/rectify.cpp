#include "matchlab/rectify.hpp"

#include <algorithm>
#include <set>

#include "matchlab/acyclic.hpp"

namespace matchlab {

std::int64_t centered_rep(std::int64_t x, std::int64_t p) {
    if (p < 2) throw input_error("modulus must be >= 2");
    if (x < 0 || x >= p) throw input_error("residue out of range");
    return x <= p / 2 ? x : x - p;
}

std::int64_t FreimanEmbedding::at_res(std::int64_t r) const {
    auto it = phi.find(r);
    if (it == phi.end()) throw input_error("element outside the embedding domain");
    return it->second;
}

bool FreimanEmbedding::covers(const GSubset& s) const {
    for (const GElem& e : s.elems)
        if (!phi.count(e.at(0))) return false;
    return true;
}

namespace {

void require_prime_cyclic(const GroupSpec& g) {
    if (!g.is_cyclic_prime()) throw input_error("rectification is stated over Z/p, p prime");
}

// All additive quadruples must be preserved: group the pair sums by their
// residue class and insist each class has one integer value.
bool quadruples_preserved(const std::vector<std::int64_t>& res,
                          const std::vector<std::int64_t>& img, std::int64_t p) {
    std::map<std::int64_t, std::int64_t> class_value;
    for (size_t i = 0; i < res.size(); ++i)
        for (size_t j = i; j < res.size(); ++j) {
            std::int64_t cls = (res[i] + res[j]) % p;
            std::int64_t val = img[i] + img[j];
            auto [it, fresh] = class_value.try_emplace(cls, val);
            if (!fresh && it->second != val) return false;
        }
    return true;
}

}  // namespace

std::optional<FreimanEmbedding> find_embedding(const GSubset& x) {
    require_prime_cyclic(x.group);
    const std::int64_t p = x.group.orders[0];
    std::vector<std::int64_t> res;
    res.reserve(x.elems.size());
    for (const GElem& e : x.elems) res.push_back(e.at(0));
    std::vector<std::int64_t> img(res.size());
    for (std::int64_t lambda = 1; lambda < p; ++lambda) {
        bool ok = true;
        for (size_t i = 0; i < res.size(); ++i) {
            std::int64_t c = centered_rep(lambda * res[i] % p, p);
            if (4 * (c < 0 ? -c : c) >= p) {
                ok = false;
                break;
            }
            img[i] = c;
        }
        if (!ok) continue;
        if (!quadruples_preserved(res, img, p))
            throw soundness_error("short-interval dilation failed the quadruple check");
        FreimanEmbedding emb;
        emb.domain = x;
        emb.p = p;
        emb.lambda = lambda;
        for (size_t i = 0; i < res.size(); ++i) {
            emb.phi[res[i]] = img[i];
            for (size_t j = 0; j < i; ++j)
                if (img[j] == img[i]) throw soundness_error("dilation image is not injective");
        }
        return emb;
    }
    return std::nullopt;
}

namespace {

// Greedy block construction. All of bs must have sign * phi(b) > 0; as runs
// ascending in sign * phi. Picks, for each a, the remaining b with smallest
// sign * phi(b) such that a + b avoids the unprocessed part of the block.
void greedy_block(const GroupSpec& g, const std::vector<std::int64_t>& as,
                  const std::vector<std::int64_t>& bs, const FreimanEmbedding& phi, int sign,
                  std::map<std::int64_t, std::int64_t>& out) {
    auto by_signed_phi = [&](std::int64_t u, std::int64_t v) {
        return sign * phi.at_res(u) < sign * phi.at_res(v);
    };
    std::vector<std::int64_t> a_order = as;
    std::sort(a_order.begin(), a_order.end(), by_signed_phi);
    std::vector<std::int64_t> b_left = bs;
    std::sort(b_left.begin(), b_left.end(), by_signed_phi);
    const std::int64_t p = g.orders[0];
    std::set<std::int64_t> a_unprocessed(a_order.begin(), a_order.end());
    for (std::int64_t a : a_order) {
        a_unprocessed.erase(a);
        bool assigned = false;
        for (size_t t = 0; t < b_left.size(); ++t) {
            std::int64_t s = (a + b_left[t]) % p;
            if (a_unprocessed.count(s)) continue;
            out[a] = b_left[t];
            b_left.erase(b_left.begin() + t);
            assigned = true;
            break;
        }
        if (!assigned)
            throw soundness_error("greedy step found no eligible image; the block invariant broke");
    }
}

}  // namespace

MatchingFn greedy_acyclic(const GSubset& a, const GSubset& b, const FreimanEmbedding& phi,
                          const Caps& caps) {
    require_prime_cyclic(a.group);
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    if (a.size() != b.size()) throw input_error("subsets must have equal size");
    if (b.contains(b.group.zero())) throw input_error("B must not contain the neutral element");
    const GroupSpec& g = a.group;
    if (g.orders[0] != phi.p) throw input_error("embedding modulus differs from the group");
    GSubset sums = sumset(a, b);
    if (!phi.covers(a) || !phi.covers(b) || !phi.covers(sums) || !phi.phi.count(0))
        throw input_error("embedding domain must cover (A+B) u A u B u {0}");
    if (phi.at_res(0) != 0) throw input_error("embedding must send 0 to 0");
    // Additivity along the embedding.
    for (const GElem& ae : a.elems)
        for (const GElem& be : b.elems) {
            std::int64_t s = (ae.at(0) + be.at(0)) % phi.p;
            if (phi.at_res(s) != phi.at_res(ae.at(0)) + phi.at_res(be.at(0)))
                throw soundness_error("embedding is not additive on A x B");
        }

    // Order A by phi; split B by sign and A by the block sizes.
    std::vector<std::int64_t> a_sorted;
    for (const GElem& e : a.elems) a_sorted.push_back(e.at(0));
    std::sort(a_sorted.begin(), a_sorted.end(),
              [&](std::int64_t u, std::int64_t v) { return phi.at_res(u) < phi.at_res(v); });
    std::vector<std::int64_t> b_neg, b_pos;
    for (const GElem& e : b.elems) {
        std::int64_t v = phi.at_res(e.at(0));
        if (v == 0) throw soundness_error("embedding sends a nonzero element of B to zero");
        (v < 0 ? b_neg : b_pos).push_back(e.at(0));
    }
    const size_t l = b_neg.size();
    std::vector<std::int64_t> a_neg(a_sorted.begin(), a_sorted.begin() + l);
    std::vector<std::int64_t> a_pos(a_sorted.begin() + l, a_sorted.end());

    std::map<std::int64_t, std::int64_t> assignment;
    greedy_block(g, a_neg, b_neg, phi, -1, assignment);
    greedy_block(g, a_pos, b_pos, phi, +1, assignment);

    MatchingFn f;
    f.sigma.resize(a.size());
    for (int i = 0; i < a.size(); ++i) {
        std::int64_t img = assignment.at(a.elems[i].at(0));
        auto it = std::lower_bound(b.elems.begin(), b.elems.end(), GElem{img});
        f.sigma[i] = static_cast<int>(it - b.elems.begin());
    }
    // The output must be a matching of the full pair, and the embedding must
    // move every element strictly in the direction of its block.
    for (int i = 0; i < a.size(); ++i) {
        std::int64_t ar = a.elems[i].at(0);
        std::int64_t br = b.elems[f.sigma[i]].at(0);
        std::int64_t s = (ar + br) % phi.p;
        if (a.contains(GElem{s})) throw soundness_error("greedy output violates the matching condition");
        std::int64_t dir = phi.at_res(br);
        if ((dir > 0 && phi.at_res(s) <= phi.at_res(ar)) || (dir < 0 && phi.at_res(s) >= phi.at_res(ar)))
            throw soundness_error("embedding monotonicity failed on a used pair");
    }
    if (a.size() <= caps.cap_enum) {
        if (!is_acyclic(a, b, f, caps).acyclic)
            throw soundness_error("greedy output is not acyclic per the enumeration oracle");
    }
    return f;
}

RectifyOutcome acyclic_via_rectification(const GSubset& a, const GSubset& b, const Caps& caps) {
    require_prime_cyclic(a.group);
    if (!(a.group == b.group)) throw input_error("subsets live in different groups");
    if (a.size() != b.size()) throw input_error("subsets must have equal size");
    if (b.contains(b.group.zero())) throw input_error("B must not contain the neutral element");
    std::set<GElem> xs;
    GSubset sums = sumset(a, b);
    xs.insert(sums.elems.begin(), sums.elems.end());
    xs.insert(a.elems.begin(), a.elems.end());
    xs.insert(b.elems.begin(), b.elems.end());
    xs.insert(a.group.zero());
    GSubset x = GSubset::from_sorted_unique(a.group, std::vector<GElem>(xs.begin(), xs.end()));
    RectifyOutcome out;
    out.embedding = find_embedding(x);
    if (!out.embedding) {
        out.diagnostic = "no dilation places the configuration inside (-p/4, p/4)";
        return out;
    }
    out.matching = greedy_acyclic(a, b, *out.embedding, caps);
    return out;
}

}  // namespace matchlab
