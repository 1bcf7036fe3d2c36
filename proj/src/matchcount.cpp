#include "matchlab/matchcount.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace matchlab {

Biadjacency build_bigraph(const GSubset& a, const GSubset& b) {
    if (!(a.group == b.group)) throw input_error("biadjacency requires subsets of one group");
    if (a.size() != b.size()) throw input_error("biadjacency requires #A = #B");
    const int k = a.size();
    if (k > 31) throw input_error("biadjacency sizes above 31 are not supported");
    BitMatrix m = BitMatrix::zero(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (!a.contains(add(a.group, a.elems[i], b.elems[j]))) m.set(i, j);
    return Biadjacency{std::move(m), a, b};
}

namespace {

// Augmenting-path search for one left vertex.
bool try_augment(const BitMatrix& m, int u, std::vector<char>& visited, std::vector<int>& match_of_col) {
    for (int j = 0; j < m.k; ++j) {
        if (!m.get(u, j) || visited[j]) continue;
        visited[j] = 1;
        if (match_of_col[j] < 0 || try_augment(m, match_of_col[j], visited, match_of_col)) {
            match_of_col[j] = u;
            return true;
        }
    }
    return false;
}

int max_matching(const BitMatrix& m, std::vector<int>& match_of_col) {
    match_of_col.assign(m.k, -1);
    int size = 0;
    std::vector<char> visited(m.k);
    for (int u = 0; u < m.k; ++u) {
        std::fill(visited.begin(), visited.end(), 0);
        if (try_augment(m, u, visited, match_of_col)) ++size;
    }
    return size;
}

}  // namespace

bool has_perfect_matching(const BitMatrix& m) {
    std::vector<int> match_of_col;
    return max_matching(m, match_of_col) == m.k;
}

std::optional<MatchingFn> find_perfect_matching(const BitMatrix& m) {
    std::vector<int> match_of_col;
    if (max_matching(m, match_of_col) != m.k) return std::nullopt;
    MatchingFn f;
    f.sigma.assign(m.k, -1);
    for (int j = 0; j < m.k; ++j) f.sigma[match_of_col[j]] = j;
    return f;
}

void for_each_matching(const BitMatrix& m, const std::function<bool(const std::vector<int>&)>& visit,
                       const Caps& caps) {
    if (m.k > caps.cap_enum)
        throw cap_error("matching enumeration size " + std::to_string(m.k) + " exceeds cap " +
                        std::to_string(caps.cap_enum));
    const int k = m.k;
    std::vector<int> sigma(k, -1);
    if (k == 0) {
        visit(sigma);  // the empty bijection
        return;
    }
    const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
    std::vector<std::uint32_t> avail_stack(k + 1);
    avail_stack[0] = full;
    int i = 0;
    int j = -1;  // last column tried at depth i
    // Iterative DFS over rows; columns tried in ascending order gives
    // lexicographic order on sigma.
    while (i >= 0) {
        std::uint32_t cand = m.rows[i] & avail_stack[i];
        // strip columns <= j
        if (j >= 0) cand &= ~((j == 31) ? ~0u : ((2u << j) - 1));
        if (cand == 0) {
            --i;
            j = (i >= 0) ? sigma[i] : -1;
            continue;
        }
        int col = std::countr_zero(cand);
        sigma[i] = col;
        if (i == k - 1) {
            if (!visit(sigma)) return;
            j = col;  // continue scanning this row
        } else {
            avail_stack[i + 1] = avail_stack[i] & ~(1u << col);
            ++i;
            j = -1;
        }
    }
}

EnumerationResult enumerate_matchings(const BitMatrix& m, std::optional<std::int64_t> limit,
                                      const Caps& caps) {
    EnumerationResult out;
    for_each_matching(
        m,
        [&](const std::vector<int>& sigma) {
            if (limit && static_cast<std::int64_t>(out.matchings.size()) >= *limit) {
                out.truncated = true;
                return false;
            }
            out.matchings.push_back(MatchingFn{sigma});
            return true;
        },
        caps);
    return out;
}

BigInt permanent(const BitMatrix& m, const Caps& caps) {
    const int k = m.k;
    if (k > caps.cap_perm)
        throw cap_error("permanent size " + std::to_string(k) + " exceeds cap " +
                        std::to_string(caps.cap_perm));
    if (k == 0) return 1;
    // Inclusion-exclusion over nonempty column subsets S:
    //   per(M) = (-1)^k * sum_S (-1)^{|S|} prod_i rowsum_i(S).
    // Subsets are walked in Gray-code order so one bit flips per step; the
    // per-term product fits unsigned __int128 for k <= 24 (max 24^24).
    std::vector<int> rowsum(k, 0);
    BigInt total = 0;
    unsigned __int128 pos = 0, neg = 0;
    int flushes = 0;
    auto flush = [&]() {
        total += bigint_from_u128(pos);
        total -= bigint_from_u128(neg);
        pos = neg = 0;
        flushes = 0;
    };
    std::uint32_t prev_gray = 0;
    const std::uint64_t end = std::uint64_t{1} << k;
    for (std::uint64_t s = 1; s < end; ++s) {
        std::uint32_t gray = static_cast<std::uint32_t>(s ^ (s >> 1));
        std::uint32_t changed = gray ^ prev_gray;
        prev_gray = gray;
        int col = std::countr_zero(changed);
        int delta = (gray >> col) & 1u ? 1 : -1;
        for (int i = 0; i < k; ++i)
            if (m.get(i, col)) rowsum[i] += delta;
        unsigned __int128 prod = 1;
        for (int i = 0; i < k; ++i) {
            if (rowsum[i] == 0) {
                prod = 0;
                break;
            }
            prod *= static_cast<unsigned>(rowsum[i]);
        }
        if (prod != 0) {
            if (std::popcount(gray) & 1)
                neg += prod;
            else
                pos += prod;
            if (++flushes == (1 << 17)) flush();
        }
    }
    flush();
    if (k & 1) total = -total;
    return total;
}

DegreeProfile degree_profile(const BitMatrix& m) {
    DegreeProfile d;
    d.row_sums.assign(m.k, 0);
    d.col_sums.assign(m.k, 0);
    for (int i = 0; i < m.k; ++i) {
        d.row_sums[i] = std::popcount(m.rows[i]);
        for (int j = 0; j < m.k; ++j)
            if (m.get(i, j)) ++d.col_sums[j];
    }
    return d;
}

namespace {

// prod (d!)^(1/d) over the degrees, with an empty degree collapsing the
// whole product to zero (no matching can exist through a degree-0 vertex).
double degree_factorial_product(const std::vector<int>& degrees) {
    double log_sum = 0.0;
    for (int d : degrees) {
        if (d == 0) return 0.0;
        log_sum += std::lgamma(static_cast<double>(d) + 1.0) / d;
    }
    return std::exp(log_sum);
}

BigInt greedy_lower(std::vector<int> degrees) {
    std::sort(degrees.begin(), degrees.end());
    BigInt prod = 1;
    for (size_t i = 0; i < degrees.size(); ++i) {
        std::int64_t f = degrees[i] - static_cast<std::int64_t>(i);
        if (f <= 0) return 0;
        prod *= f;
    }
    return prod;
}

}  // namespace

PermanentBounds bounds(const BitMatrix& m) {
    DegreeProfile d = degree_profile(m);
    PermanentBounds out;
    const double by_rows = degree_factorial_product(d.row_sums);
    const double by_cols = degree_factorial_product(d.col_sums);
    if (by_rows <= by_cols) {
        out.bregman_minc_upper = by_rows;
        out.row_or_col_choice = BoundSide::row;
    } else {
        out.bregman_minc_upper = by_cols;
        out.row_or_col_choice = BoundSide::col;
    }
    out.ostrand_lower = std::max(greedy_lower(d.row_sums), greedy_lower(d.col_sums));
    return out;
}

double vdw_lower(int k, int r) {
    if (r < 1 || r > k) throw input_error("regular degree must satisfy 1 <= r <= k");
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc *= static_cast<double>(i) * r / k;
    return acc;
}

BigInt count_with_multiplicity(const GSubset& a, const GSubset& b, const MultiplicityFn& m,
                               const Caps& caps) {
    if (m.total_mass() != a.size())
        throw input_error("multiplicity mass does not equal the subset size");
    for (const auto& [e, c] : m.counts) {
        a.group.check_element(e);
        if (c < 0) throw input_error("multiplicity counts must be nonnegative");
    }
    Biadjacency big = build_bigraph(a, b);
    BigInt count = 0;
    for_each_matching(
        big.mat,
        [&](const std::vector<int>& sigma) {
            MultiplicityFn got;
            for (int i = 0; i < big.mat.k; ++i)
                ++got.counts[add(a.group, a.elems[i], b.elems[sigma[i]])];
            if (got == m) ++count;
            return true;
        },
        caps);
    return count;
}

}  // namespace matchlab
