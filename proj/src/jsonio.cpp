#include "matchlab/jsonio.hpp"

#include <sstream>

namespace matchlab {

Json group_to_json(const GroupSpec& g) { return Json{{"orders", g.orders}}; }

GroupSpec group_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("orders") || !j["orders"].is_array())
        throw input_error("group spec must be {\"orders\":[...]}");
    return GroupSpec(j["orders"].get<std::vector<std::int64_t>>());
}

Json elem_to_json(const GroupSpec& g, const GElem& e) {
    if (g.rank() == 1) return Json(e.at(0));
    return Json(e);
}

GElem elem_from_json(const GroupSpec& g, const Json& j) {
    GElem e;
    if (j.is_number_integer()) {
        e = GElem{j.get<std::int64_t>()};
    } else if (j.is_array()) {
        e = j.get<GElem>();
    } else {
        throw input_error("element must be an integer or an array of integers");
    }
    e = g.reduce(e);
    return e;
}

Json subset_to_json(const GSubset& s) {
    Json arr = Json::array();
    for (const GElem& e : s.elems) arr.push_back(elem_to_json(s.group, e));
    return arr;
}

GSubset subset_from_json(const GroupSpec& g, const Json& j) {
    if (!j.is_array()) throw input_error("subset must be an array of elements");
    std::vector<GElem> es;
    for (const Json& v : j) es.push_back(elem_from_json(g, v));
    return GSubset::of(g, std::move(es));
}

Json bitmatrix_to_json(const BitMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.k; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.k; ++j) row.push_back(m.get(i, j) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    return Json{{"k", m.k}, {"rows", rows}};
}

BitMatrix bitmatrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("rows"))
        throw input_error("matrix must be {\"k\":k,\"rows\":[[0|1,...],...]}");
    const int k = j["k"].get<int>();
    if (k < 0 || k > 31) throw input_error("matrix size must be in [0, 31]");
    const Json& rows = j["rows"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != k)
        throw input_error("matrix needs exactly k rows");
    BitMatrix m = BitMatrix::zero(k);
    for (int i = 0; i < k; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != k)
            throw input_error("matrix rows need exactly k entries");
        for (int c = 0; c < k; ++c) {
            int v = rows[i][c].get<int>();
            if (v != 0 && v != 1) throw input_error("matrix entries must be 0 or 1");
            if (v) m.set(i, c);
        }
    }
    return m;
}

Json matching_to_json(const MatchingFn& f) { return Json{{"perm", f.sigma}}; }

MatchingFn matching_from_json(const Json& j) {
    if (j.is_array()) return MatchingFn{j.get<std::vector<int>>()};
    if (j.is_object() && j.contains("perm")) return MatchingFn{j["perm"].get<std::vector<int>>()};
    throw input_error("matching must be {\"perm\":[...]} or a plain array");
}

namespace {
std::string elem_key(const GElem& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(e[i]);
    }
    return s;
}
}  // namespace

Json multiplicity_to_json(const GroupSpec& g, const MultiplicityFn& m) {
    (void)g;
    Json out = Json::object();
    for (const auto& [e, c] : m.counts) out[elem_key(e)] = c;
    return out;
}

MultiplicityFn multiplicity_from_json(const GroupSpec& g, const Json& j) {
    if (!j.is_object()) throw input_error("multiplicity must be a map element -> count");
    MultiplicityFn m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        GElem e = g.reduce(GElem(parse_int_list(it.key())));
        m.counts[e] = it.value().get<std::int64_t>();
    }
    return m;
}

Json tower_to_json(const FieldTower& t) {
    return Json{{"p", t.p()}, {"m", t.m()}, {"n", t.n()}, {"defining_poly", t.defining_poly()}};
}

Json subspace_to_json(const Subspace& s) {
    Json arr = Json::array();
    for (FEl e : basis_elements(s)) arr.push_back(s.tower.digits(e));
    return arr;
}

std::string canonical_dump(const Json& j) { return j.dump(); }

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw input_error("empty entry in integer list");
        size_t used = 0;
        std::int64_t v = std::stoll(tok, &used);
        if (used != tok.size()) throw input_error("bad integer '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw input_error("empty integer list");
    return out;
}

}  // namespace matchlab
