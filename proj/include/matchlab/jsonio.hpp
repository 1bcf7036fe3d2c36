#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "matchlab/abelian.hpp"
#include "matchlab/gfield.hpp"
#include "matchlab/matchcount.hpp"
#include "matchlab/multiplicity.hpp"

namespace matchlab {

using Json = nlohmann::json;

Json group_to_json(const GroupSpec& g);
GroupSpec group_from_json(const Json& j);

// Elements of cyclic groups render as bare integers, higher ranks as arrays;
// both forms are accepted on input.
Json elem_to_json(const GroupSpec& g, const GElem& e);
GElem elem_from_json(const GroupSpec& g, const Json& j);

Json subset_to_json(const GSubset& s);
GSubset subset_from_json(const GroupSpec& g, const Json& j);

Json bitmatrix_to_json(const BitMatrix& m);
BitMatrix bitmatrix_from_json(const Json& j);

Json matching_to_json(const MatchingFn& f);
MatchingFn matching_from_json(const Json& j);

// Map keyed by the comma-joined coordinates of each element.
Json multiplicity_to_json(const GroupSpec& g, const MultiplicityFn& m);
MultiplicityFn multiplicity_from_json(const GroupSpec& g, const Json& j);

Json tower_to_json(const FieldTower& t);
Json subspace_to_json(const Subspace& s);  // basis rows as ambient coefficient vectors

std::string canonical_dump(const Json& j);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// "1,2,4" -> residues; used by the CLI shorthand for cyclic groups.
std::vector<std::int64_t> parse_int_list(const std::string& s);

}  // namespace matchlab
