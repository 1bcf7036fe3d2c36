#pragma once

#include <cstdint>
#include <map>

#include "matchlab/abelian.hpp"

namespace matchlab {

// Sparse multiset of realized sums a + f(a); absent key means count zero.
struct MultiplicityFn {
    std::map<GElem, std::int64_t> counts;

    std::int64_t total_mass() const {
        std::int64_t m = 0;
        for (const auto& [e, c] : counts) m += c;
        return m;
    }
    std::int64_t at(const GElem& x) const {
        auto it = counts.find(x);
        return it == counts.end() ? 0 : it->second;
    }
    bool operator==(const MultiplicityFn& o) const { return counts == o.counts; }
};

}  // namespace matchlab
