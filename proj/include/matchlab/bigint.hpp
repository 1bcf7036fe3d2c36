#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace matchlab {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt bigint_from_u128(unsigned __int128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace matchlab
