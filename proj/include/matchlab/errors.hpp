#pragma once

#include <stdexcept>
#include <string>

namespace matchlab {

// Bad or inconsistent caller input (mismatched groups, non-prime modulus, ...).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap would be exceeded; never silently approximate.
struct cap_error : std::runtime_error {
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal guarantee failed to hold on a concrete instance. These are
// reported, never swallowed: a construction whose validity is promised by
// theory must re-verify itself and complain loudly if the check fails.
struct soundness_error : std::runtime_error {
    explicit soundness_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace matchlab
