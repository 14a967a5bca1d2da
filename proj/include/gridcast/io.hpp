#ifndef GRIDCAST_IO_HPP_
#define GRIDCAST_IO_HPP_

#include <string>
#include <vector>

#include "gridcast/grid.hpp"

namespace gridcast {

enum class CaseFormat {
    native_json,
    matpower,
};

struct LoadOptions {
    /// Applied when a branch has no rating: sigma = multiplier * |base flow|,
    /// with an absolute floor for branches that carry (almost) nothing.
    double threshold_multiplier = 2.0;
    double threshold_floor = 0.1;  // p.u.
};

/// Reads a case file and returns a validated GridCase.
/// Throws PARSE_ERROR on malformed input and INVALID_CASE on invariant
/// violations. Synthesized-threshold and defaulted-bound fallbacks are
/// reported through `warnings` when provided.
GridCase load_case(const std::string& path, CaseFormat format, const LoadOptions& options = {},
                   std::vector<std::string>* warnings = nullptr);

}  // namespace gridcast

#endif
