#ifndef GRIDCAST_ERRORS_HPP_
#define GRIDCAST_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gridcast {

enum class ErrorCode {
    parse_error,
    invalid_case,
    dimension_mismatch,
    singular_system,
    nonpositive_threshold,
    step_out_of_range,
    empty_intersection,
    postcheck_failed,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::parse_error: return "PARSE_ERROR";
        case ErrorCode::invalid_case: return "INVALID_CASE";
        case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::singular_system: return "SINGULAR_SYSTEM";
        case ErrorCode::nonpositive_threshold: return "NONPOSITIVE_THRESHOLD";
        case ErrorCode::step_out_of_range: return "STEP_OUT_OF_RANGE";
        case ErrorCode::empty_intersection: return "EMPTY_INTERSECTION";
        case ErrorCode::postcheck_failed: return "POSTCHECK_FAILED";
    }
    return "UNKNOWN";
}

class GridError : public std::runtime_error {
 public:
    GridError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

 private:
    ErrorCode code_;
};

}  // namespace gridcast

#endif
