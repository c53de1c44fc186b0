#pragma once

#include <stdexcept>
#include <string>

namespace koszul {

// Stable error codes; the CLI maps every Error to exit code 2 and prints the code name.
enum class ErrorCode {
    parse_error,
    arity_mismatch,
    weight_homogeneity,
    relation_space,
    dimension_mismatch,
    containment,
    index_out_of_range,
    truncation,
    unsupported_presentation,
    structural,
    internal_consistency,
    unknown_preset,
    io_error,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

} // namespace koszul
