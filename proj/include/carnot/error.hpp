#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  not_skew_symmetric,
  linearly_dependent,
  too_many_vertical,
  out_of_domain,
  curve_escape,
  degenerate,
  rank_deficient,
  insufficient_samples,
  parse_error,
  io_error,
};

const char* to_string(Errc code) noexcept;

/// Library-wide exception. Every failure that the CLI maps to exit status 1
/// is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace carnot
