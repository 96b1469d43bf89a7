#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weyl_lab {

enum class Errc {
  invalid_argument,
  point_outside_domain,
  grid_too_coarse,
  length_mismatch,
  non_convergence,
  k_too_large,
  empty_spectrum,
  unsupported_order,
  bracket_failure,
  beyond_cutoff,
  window_too_small,
  grid_exceeds_resolution,
  window_exceeds_cutoff,
  config_parse,
  missing_prerequisite,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

/// Library error. what() reads "[module] message" so CLI output is tagged by
/// the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string_view module, std::string_view message);

  Errc code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  Errc code_;
  std::string module_;
};

[[noreturn]] void fail(Errc code, std::string_view module, std::string_view message);

}  // namespace weyl_lab
