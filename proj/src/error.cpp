#include "weyl_lab/error.hpp"

namespace weyl_lab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::point_outside_domain: return "point-outside-domain";
    case Errc::grid_too_coarse: return "grid-too-coarse";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::non_convergence: return "non-convergence";
    case Errc::k_too_large: return "k-too-large";
    case Errc::empty_spectrum: return "empty-spectrum";
    case Errc::unsupported_order: return "unsupported-order";
    case Errc::bracket_failure: return "bracket-failure";
    case Errc::beyond_cutoff: return "beyond-cutoff";
    case Errc::window_too_small: return "window-too-small";
    case Errc::grid_exceeds_resolution: return "grid-exceeds-resolution";
    case Errc::window_exceeds_cutoff: return "window-exceeds-cutoff";
    case Errc::config_parse: return "config-parse";
    case Errc::missing_prerequisite: return "missing-prerequisite";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

namespace {
std::string tagged(Errc code, std::string_view module, std::string_view message) {
  std::string out;
  out.reserve(module.size() + message.size() + 32);
  out += '[';
  out += module;
  out += "] ";
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}
}  // namespace

Error::Error(Errc code, std::string_view module, std::string_view message)
    : std::runtime_error(tagged(code, module, message)), code_(code), module_(module) {}

void fail(Errc code, std::string_view module, std::string_view message) {
  throw Error(code, module, message);
}

}  // namespace weyl_lab
