#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vecmass {

enum class ErrorKind {
  velocity_out_of_range,
  invalid_argument,
  direction_class_mismatch,
  resolution_error,
  lightlike_singularity,
  time_ordering,
  velocity_mismatch,
  occupancy_overflow,
  spacelike_segment,
  no_timelike_path,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every module. `module()` names the owning module so
/// the CLI can report module-qualified messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace vecmass
