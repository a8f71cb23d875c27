#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxrep {

enum class ErrorKind {
  InvalidDims,
  Bounds,
  ReservedColor,
  EmptyComponent,
  Config,
  Format,
  Index,
  Parse,
  Truncation,
  DegenerateMesh,
  Size,
  Capacity,
  LossyMode,
  Io,
  InsufficientData,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace voxrep
