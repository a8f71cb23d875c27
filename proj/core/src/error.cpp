#include "voxrep/error.hpp"

namespace voxrep {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDims: return "invalid-dims";
    case ErrorKind::Bounds: return "bounds";
    case ErrorKind::ReservedColor: return "reserved-color";
    case ErrorKind::EmptyComponent: return "empty-component";
    case ErrorKind::Config: return "config";
    case ErrorKind::Format: return "format";
    case ErrorKind::Index: return "index";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::DegenerateMesh: return "degenerate-mesh";
    case ErrorKind::Size: return "size";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::LossyMode: return "lossy-mode";
    case ErrorKind::Io: return "io";
    case ErrorKind::InsufficientData: return "insufficient-data";
  }
  return "unknown";
}

}  // namespace voxrep
