#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace witnesskit {

/// Domain error carrying a stable machine-readable kind, e.g. "SingularJacobian".
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

namespace error_kind {
inline constexpr const char* kDimensionMismatch = "DimensionMismatch";
inline constexpr const char* kParse = "ParseError";
inline constexpr const char* kSingularJacobian = "SingularJacobian";
inline constexpr const char* kPrecondition = "PreconditionViolation";
inline constexpr const char* kTrackingFailure = "TrackingFailure";
inline constexpr const char* kSingularMatrix = "SingularMatrix";
inline constexpr const char* kIndexOutOfRange = "IndexOutOfRange";
inline constexpr const char* kUnsupportedProduct = "UnsupportedProduct";
inline constexpr const char* kInvalidArgument = "InvalidArgument";
inline constexpr const char* kSingularQuadric = "SingularQuadric";
inline constexpr const char* kDegenerateFlag = "DegenerateFlag";
inline constexpr const char* kInconclusive = "Inconclusive";
inline constexpr const char* kIo = "IoError";
}  // namespace error_kind

}  // namespace witnesskit
