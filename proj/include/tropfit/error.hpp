#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropfit {

enum class ErrorKind {
  NonFinite,
  DimTooSmall,
  DimMismatch,
  NotSquare,
  RankExceedsDim,
  InvalidPlucker,
  DegeneratePlucker,
  ResourceLimit,
  EmptyGrid,
  NotGeneralPosition,
  UnsupportedDim,
  DegenerateSlope,
  Infeasible,
  Degenerate,
  BadWeights,
  BadParams,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tropfit
