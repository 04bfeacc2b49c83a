#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adiabus {

enum class Errc {
  InvalidSector,
  NotInSector,
  SectorMismatch,
  InvalidSize,
  InvalidArgument,
  NonConservingSector,
  DimensionMismatch,
  NoConvergence,
  NormDrift,
  AmbiguousInitial,
  Disconnected,
  OddLengthRequired,
  OddLength,
  InputSiteCoupled,
  ParseError,
  ValidationError,
  SchemaMismatch,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (sweeps, bindings) can record a status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace adiabus
