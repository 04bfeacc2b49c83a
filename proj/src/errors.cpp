#include "adiabus/errors.hpp"

namespace adiabus {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidSector: return "InvalidSector";
    case Errc::NotInSector: return "NotInSector";
    case Errc::SectorMismatch: return "SectorMismatch";
    case Errc::InvalidSize: return "InvalidSize";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonConservingSector: return "NonConservingSector";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NormDrift: return "NormDrift";
    case Errc::AmbiguousInitial: return "AmbiguousInitial";
    case Errc::Disconnected: return "Disconnected";
    case Errc::OddLengthRequired: return "OddLengthRequired";
    case Errc::OddLength: return "OddLength";
    case Errc::InputSiteCoupled: return "InputSiteCoupled";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace adiabus
