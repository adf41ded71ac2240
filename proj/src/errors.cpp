#include "rfidac/errors.hpp"

namespace rfidac {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IncompatibleTag: return "IncompatibleTag";
    case Errc::Unprogrammed: return "Unprogrammed";
    case Errc::PayloadTooLong: return "PayloadTooLong";
    case Errc::NotConnected: return "NotConnected";
    case Errc::LinkDown: return "LinkDown";
    case Errc::WriteInFlight: return "WriteInFlight";
    case Errc::DuplicateStaffId: return "DuplicateStaffId";
    case Errc::UnknownStaff: return "UnknownStaff";
    case Errc::TagAlreadyAssigned: return "TagAlreadyAssigned";
    case Errc::UnconfiguredReader: return "UnconfiguredReader";
    case Errc::SequenceGap: return "SequenceGap";
    case Errc::NotFound: return "NotFound";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::StoreCorrupt: return "StoreCorrupt";
    case Errc::ScriptParseError: return "ScriptParseError";
    case Errc::ClockMode: return "ClockMode";
    case Errc::WriteFailed: return "WriteFailed";
  }
  return "Unknown";
}

}  // namespace rfidac
