#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfidac {

enum class Errc {
  InvalidArgument,
  IncompatibleTag,
  Unprogrammed,
  PayloadTooLong,
  NotConnected,
  LinkDown,
  WriteInFlight,
  DuplicateStaffId,
  UnknownStaff,
  TagAlreadyAssigned,
  UnconfiguredReader,
  SequenceGap,
  NotFound,
  ConfigInvalid,
  StoreCorrupt,
  ScriptParseError,
  ClockMode,
  WriteFailed,
};

std::string_view to_string(Errc code) noexcept;

// Every failure the library reports is an Error carrying one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rfidac
