#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prenelab {

enum class Errc {
  InvalidArgument,
  ScheduleTooLong,
  ProfileLengthMismatch,
  MissingRegion,
  RegionMapMismatch,
  SpaceExhausted,
  Quiescent,
  InvalidEvent,
  InvalidConfig,
  Parse,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ScheduleTooLong: return "ScheduleTooLong";
    case Errc::ProfileLengthMismatch: return "ProfileLengthMismatch";
    case Errc::MissingRegion: return "MissingRegion";
    case Errc::RegionMapMismatch: return "RegionMapMismatch";
    case Errc::SpaceExhausted: return "SpaceExhausted";
    case Errc::Quiescent: return "Quiescent";
    case Errc::InvalidEvent: return "InvalidEvent";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace prenelab
