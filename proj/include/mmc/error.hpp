#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmc {

enum class ErrorKind {
  InvalidInput,
  SingularCovariance,
  EmptyNeighborhood,
  ZeroCovariance,
  NoSurvivors,
  DimensionMismatch,
  TooFewCenters,
  NoPairsInRange,
  TooFewRows,
  IsolatedNode,
  AllPointsRemoved,
  UnknownDataset,
  Io,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorKind::ZeroCovariance: return "ZeroCovariance";
    case ErrorKind::NoSurvivors: return "NoSurvivors";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooFewCenters: return "TooFewCenters";
    case ErrorKind::NoPairsInRange: return "NoPairsInRange";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::IsolatedNode: return "IsolatedNode";
    case ErrorKind::AllPointsRemoved: return "AllPointsRemoved";
    case ErrorKind::UnknownDataset: return "UnknownDataset";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the kinds above so that
// callers (the trial harness, the CLI) can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mmc
