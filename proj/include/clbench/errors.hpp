#pragma once

#include <stdexcept>
#include <string>

namespace clbench {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateWaypoints : Error {
  using Error::Error;
};

struct InfeasibleSpeed : Error {
  using Error::Error;
};

struct SingularOffset : Error {
  using Error::Error;
};

struct IntegrationDiverged : Error {
  using Error::Error;
};

struct NoOverlap : Error {
  using Error::Error;
};

struct NoAssociation : Error {
  using Error::Error;
};

struct ReferenceGenFailed : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace clbench
