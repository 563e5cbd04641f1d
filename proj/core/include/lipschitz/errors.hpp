#pragma once

#include <stdexcept>
#include <string>

namespace lipschitz {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input data.
struct InvalidArgument : Error {
  using Error::Error;
};

// A (kind, region) or (patch, axis) combination the construction does not support.
struct Unsupported : Error {
  using Error::Error;
};

struct Inadmissible : Error {
  using Error::Error;
};

// An enumeration or sampler exceeded a configured size limit.
struct CapExceeded : Error {
  using Error::Error;
};

// A sampler state failed its validity invariants.
struct CorruptState : Error {
  using Error::Error;
};

}  // namespace lipschitz
