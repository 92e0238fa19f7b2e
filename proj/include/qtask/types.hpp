#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtask {

using Complex = std::complex<double>;

// Handles are never reused within one circuit; 0 is reserved as "none".
using GateId = std::uint32_t;
using NetId = std::uint32_t;
using StageId = std::uint32_t;

inline constexpr GateId kNoGate = 0;
inline constexpr NetId kNoNet = 0;

/// Base class of all errors thrown by the circuit and engine APIs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NetConflictError : public Error {
 public:
  using Error::Error;
};

class UnknownNetError : public Error {
 public:
  using Error::Error;
};

class UnknownGateError : public Error {
 public:
  using Error::Error;
};

class BadQubitError : public Error {
 public:
  using Error::Error;
};

class InvalidPositionError : public Error {
 public:
  using Error::Error;
};

class StaleStateError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class SuperpositionGateError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtask
