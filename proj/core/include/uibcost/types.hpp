// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uibcost {

// Spatial extent and channel count of an activation tensor.
struct TensorShape {
  int h = 1;
  int w = 1;
  int c = 1;

  std::int64_t elems() const { return std::int64_t(h) * w * c; }
  bool operator==(const TensorShape&) const = default;
};

// Bytes per element for weights and activations. Defaults model INT8
// deployment; fp16() gives the 2-byte variant used for mobile GPUs.
struct DtypeWidths {
  int weight_bytes = 1;
  int activation_bytes = 1;

  static DtypeWidths int8() { return {1, 1}; }
  static DtypeWidths fp16() { return {2, 2}; }
  bool operator==(const DtypeWidths&) const = default;
};

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Base for all library errors. The CLI maps Error -> exit 2 and any other
// exception -> exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChannelMismatch : public Error {
 public:
  ChannelMismatch(int block_index, int expected, int actual)
      : Error("block " + std::to_string(block_index) + ": expected " +
              std::to_string(expected) + " input channels, got " +
              std::to_string(actual)),
        block_index(block_index) {}
  int block_index;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line(line) {}
  int line;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonPositiveLatency : public Error {
 public:
  using Error::Error;
};

class EmptySpace : public Error {
 public:
  using Error::Error;
};

class UnknownModel : public Error {
 public:
  using Error::Error;
};

}  // namespace uibcost
