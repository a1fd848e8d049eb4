// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef HDFNET_ERROR_H_
#define HDFNET_ERROR_H_

#include <stdexcept>
#include <string>

namespace hdf {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Tensor / spectrogram dimensions disagree with what an operation requires.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

// Argument outside the documented domain (bad exponent, bad band counts...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// File-level problems: unreadable WAV, malformed bundle, bad config document.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

}  // namespace hdf

#define HDF_CHECK_SHAPE(cond, msg)                         \
  do {                                                     \
    if (!(cond)) throw ::hdf::ShapeError(std::string(msg)); \
  } while (0)

#define HDF_CHECK_ARG(cond, msg)                                \
  do {                                                          \
    if (!(cond)) throw ::hdf::InvalidArgument(std::string(msg)); \
  } while (0)

#endif  // HDFNET_ERROR_H_
