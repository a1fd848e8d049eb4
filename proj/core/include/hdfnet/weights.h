// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Named parameter storage and the `.hdfw` single-file bundle.
//
// File layout (all integers little-endian):
//
//   char[4]  magic "HDFW"
//   u32      format version (1)
//   u64      config digest (ModelConfig::digest)
//   u32      tensor count N
//   N x {
//     u32    name length, followed by the UTF-8 name bytes
//     u8     dtype (0 = float32)
//     u32    rank, followed by rank x u64 dims
//     u64    byte offset into the payload
//   }
//   payload  float32 little-endian values, tensors at their offsets
//
// Tensor names follow stage{1,2}/{encoder|decoder|dprnn|head}/<block>/<tensor>.

#ifndef HDFNET_WEIGHTS_H_
#define HDFNET_WEIGHTS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hdfnet/config.h"
#include "hdfnet/error.h"

namespace hdf {

inline constexpr std::uint32_t kWeightFormatVersion = 1;

struct NamedTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t numel() const;
  bool operator==(const NamedTensor&) const = default;
};

// What a configuration expects to find in a bundle.
struct TensorSpec {
  std::string name;
  std::vector<std::size_t> shape;
  bool trainable = true;  // false for stored batch-norm statistics

  std::size_t numel() const;
};

class WeightBundle {
 public:
  WeightBundle() = default;
  explicit WeightBundle(std::uint64_t config_digest)
      : config_digest_(config_digest) {}

  std::uint64_t config_digest() const { return config_digest_; }
  void set_config_digest(std::uint64_t d) { config_digest_ = d; }

  void put(const std::string& name, NamedTensor tensor);
  bool contains(const std::string& name) const;
  // Throws MissingLayerError.
  const NamedTensor& get(const std::string& name) const;
  NamedTensor& get(const std::string& name);
  void erase(const std::string& name);

  const std::map<std::string, NamedTensor>& tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

  bool operator==(const WeightBundle&) const = default;

 private:
  std::uint64_t config_digest_ = 0;
  std::map<std::string, NamedTensor> tensors_;
};

class DigestMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};
class MissingLayerError : public FormatError {
 public:
  MissingLayerError(const std::string& layer)
      : FormatError("missing layer: " + layer), layer_(layer) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};
class LayerShapeError : public FormatError {
 public:
  LayerShapeError(const std::string& layer, const std::string& detail)
      : FormatError("shape mismatch for layer " + layer + ": " + detail),
        layer_(layer) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};
class UnexpectedLayerError : public FormatError {
 public:
  UnexpectedLayerError(const std::string& layer)
      : FormatError("unexpected layer: " + layer), layer_(layer) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};

// Checks digest, presence, shapes and the absence of extras against
// expected_layout(cfg). Throws the specific error for the first problem.
void validate_bundle(const WeightBundle& bundle, const ModelConfig& cfg);

void save_weights(const WeightBundle& bundle,
                  const std::filesystem::path& path);
// Reads without validating against a configuration.
WeightBundle read_weights(const std::filesystem::path& path);
// Reads and validates.
WeightBundle load_weights(const std::filesystem::path& path,
                          const ModelConfig& cfg);

// Serialization to/from memory; the file functions wrap these.
std::vector<std::uint8_t> encode_weights(const WeightBundle& bundle);
WeightBundle decode_weights(const std::vector<std::uint8_t>& bytes);

enum class InitKind {
  kRandom,  // uniform(+-1/sqrt(fan_in)); batch-norm statistics perturbed
  kZero,    // every tensor zero except batch-norm scale/var (=1)
};

// A bundle with every tensor the configuration expects. Values stored are
// exactly representable in float32, so save/load round trips are exact.
WeightBundle init_weights(const ModelConfig& cfg, InitKind kind,
                          std::uint64_t seed = 0);

}  // namespace hdf

#endif  // HDFNET_WEIGHTS_H_
