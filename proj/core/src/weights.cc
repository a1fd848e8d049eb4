// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/weights.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>

#include "hdfnet/layout.h"

namespace hdf {
namespace {

constexpr char kMagic[4] = {'H', 'D', 'F', 'W'};
constexpr std::uint8_t kDtypeF32 = 0;

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<std::uint8_t>(
          static_cast<std::make_unsigned_t<T>>(v) >> (8 * i)));
    }
  }
  void put_f32(float v) { put(std::bit_cast<std::uint32_t>(v)); }
  void put_bytes(const std::string& s) {
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    std::make_unsigned_t<T> v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::make_unsigned_t<T>>(b_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string get_string(std::size_t n, const char* what) {
    need(n, what);
    std::string s(b_.begin() + static_cast<long>(pos_),
                  b_.begin() + static_cast<long>(pos_ + n));
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (b_.size() - pos_ < n) {
      throw FormatError(std::string("truncated weight file while reading ") +
                        what);
    }
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

enum class Role { kWeight, kBias, kScale, kShift, kMean, kVar, kSlope };

bool ends_with(const std::string& s, const char* suffix) {
  const std::size_t n = std::strlen(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

Role role_of(const std::string& name) {
  if (ends_with(name, "/scale")) return Role::kScale;
  if (ends_with(name, "/shift")) return Role::kShift;
  if (ends_with(name, "/mean")) return Role::kMean;
  if (ends_with(name, "/var")) return Role::kVar;
  if (ends_with(name, "/slope")) return Role::kSlope;
  if (ends_with(name, "/bias") || ends_with(name, "/b_ih") ||
      ends_with(name, "/b_hh")) {
    return Role::kBias;
  }
  return Role::kWeight;
}

// Platform-independent uniform draws in [lo, hi), rounded to float32.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return static_cast<float>(lo + (hi - lo) * u);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::size_t NamedTensor::numel() const { return product(shape); }
std::size_t TensorSpec::numel() const { return product(shape); }

void WeightBundle::put(const std::string& name, NamedTensor tensor) {
  HDF_CHECK_ARG(!name.empty(), "tensor name must not be empty");
  HDF_CHECK_SHAPE(tensor.values.size() == tensor.numel(),
                  "tensor " + name + " has " +
                      std::to_string(tensor.values.size()) +
                      " values for shape " + shape_str(tensor.shape));
  tensors_[name] = std::move(tensor);
}

bool WeightBundle::contains(const std::string& name) const {
  return tensors_.count(name) != 0;
}

const NamedTensor& WeightBundle::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw MissingLayerError(name);
  return it->second;
}

NamedTensor& WeightBundle::get(const std::string& name) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw MissingLayerError(name);
  return it->second;
}

void WeightBundle::erase(const std::string& name) { tensors_.erase(name); }

void validate_bundle(const WeightBundle& bundle, const ModelConfig& cfg) {
  const std::uint64_t want = cfg.digest();
  if (bundle.config_digest() != want) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "config digest mismatch: file %016llx, config %016llx",
                  static_cast<unsigned long long>(bundle.config_digest()),
                  static_cast<unsigned long long>(want));
    throw DigestMismatchError(buf);
  }
  const std::vector<TensorSpec> layout = expected_layout(cfg);
  for (const TensorSpec& spec : layout) {
    if (!bundle.contains(spec.name)) throw MissingLayerError(spec.name);
    const NamedTensor& t = bundle.get(spec.name);
    if (t.shape != spec.shape) {
      throw LayerShapeError(spec.name, "expected " + shape_str(spec.shape) +
                                           ", found " + shape_str(t.shape));
    }
  }
  if (bundle.size() != layout.size()) {
    std::map<std::string, bool> known;
    for (const TensorSpec& spec : layout) known[spec.name] = true;
    for (const auto& [name, t] : bundle.tensors()) {
      if (!known.count(name)) throw UnexpectedLayerError(name);
    }
  }
}

std::vector<std::uint8_t> encode_weights(const WeightBundle& bundle) {
  Writer w;
  w.put_bytes(std::string(kMagic, 4));
  w.put<std::uint32_t>(kWeightFormatVersion);
  w.put<std::uint64_t>(bundle.config_digest());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(bundle.size()));
  std::uint64_t offset = 0;
  for (const auto& [name, t] : bundle.tensors()) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(name.size()));
    w.put_bytes(name);
    w.put<std::uint8_t>(kDtypeF32);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) w.put<std::uint64_t>(d);
    w.put<std::uint64_t>(offset);
    offset += 4 * t.values.size();
  }
  for (const auto& [name, t] : bundle.tensors()) {
    for (double v : t.values) w.put_f32(static_cast<float>(v));
  }
  return std::move(w.bytes());
}

WeightBundle decode_weights(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.get_string(4, "magic") != std::string(kMagic, 4)) {
    throw FormatError("not a weight file (bad magic)");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kWeightFormatVersion) {
    throw FormatError("unsupported weight format version " +
                      std::to_string(version));
  }
  WeightBundle bundle(r.get<std::uint64_t>("config digest"));
  const auto count = r.get<std::uint32_t>("tensor count");

  struct Entry {
    std::string name;
    std::vector<std::size_t> shape;
    std::uint64_t offset;
  };
  std::vector<Entry> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    Entry e;
    const auto len = r.get<std::uint32_t>("name length");
    e.name = r.get_string(len, "tensor name");
    if (e.name.empty()) throw FormatError("empty tensor name");
    const auto dtype = r.get<std::uint8_t>("dtype");
    if (dtype != kDtypeF32) {
      throw FormatError("tensor " + e.name + ": unsupported dtype " +
                        std::to_string(dtype));
    }
    const auto rank = r.get<std::uint32_t>("rank");
    if (rank > 8) {
      throw FormatError("tensor " + e.name + ": rank " +
                        std::to_string(rank) + " too large");
    }
    std::uint64_t numel = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      const auto d = r.get<std::uint64_t>("dims");
      if (d != 0 && numel > std::numeric_limits<std::uint32_t>::max() / d) {
        throw FormatError("tensor " + e.name + ": dimensions overflow");
      }
      numel *= d;
      e.shape.push_back(static_cast<std::size_t>(d));
    }
    e.offset = r.get<std::uint64_t>("offset");
    entries.push_back(std::move(e));
  }

  const std::size_t payload = r.pos();
  const std::uint64_t payload_size = bytes.size() - payload;
  for (const Entry& e : entries) {
    const std::uint64_t n = product(e.shape);
    if (e.offset > payload_size || 4 * n > payload_size - e.offset) {
      throw FormatError("tensor " + e.name + " extends past end of file");
    }
    if (bundle.contains(e.name)) {
      throw FormatError("duplicate tensor " + e.name);
    }
    NamedTensor t;
    t.shape = e.shape;
    t.values.resize(n);
    const std::uint8_t* src = bytes.data() + payload + e.offset;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint32_t u = 0;
      for (int b = 0; b < 4; ++b) {
        u |= static_cast<std::uint32_t>(src[4 * i + b]) << (8 * b);
      }
      t.values[i] = std::bit_cast<float>(u);
    }
    bundle.put(e.name, std::move(t));
  }
  return bundle;
}

void save_weights(const WeightBundle& bundle,
                  const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_weights(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

WeightBundle read_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open weight file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_weights(bytes);
}

WeightBundle load_weights(const std::filesystem::path& path,
                          const ModelConfig& cfg) {
  WeightBundle bundle = read_weights(path);
  validate_bundle(bundle, cfg);
  return bundle;
}

WeightBundle init_weights(const ModelConfig& cfg, InitKind kind,
                          std::uint64_t seed) {
  WeightBundle bundle(cfg.digest());
  Uniform uniform(seed);
  for (const TensorSpec& spec : expected_layout(cfg)) {
    NamedTensor t;
    t.shape = spec.shape;
    t.values.assign(spec.numel(), 0.0);
    const Role role = role_of(spec.name);
    if (kind == InitKind::kZero) {
      if (role == Role::kScale || role == Role::kVar) {
        std::fill(t.values.begin(), t.values.end(), 1.0);
      }
    } else {
      std::size_t fan_in = 1;
      for (std::size_t i = 1; i < spec.shape.size(); ++i) {
        fan_in *= spec.shape[i];
      }
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (double& v : t.values) {
        switch (role) {
          case Role::kWeight: v = uniform(-bound, bound); break;
          case Role::kBias: v = uniform(-0.05, 0.05); break;
          case Role::kScale: v = uniform(0.9, 1.1); break;
          case Role::kShift: v = uniform(-0.1, 0.1); break;
          case Role::kMean: v = uniform(-0.1, 0.1); break;
          case Role::kVar: v = uniform(0.8, 1.2); break;
          case Role::kSlope: v = 0.25; break;
        }
      }
    }
    bundle.put(spec.name, std::move(t));
  }
  return bundle;
}

}  // namespace hdf
