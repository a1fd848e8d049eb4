// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef HDFNET_TENSOR_H_
#define HDFNET_TENSOR_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hdf {

// Dense (batch, channel, time, freq) array, frequency fastest.
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(std::size_t batch, std::size_t channels, std::size_t time,
          std::size_t freq, double fill = 0.0)
      : dims_{batch, channels, time, freq},
        data_(batch * channels * time * freq, fill) {}

  std::size_t batch() const { return dims_[0]; }
  std::size_t channels() const { return dims_[1]; }
  std::size_t time() const { return dims_[2]; }
  std::size_t freq() const { return dims_[3]; }
  const std::array<std::size_t, 4>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::size_t b, std::size_t c, std::size_t t,
                    std::size_t f) const {
    return ((b * dims_[1] + c) * dims_[2] + t) * dims_[3] + f;
  }
  double& operator()(std::size_t b, std::size_t c, std::size_t t,
                     std::size_t f) {
    return data_[index(b, c, t, f)];
  }
  double operator()(std::size_t b, std::size_t c, std::size_t t,
                    std::size_t f) const {
    return data_[index(b, c, t, f)];
  }

  // Contiguous frequency row at (b, c, t).
  std::span<double> row(std::size_t b, std::size_t c, std::size_t t) {
    return {data_.data() + index(b, c, t, 0), dims_[3]};
  }
  std::span<const double> row(std::size_t b, std::size_t c,
                              std::size_t t) const {
    return {data_.data() + index(b, c, t, 0), dims_[3]};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor4& other) const { return dims_ == other.dims_; }
  std::string shape_string() const;

 private:
  std::array<std::size_t, 4> dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

// Dense (batch, channel, time) array; the result of pooling over frequency.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t batch, std::size_t channels, std::size_t time,
          double fill = 0.0)
      : dims_{batch, channels, time}, data_(batch * channels * time, fill) {}

  std::size_t batch() const { return dims_[0]; }
  std::size_t channels() const { return dims_[1]; }
  std::size_t time() const { return dims_[2]; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t b, std::size_t c, std::size_t t) {
    return data_[(b * dims_[1] + c) * dims_[2] + t];
  }
  double operator()(std::size_t b, std::size_t c, std::size_t t) const {
    return data_[(b * dims_[1] + c) * dims_[2] + t];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<double> data_;
};

void add_inplace(Tensor4& acc, const Tensor4& other);

}  // namespace hdf

#endif  // HDFNET_TENSOR_H_
