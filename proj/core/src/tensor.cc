// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "hdfnet/tensor.h"

#include "hdfnet/error.h"

namespace hdf {

std::string Tensor4::shape_string() const {
  return "(" + std::to_string(dims_[0]) + ", " + std::to_string(dims_[1]) +
         ", " + std::to_string(dims_[2]) + ", " + std::to_string(dims_[3]) +
         ")";
}

void add_inplace(Tensor4& acc, const Tensor4& other) {
  HDF_CHECK_SHAPE(acc.same_shape(other),
                  "add: " + acc.shape_string() + " vs " + other.shape_string());
  auto& a = acc.data();
  const auto& b = other.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

}  // namespace hdf
