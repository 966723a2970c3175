#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace newslens {

// Tensor archive, the on-disk carrier for encoder weights.
//
// Layout (bit-exact):
//   * 8-byte little-endian unsigned integer N
//   * N bytes of UTF-8 JSON: { "tensor.name": {"dtype": "f32",
//     "shape": [...], "offset": ..., "nbytes": ...}, ... }
//   * a contiguous data region of raw little-endian IEEE-754 float32
//     values, row-major; offsets are relative to the region start.
struct Tensor {
    std::vector<std::int64_t> shape;
    std::vector<float> data;

    std::int64_t numel() const {
        std::int64_t n = 1;
        for (auto d : shape) n *= d;
        return n;
    }
};

using TensorMap = std::map<std::string, Tensor>;

TensorMap read_tensor_archive(const std::string& path);
void write_tensor_archive(const std::string& path, const TensorMap& tensors);

}  // namespace newslens
