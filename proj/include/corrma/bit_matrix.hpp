#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace corrma {

// Row-major binary matrix; rows = sources, columns = epochs.
struct BitMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BitMatrix() = default;
  BitMatrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

  std::uint8_t& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  std::uint8_t at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  std::uint8_t* row(int r) {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }
  const std::uint8_t* row(int r) const {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }

  bool operator==(const BitMatrix& other) const {
    return rows == other.rows && cols == other.cols && data == other.data;
  }
};

}  // namespace corrma
