#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace codeattn {

/// Dense row-major grid over the clip square (or its downsampled cells).
template <class T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> values;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  T& operator()(int x, int y) { return values[index(x, y)]; }
  const T& operator()(int x, int y) const { return values[index(x, y)]; }
  std::size_t size() const { return values.size(); }
  bool same_shape(int w, int h) const { return width == w && height == h; }
  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return width == other.width && height == other.height;
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
};

using ScalarField = Grid<double>;
using BinaryField = Grid<std::uint8_t>;

}  // namespace codeattn
