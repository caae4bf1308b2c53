#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mvhyper {

/// Dense row-major rows x cols grid. Cells are addressed (subgroup, category).
template <typename T>
class Grid {
public:
  Grid() = default;

  Grid(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw std::invalid_argument("Grid: negative dimensions");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  static Grid from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) {
      throw std::invalid_argument("Grid::from_rows: no rows");
    }
    const std::size_t cols = rows.front().size();
    if (cols == 0) {
      throw std::invalid_argument("Grid::from_rows: empty row");
    }
    Grid g(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw std::invalid_argument("Grid::from_rows: ragged rows");
      }
      for (std::size_t j = 0; j < cols; ++j) {
        g(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
      }
    }
    return g;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  T& flat_at(int k) { return data_[static_cast<std::size_t>(k)]; }
  const T& flat_at(int k) const { return data_[static_cast<std::size_t>(k)]; }

  std::span<const T> flat() const { return {data_.data(), data_.size()}; }
  std::span<T> flat_mut() { return {data_.data(), data_.size()}; }

  T row_sum(int i) const {
    T s{};
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  std::vector<T> row_sums() const {
    std::vector<T> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = row_sum(i);
    return out;
  }

  T total() const {
    T s{};
    for (const T& v : data_) s += v;
    return s;
  }

  bool same_shape(const Grid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using CountGrid = Grid<long long>;
using RealGrid = Grid<double>;

}  // namespace mvhyper
