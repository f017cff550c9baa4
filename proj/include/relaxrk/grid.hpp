#pragma once

// Uniform 1-D grid with cell-centered nodes and the per-node state container
// shared by the finite-difference and finite-volume paths.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "relaxrk/errors.hpp"

namespace relaxrk {

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 0;

  Grid1D() = default;
  Grid1D(double a, double b, std::size_t cells) : x_min(a), x_max(b), n(cells) {
    if (cells == 0 || !(b > a)) throw invalid_input("Grid1D: need n >= 1 and x_max > x_min");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  // node j sits at the center of cell j
  double x(std::size_t j) const { return x_min + (static_cast<double>(j) + 0.5) * dx(); }
};

class FieldArray {
public:
  FieldArray() = default;
  FieldArray(std::size_t nodes, std::size_t components)
      : n_(nodes), m_(components), data_(nodes * components, 0.0) {}

  std::size_t nodes() const { return n_; }
  std::size_t components() const { return m_; }

  std::span<double> state(std::size_t j) { return {data_.data() + j * m_, m_}; }
  std::span<const double> state(std::size_t j) const { return {data_.data() + j * m_, m_}; }

  double& operator()(std::size_t j, std::size_t k) { return data_[j * m_ + k]; }
  double operator()(std::size_t j, std::size_t k) const { return data_[j * m_ + k]; }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const FieldArray& o) const {
    return n_ == o.n_ && m_ == o.m_ && data_ == o.data_;
  }

private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> data_;
};

} // namespace relaxrk
