#pragma once

#include <array>
#include <cstddef>

namespace mslab {

using Point = std::array<double, 3>;

// Periodic box [-l, l)^d with n points per axis, row-major with axis 0 slowest.
class GridSpec {
 public:
  GridSpec(int dim, std::size_t n, double half_length);

  int dim() const noexcept { return dim_; }
  std::size_t n() const noexcept { return n_; }
  double half_length() const noexcept { return ell_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_; }

  double coord(std::size_t i) const noexcept { return -ell_ + static_cast<double>(i) * dx_; }
  std::array<std::size_t, 3> unflatten(std::size_t idx) const noexcept;
  Point point(std::size_t idx) const noexcept;

  // Angular wavenumber of FFT bin i; the Nyquist bin maps to -n/2.
  double wavenumber(std::size_t i) const noexcept;

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.ell_ == b.ell_;
  }

 private:
  int dim_;
  std::size_t n_;
  double ell_;
  double dx_;
  std::size_t size_;
  double cell_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b);

}  // namespace mslab
