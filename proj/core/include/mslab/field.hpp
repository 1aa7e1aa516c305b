#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "mslab/grid.hpp"

namespace mslab {

using cplx = std::complex<double>;

// Complex samples on a periodic grid with a time stamp. Values are immutable
// once constructed; every operation returns a new Field.
class Field {
 public:
  Field(GridSpec grid, std::vector<cplx> values, double time = 0.0);

  static Field zeros(const GridSpec& grid, double time = 0.0);

  template <class Fn>
  static Field sample(const GridSpec& grid, Fn&& fn, double time = 0.0) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(fn(grid.point(i)));
    return Field(grid, std::move(v), time);
  }

  const GridSpec& grid() const noexcept { return grid_; }
  double time() const noexcept { return time_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }

  Field with_time(double t) const;
  Field with_values(std::vector<cplx> values) const;
  std::vector<cplx> to_vector() const { return values_; }

  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;
  std::vector<double> abs_values() const;
  double max_abs() const noexcept;

  Field conj() const;
  Field operator-() const;
  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx s);

 private:
  GridSpec grid_;
  std::vector<cplx> values_;
  double time_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);
Field operator*(Field a, cplx s);
Field pointwise_product(const Field& a, const Field& b);
Field multiply_real(const Field& a, std::span<const double> w);
Field from_real(const GridSpec& g, std::span<const double> re, std::span<const double> im = {},
                double time = 0.0);

}  // namespace mslab
