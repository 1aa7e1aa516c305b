#include "mslab/field.hpp"

#include <cmath>

#include "mslab/error.hpp"

namespace mslab {

namespace {

void check_finite(const std::vector<cplx>& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(ErrorKind::InvalidArgument, "field contains non-finite values");
  }
}

}  // namespace

Field::Field(GridSpec grid, std::vector<cplx> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  require(values_.size() == grid_.size(), "field value count must equal n^d");
  check_finite(values_);
}

Field Field::zeros(const GridSpec& grid, double time) {
  return Field(grid, std::vector<cplx>(grid.size()), time);
}

Field Field::with_time(double t) const {
  Field f = *this;
  f.time_ = t;
  return f;
}

Field Field::with_values(std::vector<cplx> values) const {
  return Field(grid_, std::move(values), time_);
}

std::vector<double> Field::real_part() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i].real();
  return out;
}

std::vector<double> Field::imag_part() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i].imag();
  return out;
}

std::vector<double> Field::abs_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(values_[i]);
  return out;
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

Field Field::conj() const {
  Field f = *this;
  for (auto& z : f.values_) z = std::conj(z);
  return f;
}

Field Field::operator-() const {
  Field f = *this;
  for (auto& z : f.values_) z = -z;
  return f;
}

Field& Field::operator+=(const Field& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (auto& z : values_) z *= s;
  check_finite(values_);
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }
Field operator*(Field a, cplx s) { return a *= s; }

Field pointwise_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return Field(a.grid(), std::move(v), a.time());
}

Field multiply_real(const Field& a, std::span<const double> w) {
  require(w.size() == a.size(), "weight size must match field");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * w[i];
  return Field(a.grid(), std::move(v), a.time());
}

Field from_real(const GridSpec& g, std::span<const double> re, std::span<const double> im,
                double time) {
  require(re.size() == g.size(), "real part size must match grid");
  require(im.empty() || im.size() == g.size(), "imaginary part size must match grid");
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(re[i], im.empty() ? 0.0 : im[i]);
  return Field(g, std::move(v), time);
}

}  // namespace mslab
