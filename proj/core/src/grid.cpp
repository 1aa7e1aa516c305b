#include "mslab/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mslab/error.hpp"

namespace mslab {

GridSpec::GridSpec(int dim, std::size_t n, double half_length)
    : dim_(dim), n_(n), ell_(half_length) {
  require(dim >= 1 && dim <= 3, "grid dim must be 1, 2 or 3");
  require(n >= 8 && (n & (n - 1)) == 0, "points per axis must be a power of two >= 8");
  require(std::isfinite(half_length) && half_length > 0, "box half length must be positive");
  dx_ = 2.0 * ell_ / static_cast<double>(n_);
  size_ = 1;
  cell_ = 1.0;
  for (int a = 0; a < dim_; ++a) {
    size_ *= n_;
    cell_ *= dx_;
  }
}

std::array<std::size_t, 3> GridSpec::unflatten(std::size_t idx) const noexcept {
  std::array<std::size_t, 3> out{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = idx % n_;
    idx /= n_;
  }
  return out;
}

Point GridSpec::point(std::size_t idx) const noexcept {
  auto ij = unflatten(idx);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coord(ij[a]);
  return p;
}

double GridSpec::wavenumber(std::size_t i) const noexcept {
  const auto half = static_cast<long>(n_ / 2);
  long m = static_cast<long>(i);
  if (m >= half) m -= static_cast<long>(n_);
  return std::numbers::pi / ell_ * static_cast<double>(m);
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a == b) return;
  std::ostringstream os;
  os << "grid mismatch: (d=" << a.dim() << ", n=" << a.n() << ", l=" << a.half_length()
     << ") vs (d=" << b.dim() << ", n=" << b.n() << ", l=" << b.half_length() << ")";
  fail(ErrorKind::GridMismatch, os.str());
}

}  // namespace mslab
