#include "mslab/fit.hpp"

#include <cmath>
#include <vector>

#include "mslab/error.hpp"

namespace mslab {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "fit needs matching sample counts");
  LinearFit f;
  f.samples = x.size();
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return f;
}

RateFit fit_decay_rate(std::span<const double> x, std::span<const double> y, double floor) {
  require(x.size() == y.size(), "fit needs matching sample counts");
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor && std::isfinite(y[i]) && y[i] > 0.0) {
      xs.push_back(x[i]);
      ls.push_back(std::log(y[i]));
    }
  }
  const auto lf = fit_linear(xs, ls);
  return {-lf.slope, lf.intercept, lf.r2, lf.samples};
}

}  // namespace mslab
