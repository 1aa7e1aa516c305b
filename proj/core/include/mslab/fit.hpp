#pragma once

#include <span>
#include <string>

namespace mslab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

// Fits log(y) = log(C) - rate * x over samples with y > floor. rate is the decay rate
// (positive for decay), intercept is log(C).
struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

RateFit fit_decay_rate(std::span<const double> x, std::span<const double> y, double floor = 0.0);

}  // namespace mslab
