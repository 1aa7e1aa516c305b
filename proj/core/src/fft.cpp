#include "mslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace mslab::fft {

namespace {

using Key = std::tuple<int, std::size_t, int>;

struct PlanCache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;
  std::map<std::tuple<int, std::size_t, double>, std::shared_ptr<std::vector<double>>> k2;
  std::map<std::tuple<int, std::size_t, double, int>, std::shared_ptr<std::vector<double>>> kax;

  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(const GridSpec& g, int sign) {
  auto& c = cache();
  Key key{g.dim(), g.n(), sign};
  std::lock_guard lock(c.mu);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  int dims[3];
  for (int a = 0; a < g.dim(); ++a) dims[a] = static_cast<int>(g.n());
  std::vector<cplx> scratch(g.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft(g.dim(), dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  c.plans.emplace(key, p);
  return p;
}

}  // namespace

void forward(const GridSpec& g, std::span<cplx> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(g, FFTW_FORWARD), buf, buf);
}

void inverse(const GridSpec& g, std::span<cplx> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(g, FFTW_BACKWARD), buf, buf);
  const double s = 1.0 / static_cast<double>(g.size());
  for (auto& z : data) z *= s;
}

const std::vector<double>& k_axis(const GridSpec& g, int axis) {
  auto& c = cache();
  std::lock_guard lock(c.mu);
  auto key = std::make_tuple(g.dim(), g.n(), g.half_length(), axis);
  auto it = c.kax.find(key);
  if (it != c.kax.end()) return *it->second;
  auto v = std::make_shared<std::vector<double>>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) (*v)[i] = g.wavenumber(g.unflatten(i)[axis]);
  c.kax.emplace(key, v);
  return *v;
}

const std::vector<double>& k_squared(const GridSpec& g) {
  {
    auto& c = cache();
    std::lock_guard lock(c.mu);
    auto it = c.k2.find({g.dim(), g.n(), g.half_length()});
    if (it != c.k2.end()) return *it->second;
  }
  auto v = std::make_shared<std::vector<double>>(g.size(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    const auto& ka = k_axis(g, a);
    for (std::size_t i = 0; i < g.size(); ++i) (*v)[i] += ka[i] * ka[i];
  }
  auto& c = cache();
  std::lock_guard lock(c.mu);
  auto [it, inserted] = c.k2.emplace(std::make_tuple(g.dim(), g.n(), g.half_length()), v);
  return *it->second;
}

}  // namespace mslab::fft
