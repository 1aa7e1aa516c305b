#include <gtest/gtest.h>

#include <cmath>

#include "mslab/boundstate.hpp"
#include "mslab/instability.hpp"
#include "mslab/linearization.hpp"
#include "mslab/profile.hpp"

using namespace mslab;

namespace {

struct Setup {
  Nonlinearity nl = Nonlinearity::pure_power(7.0, 1);
  BoundState b;
  BlockOperator op;
  Spectrum spec;

  Setup()
      : b(compute_bound_state(nl, 1.0, 0, GridSpec(1, 256, 20.0))),
        op(assemble(nl, b)),
        spec([&] {
          SpectrumOptions so;
          so.all_residuals = false;
          so.mode = SpectrumOptions::Mode::Dense;
          return spectrum(op, 0, so);
        }()) {}

  InstabilityResult run(double a, double S, double T0) const {
    const Profile prof = build_profile(nl, b, op, spec, 3, a);
    Integrator in;
    in.dt = 1e-3;
    InstabilityOptions opt;
    opt.S = S;
    opt.T0 = T0;
    opt.stride = 20;
    opt.keep_states = true;
    return instability_run(nl, {b, 0.0, {}, {}}, spec, prof, in, opt);
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST(Instability, GrowthAtTheUnstableRate) {
  const auto& st = setup();
  const InstabilityResult r = st.run(0.1, 1.5, 0.5);
  ASSERT_FALSE(r.blew_up) << r.note;
  ASSERT_EQ(r.samples.size(), r.states.size());
  EXPECT_DOUBLE_EQ(r.samples.front().s, 1.5);
  EXPECT_NEAR(r.samples.back().s, 0.5, 1e-12);
  for (std::size_t i = 1; i < r.samples.size(); ++i) EXPECT_LT(r.samples[i].s, r.samples[i - 1].s);
  const auto& first = r.samples.front();
  EXPECT_LT(first.remainder, 0.05 * first.perturbation);
  EXPECT_GE(r.window, 3u);
  EXPECT_NEAR(r.fitted_rate / st.spec.rho, 1.0, 0.05);
  EXPECT_EQ(r.window, r.samples.size());
}

TEST(Instability, SeparationOfTwoAmplitudes) {
  const auto& st = setup();
  const InstabilityResult a = st.run(0.1, 1.5, 0.5);
  const InstabilityResult b = st.run(0.05, 1.5, 0.5);
  const SeparationCheck c = separation_check(a, 0.1, b, 0.05, st.spec.rho);
  EXPECT_TRUE(c.holds) << c.worst_margin;
  EXPECT_EQ(c.samples, a.samples.size());
  EXPECT_GT(c.C, 0.0);
}

TEST(Instability, RejectsMovingSoliton) {
  const auto& st = setup();
  const Profile prof = seed_profile(st.spec, 1.0, 1, 0.1);
  InstabilityOptions opt;
  opt.S = 1.0;
  opt.T0 = 0.5;
  EXPECT_ANY_THROW(instability_run(st.nl, {st.b, 0.0, {0.5}, {}}, st.spec, prof, Integrator{}, opt));
  opt.T0 = 2.0;
  EXPECT_ANY_THROW(instability_run(st.nl, {st.b, 0.0, {}, {}}, st.spec, prof, Integrator{}, opt));
}
