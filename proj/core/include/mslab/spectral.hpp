#pragma once

#include <functional>
#include <vector>

#include "mslab/field.hpp"

namespace mslab {

Field laplacian(const Field& f);
std::vector<Field> gradient(const Field& f);
Field divergence(const std::vector<Field>& components);

// Multiplies the spectrum by m(|k|^2) and transforms back.
Field apply_multiplier(const Field& f, const std::function<double(double)>& m);
// Multiplies by exp(-i k.shift), i.e. returns f(x - shift) for band-limited f.
Field spectral_shift(const Field& f, std::span<const double> shift);

cplx inner_l2(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_l2_spectral(const Field& f);
double norm_h1(const Field& f);
double norm_hs(const Field& f, double s);
double gradient_norm_sq(const Field& f);

Field galilean_boost(const Field& f, std::span<const double> v, double t);

// 2/3-rule low-pass: zero every mode with |k_a| > (2/3) k_max on some axis.
Field dealias_two_thirds(const Field& f);

}  // namespace mslab
