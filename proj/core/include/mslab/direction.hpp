#pragma once

#include <vector>

namespace mslab {

using Vec = std::vector<double>;

// sin(sqrt(pi) Gamma((d-1)/2) / (c Gamma(d/2))) with c = N^2 (ensemble constant) or
// c = N(N-1) (largest admissible value for the direction search). d = 1 gives 1: the line
// itself separates every pair.
double ensemble_alpha(int N, int d);
double direction_alpha_bound(int N, int d);

// min over pairs of |(v_j - v_k) . e| / |v_j - v_k|.
double separation_score(const std::vector<Vec>& velocities, const Vec& e);

struct DirectionResult {
  std::vector<Vec> basis;  // orthonormal, basis[0] = e1
  double score = 0.0;      // separation_score at e1
  std::size_t candidates = 0;
};

// Deterministic maximin search over the unit sphere (quasi-uniform sweep, then local
// refinement of the best candidates). e1 is sign-normalized so its first nonzero entry is
// positive. Throws AlphaTooLarge when the best score is below alpha.
DirectionResult select_direction(const std::vector<Vec>& velocities, double alpha);

// Orthonormal completion of e1 by Gram-Schmidt against the canonical basis.
std::vector<Vec> complete_basis(const Vec& e1);

}  // namespace mslab
