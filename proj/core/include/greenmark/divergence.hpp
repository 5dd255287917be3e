#pragma once

#include <span>
#include <string>
#include <vector>

#include "greenmark/green_list.hpp"
#include "greenmark/types.hpp"

namespace greenmark {

// Renyi divergence of order alpha:
//   D_a(P||Q) = (1/(a-1)) log sum_v p[v]^a q[v]^(1-a)
// alpha == 1 dispatches to KL, alpha == +inf to max-divergence. Computed
// in log space with probabilities floored at 1e-30. Throws std::domain_error
// if q vanishes somewhere p does not (for finite alpha > 1).
double renyi_divergence(std::span<const double> p, std::span<const double> q, double alpha);

double kl_divergence(std::span<const double> p, std::span<const double> q);
// sup over the support of p of log(p/q).
double max_divergence(std::span<const double> p, std::span<const double> q);
// Exact (1/2) L1 distance.
double total_variation(std::span<const double> p, std::span<const double> q);

// Green-tilted distribution: p[v] scaled by e^delta for v in green, then
// renormalized. This is exactly softmax(logits + delta*1_green) applied to
// the logits of p.
ProbVector tilt_green(std::span<const double> p, const GreenList& green, double delta);

struct AlphaMargin {
  double alpha = 0;          // +inf encoded as infinity
  double divergence = 0;     // max of the two directions
  double bound = 0;          // min(delta, alpha*delta^2/8)
  double margin = 0;         // bound - divergence (negative => violation)
  double composition = 0;    // horizon * bound, sequence-level budget
};

struct QualityCheckReport {
  double delta = 0;
  int horizon = 0;
  bool pass = false;                 // no violation at any alpha, and TV bound holds
  double tv = 0;                     // total variation distance
  double tv_bound = 0;               // min(sqrt(delta/2), delta/4)
  std::vector<AlphaMargin> alphas;

  std::string to_json() const;
};

// Evaluates max(D_a(p_hat||p), D_a(p||p_hat)) for every alpha in the grid
// against min(delta, alpha*delta^2/8), plus the TV bound. Violations are
// reported, never silently passed.
QualityCheckReport verify_quality_bound(std::span<const double> p, const GreenList& green,
                                        double delta, std::span<const double> alpha_grid,
                                        int horizon = 200);

}  // namespace greenmark
