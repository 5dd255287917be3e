#pragma once

#include <cstdint>
#include <string>

#include "greenmark/key.hpp"

namespace greenmark {

// Worst-case z drop after at most eta token edits (insert/delete/replace)
// of a length-n sequence under the fixed-split scheme:
//   max{(1+g/2) eta / sqrt(n), (1-g/2) eta / sqrt(n-eta)} / sqrt(g(1-g))
// The max-expression bounds the drop of the raw count gap (x - g*y)/sqrt(y);
// dividing by sqrt(g(1-g)) converts it to the z scale. Requires 0 <= eta < n.
double z_penalty(std::int32_t n, double gamma, std::int32_t eta);

// Same bound for the bigram-hash scheme, where one edit can unmake two
// scored bigrams: coefficients (2+g/2) and (2-g/2). `n` is the number of
// scored positions (m-1 for a length-m sequence).
double z_penalty_baseline(std::int32_t n, double gamma, std::int32_t eta);

enum class PenaltyBranch { None, First, Second };

struct RobustnessCertificate {
  double z_observed = 0;
  double tau = 0;
  std::int32_t certified_eta = 0;  // max edits with detection still guaranteed
  Scheme scheme = Scheme::FixedSplit;
  PenaltyBranch branch_used = PenaltyBranch::None;  // binding term at the budget

  std::string to_json() const;
};

std::string branch_name(PenaltyBranch b);

// Largest integer eta < n with z - penalty(n, gamma, eta) > tau, found by
// monotone search over the full two-branch bound (0 if z <= tau). Edits
// are discrete, so budgets are integers.
RobustnessCertificate certified_edit_budget(double z_observed, std::int32_t n, double gamma,
                                            double tau, Scheme scheme);

// Green mass after adding delta to green logits:
//   p_hat(G) = e^d p(G) / (1 + (e^d - 1) p(G)), computed in overflow-safe
// form. Equals p(G) at delta = 0 and is nondecreasing in both arguments.
double green_prob_boost(double p_green, double delta);

// E[|y|_G] >= n * boost(gamma, delta) - gamma(1-gamma) e^delta * n * xi,
// where xi bounds the mean per-step collision mass (1/n) sum_t E||p_t||^2.
double expected_green_lower_bound(std::int32_t n, double gamma, double delta, double xi);

// E[z] >= kappa (e^d - 1) sqrt(n g (1-g)) / (1 + (e^d - 1) g), valid when
// the model's xi is below xi_threshold_for_kappa(gamma, delta, kappa).
double expected_z_lower_bound(std::int32_t n, double gamma, double delta, double kappa);
double xi_threshold_for_kappa(double gamma, double delta, double kappa);

}  // namespace greenmark
