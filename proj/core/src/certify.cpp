#include "greenmark/certify.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace greenmark {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
}

// Count-gap drop bound with per-edit count sensitivity `weight` (1 for the
// fixed split, 2 for the bigram scheme), converted to the z scale.
double penalty_impl(std::int32_t n, double gamma, std::int32_t eta, double weight,
                    PenaltyBranch* branch) {
  check_gamma(gamma);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (eta < 0 || eta >= n) throw std::invalid_argument("eta must lie in [0, n)");
  if (eta == 0) {
    if (branch) *branch = PenaltyBranch::None;
    return 0.0;
  }
  const double first = (weight + gamma / 2.0) * eta / std::sqrt(static_cast<double>(n));
  const double second = (weight - gamma / 2.0) * eta / std::sqrt(static_cast<double>(n - eta));
  if (branch) *branch = first >= second ? PenaltyBranch::First : PenaltyBranch::Second;
  return std::max(first, second) / std::sqrt(gamma * (1.0 - gamma));
}

}  // namespace

double z_penalty(std::int32_t n, double gamma, std::int32_t eta) {
  return penalty_impl(n, gamma, eta, 1.0, nullptr);
}

double z_penalty_baseline(std::int32_t n, double gamma, std::int32_t eta) {
  return penalty_impl(n, gamma, eta, 2.0, nullptr);
}

std::string branch_name(PenaltyBranch b) {
  switch (b) {
    case PenaltyBranch::None: return "none";
    case PenaltyBranch::First: return "first";
    case PenaltyBranch::Second: return "second";
  }
  throw std::logic_error("unknown branch");
}

RobustnessCertificate certified_edit_budget(double z_observed, std::int32_t n, double gamma,
                                            double tau, Scheme scheme) {
  check_gamma(gamma);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  RobustnessCertificate cert;
  cert.z_observed = z_observed;
  cert.tau = tau;
  cert.scheme = scheme;
  cert.certified_eta = 0;
  cert.branch_used = PenaltyBranch::None;
  if (!(z_observed > tau)) return cert;

  const double weight = scheme == Scheme::FixedSplit ? 1.0 : 2.0;
  // The penalty is strictly increasing in eta, so scan up from zero.
  for (std::int32_t eta = 1; eta < n; ++eta) {
    PenaltyBranch branch = PenaltyBranch::None;
    const double pen = penalty_impl(n, gamma, eta, weight, &branch);
    if (z_observed - pen > tau) {
      cert.certified_eta = eta;
      cert.branch_used = branch;
    } else {
      break;
    }
  }
  return cert;
}

std::string RobustnessCertificate::to_json() const {
  nlohmann::json j;
  j["z_observed"] = z_observed;
  j["tau"] = tau;
  j["certified_eta"] = certified_eta;
  j["scheme"] = scheme_name(scheme);
  j["branch_used"] = branch_name(branch_used);
  return j.dump(2) + "\n";
}

double green_prob_boost(double p_green, double delta) {
  if (!(p_green >= 0.0 && p_green <= 1.0))
    throw std::invalid_argument("p_green must lie in [0, 1]");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  if (p_green == 0.0) return 0.0;
  // e^d p / (1 + (e^d - 1) p) written as p / (p + (1-p) e^-d): no overflow
  // for large delta.
  return p_green / (p_green + (1.0 - p_green) * std::exp(-delta));
}

double expected_green_lower_bound(std::int32_t n, double gamma, double delta, double xi) {
  check_gamma(gamma);
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
  return n * green_prob_boost(gamma, delta) -
         gamma * (1.0 - gamma) * std::exp(delta) * n * xi;
}

double expected_z_lower_bound(std::int32_t n, double gamma, double delta, double kappa) {
  check_gamma(gamma);
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in (0, 1)");
  // (e^d - 1) / (1 + (e^d - 1) g) = 1 / (g + 1/expm1(d)), stable for large d.
  const double em1 = std::expm1(delta);
  if (em1 == 0.0) return 0.0;
  const double ratio = 1.0 / (gamma + 1.0 / em1);
  return kappa * ratio * std::sqrt(n * gamma * (1.0 - gamma));
}

double xi_threshold_for_kappa(double gamma, double delta, double kappa) {
  check_gamma(gamma);
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in (0, 1)");
  const double em1 = std::expm1(delta);
  if (em1 == 0.0) return 0.0;
  const double ratio = 1.0 / (gamma + 1.0 / em1);
  return (1.0 - kappa) * ratio * std::exp(-delta);
}

}  // namespace greenmark
