#include "greenmark/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace greenmark {

namespace {

void check_pair(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty())
    throw std::invalid_argument("distributions must share a nonempty support");
}

double clipped(double v) { return std::max(v, kProbFloor); }

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) throw std::domain_error("KL undefined: q vanishes inside support of p");
    acc += p[i] * (std::log(clipped(p[i])) - std::log(clipped(q[i])));
  }
  return std::max(acc, 0.0);
}

double max_divergence(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) throw std::domain_error("max-divergence undefined: q vanishes inside support of p");
    worst = std::max(worst, std::log(clipped(p[i])) - std::log(clipped(q[i])));
  }
  return std::max(worst, 0.0);
}

double renyi_divergence(std::span<const double> p, std::span<const double> q, double alpha) {
  check_pair(p, q);
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (alpha == 1.0) return kl_divergence(p, q);
  if (std::isinf(alpha)) return max_divergence(p, q);

  // log sum_v p^a q^(1-a), accumulated in log space via the running max.
  double log_acc = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0)
      throw std::domain_error("Renyi divergence undefined: q vanishes inside support of p");
    const double term = alpha * std::log(clipped(p[i])) + (1.0 - alpha) * std::log(clipped(q[i]));
    if (term <= log_acc) {
      log_acc += std::log1p(std::exp(term - log_acc));
    } else {
      log_acc = term + std::log1p(std::isinf(log_acc) ? 0.0 : std::exp(log_acc - term));
    }
  }
  return std::max(log_acc / (alpha - 1.0), 0.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return acc / 2.0;
}

ProbVector tilt_green(std::span<const double> p, const GreenList& green, double delta) {
  if (static_cast<std::int32_t>(p.size()) != green.vocab_size())
    throw std::invalid_argument("distribution length does not match green list vocab");
  if (delta == 0.0) return ProbVector(p.begin(), p.end());
  // Scaling red mass down by e^-delta instead of green mass up keeps the
  // weights bounded for any delta.
  const double red_scale = std::exp(-delta);
  ProbVector out(p.size());
  double sum = 0;
  for (std::int32_t v = 0; v < green.vocab_size(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    out[i] = green.contains(v) ? p[i] : p[i] * red_scale;
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

QualityCheckReport verify_quality_bound(std::span<const double> p, const GreenList& green,
                                        double delta, std::span<const double> alpha_grid,
                                        int horizon) {
  if (!(delta >= 0)) throw std::invalid_argument("delta must be >= 0");
  QualityCheckReport report;
  report.delta = delta;
  report.horizon = horizon;

  const ProbVector hat = tilt_green(p, green, delta);
  report.tv = total_variation(hat, p);
  report.tv_bound = std::min(std::sqrt(delta / 2.0), delta / 4.0);
  bool ok = report.tv <= report.tv_bound + 1e-12;

  for (double alpha : alpha_grid) {
    AlphaMargin m;
    m.alpha = alpha;
    m.divergence = std::max(renyi_divergence(hat, p, alpha), renyi_divergence(p, hat, alpha));
    m.bound = std::min(delta, alpha * delta * delta / 8.0);
    m.margin = m.bound - m.divergence;
    m.composition = horizon * m.bound;
    ok = ok && m.margin >= -1e-12;
    report.alphas.push_back(m);
  }
  report.pass = ok;
  return report;
}

std::string QualityCheckReport::to_json() const {
  nlohmann::json j;
  j["delta"] = delta;
  j["horizon"] = horizon;
  j["pass"] = pass;
  j["tv"] = tv;
  j["tv_bound"] = tv_bound;
  j["alphas"] = nlohmann::json::array();
  for (const AlphaMargin& m : alphas) {
    nlohmann::json a;
    a["alpha"] = std::isinf(m.alpha) ? nlohmann::json("inf") : nlohmann::json(m.alpha);
    a["divergence"] = m.divergence;
    a["bound"] = m.bound;
    a["margin"] = m.margin;
    a["composition"] = m.composition;
    j["alphas"].push_back(a);
  }
  return j.dump(2) + "\n";
}

}  // namespace greenmark
