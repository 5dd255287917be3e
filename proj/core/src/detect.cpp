#include "greenmark/detect.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "greenmark/certify.hpp"

namespace greenmark {

std::int32_t count_green(const TokenSeq& seq, const GreenList& green) {
  std::int32_t count = 0;
  for (Token t : seq) {
    if (t < 0 || t >= green.vocab_size()) throw std::invalid_argument("token out of range");
    count += green.contains(t) ? 1 : 0;
  }
  return count;
}

double z_score(std::int32_t green_count, std::int32_t n, double gamma) {
  if (n < 1) throw std::invalid_argument("z_score undefined for n < 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  return (green_count - gamma * n) / std::sqrt(n * gamma * (1.0 - gamma));
}

DiversityStats diversity_stats(const TokenSeq& seq) {
  if (seq.empty()) throw std::invalid_argument("diversity_stats undefined for empty sequence");
  std::unordered_map<Token, std::int32_t> counts;
  for (Token t : seq) ++counts[t];
  DiversityStats stats;
  stats.n = static_cast<std::int32_t>(seq.size());
  double sq = 0;
  for (const auto& [tok, c] : counts) {
    stats.c_max = std::max(stats.c_max, c);
    sq += static_cast<double>(c) * c;
  }
  stats.v = sq / stats.n;
  return stats;
}

double adaptive_threshold(const DiversityStats& stats, double gamma, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  const double lg = std::log(9.0 / alpha);
  return std::sqrt(64.0 * stats.v * lg / (gamma * (1.0 - gamma))) +
         stats.c_max * lg / std::sqrt(stats.n * gamma * (1.0 - gamma));
}

namespace {

DetectionReport finish_report(std::int32_t scored, std::int32_t green_count, double gamma,
                              double tau, Scheme scheme, const DiversityStats& stats) {
  DetectionReport r;
  r.n = scored;
  r.green_count = green_count;
  r.z = z_score(green_count, scored, gamma);
  r.tau = tau;
  r.decision = r.z > tau ? 1 : 0;
  r.scheme = scheme;
  r.stats = stats;
  r.certified_eta = certified_edit_budget(r.z, scored, gamma, tau, scheme).certified_eta;
  return r;
}

}  // namespace

DetectionReport detect(const TokenSeq& seq, const GreenListSource& source, double tau) {
  const WatermarkKey& key = source.key();
  if (key.scheme != Scheme::FixedSplit)
    throw std::invalid_argument("detect requires a fixed-split key");
  if (seq.empty()) throw std::invalid_argument("detect undefined for empty sequence");
  const std::int32_t count = count_green(seq, source.fixed());
  return finish_report(static_cast<std::int32_t>(seq.size()), count, effective_gamma(key), tau,
                       key.scheme, diversity_stats(seq));
}

DetectionReport detect(const TokenSeq& seq, const WatermarkKey& key, double tau) {
  GreenListSource source(key);
  return detect(seq, source, tau);
}

DetectionReport detect_bigram(const TokenSeq& seq, const GreenListSource& source, double tau) {
  const WatermarkKey& key = source.key();
  if (key.scheme != Scheme::BigramHash)
    throw std::invalid_argument("detect_bigram requires a bigram-hash key");
  if (seq.size() < 2)
    throw std::invalid_argument("detect_bigram undefined for sequences shorter than 2");
  std::int32_t count = 0;
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const Token tok = seq[t];
    if (tok < 0 || tok >= key.vocab_size) throw std::invalid_argument("token out of range");
    count += source.for_prev(seq[t - 1]).contains(tok) ? 1 : 0;
  }
  // m-1 scored positions; the first token has no context.
  return finish_report(static_cast<std::int32_t>(seq.size()) - 1, count, effective_gamma(key),
                       tau, key.scheme, diversity_stats(seq));
}

DetectionReport detect_bigram(const TokenSeq& seq, const WatermarkKey& key, double tau) {
  GreenListSource source(key);
  return detect_bigram(seq, source, tau);
}

std::string DetectionReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["green_count"] = green_count;
  j["z"] = z;
  j["tau"] = tau;
  j["decision"] = decision;
  j["scheme"] = scheme_name(scheme);
  j["stats"] = {{"c_max", stats.c_max}, {"v", stats.v}, {"n", stats.n}};
  if (certified_eta) j["certified_eta"] = *certified_eta;
  else j["certified_eta"] = nullptr;
  return j.dump(2) + "\n";
}

}  // namespace greenmark
