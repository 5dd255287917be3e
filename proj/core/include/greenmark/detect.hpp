#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "greenmark/green_list.hpp"
#include "greenmark/key.hpp"
#include "greenmark/partition.hpp"

namespace greenmark {

// Token-multiplicity statistics of a suspect sequence. c_max is the
// largest multiplicity; v = (1/n) * sum_i count_i^2. Low-diversity text
// (v close to n) admits no useful false-positive control.
struct DiversityStats {
  std::int32_t c_max = 0;
  double v = 0;
  std::int32_t n = 0;
};

struct DetectionReport {
  std::int32_t n = 0;           // scored positions (m-1 for the bigram scheme)
  std::int32_t green_count = 0;
  double z = 0;
  double tau = 0;
  int decision = 0;             // 1 iff z > tau
  Scheme scheme = Scheme::FixedSplit;
  DiversityStats stats;
  std::optional<std::int32_t> certified_eta;  // edit budget at this tau

  std::string to_json() const;
};

inline constexpr double kDefaultTau = 6.0;

// sum_t 1(y_t in G). Throws if a token is outside [0, N).
std::int32_t count_green(const TokenSeq& seq, const GreenList& green);

// (green_count - gamma*n) / sqrt(n * gamma * (1-gamma)); n >= 1.
double z_score(std::int32_t green_count, std::int32_t n, double gamma);

DiversityStats diversity_stats(const TokenSeq& seq);

// Threshold guaranteeing P[z >= tau] <= alpha over a uniformly random
// green list, for the given sequence statistics:
//   tau = sqrt(64 V log(9/a) / (g(1-g))) + c_max log(9/a) / sqrt(n g (1-g))
// The constant is loose; this is a certificate, not an operating point.
double adaptive_threshold(const DiversityStats& stats, double gamma, double alpha);

// Fixed-split detection. Needs only the key and the suspect sequence:
// no prompt, no model. Empty sequences are a domain error.
DetectionReport detect(const TokenSeq& seq, const WatermarkKey& key, double tau = kDefaultTau);
DetectionReport detect(const TokenSeq& seq, const GreenListSource& source, double tau = kDefaultTau);

// Bigram-hash detection: counts positions t >= 2 with u_t green for
// context u_{t-1}, scoring m-1 positions. Requires length >= 2.
DetectionReport detect_bigram(const TokenSeq& seq, const WatermarkKey& key,
                              double tau = kDefaultTau);
DetectionReport detect_bigram(const TokenSeq& seq, const GreenListSource& source,
                              double tau = kDefaultTau);

}  // namespace greenmark
