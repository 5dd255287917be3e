#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "greenmark/rng.hpp"
#include "greenmark/types.hpp"

namespace greenmark {

// Conditional next-token distribution source. Implementations are
// deterministic per (prompt, prefix), immutable and shareable.
class NextTokenModel {
 public:
  virtual ~NextTokenModel() = default;

  virtual std::int32_t vocab_size() const = 0;

  // Writes the logits of the token following [prompt, prefix] into `out`
  // (length vocab_size, all finite).
  virtual void next_logits(const TokenSeq& prompt, const TokenSeq& prefix,
                           std::span<double> out) const = 0;

  LogitVector next_logits(const TokenSeq& prompt, const TokenSeq& prefix) const {
    LogitVector l(static_cast<std::size_t>(vocab_size()));
    next_logits(prompt, prefix, l);
    return l;
  }
};

using ModelPtr = std::shared_ptr<const NextTokenModel>;

// Max-subtracted softmax; output is nonnegative and sums to 1 within 1e-9.
ProbVector softmax(std::span<const double> logits);
// log(max(p, 1e-30)); keeps downstream divergences finite.
double safe_log(double p);

// All logits equal for every prefix. The canonical maximum-entropy model.
ModelPtr uniform_lm(std::int32_t vocab_size);

// Additively smoothed n-gram model fitted on a token corpus:
//   P(v | ctx) = (count(ctx, v) + alpha) / (count(ctx) + alpha * N)
// `order` is the context length; positions with fewer than `order`
// preceding tokens use the longest context available.
ModelPtr ngram_fit(const std::vector<TokenSeq>& corpus, int order, double smoothing_alpha,
                   std::int32_t vocab_size);

enum class DegenerateKind { RepeatToken, CycleAlphabet };

// Near-deterministic sources: RepeatToken puts mass 1-eps on a single
// token; CycleAlphabet puts mass 1-eps on the next element of the cycle
// 0..param-1. eps = 0 is allowed (probabilities are floored before logs).
ModelPtr degenerate_lm(DegenerateKind kind, std::int32_t vocab_size, std::int32_t param,
                       double eps = 1e-6);

struct EntropyReport {
  double xi_hat = 0;     // mean over rollouts of (1/n) sum_t ||p_t||_2^2
  double xi_se = 0;      // standard error of xi_hat across rollouts
  double max_l2 = 0;     // max_t ||p_t||_2^2 over all rollouts
  double mean_linf = 0;  // mean_t ||p_t||_inf over all rollouts
  int rollouts = 0;
  int horizon = 0;
};

// Rolls out `rollouts` sequences of length `horizon` under the raw
// (un-watermarked) model and accumulates collision statistics of the
// per-step conditional distributions.
EntropyReport entropy_diagnostics(const NextTokenModel& model, const TokenSeq& prompt,
                                  int horizon, int rollouts, Rng& rng);

// Model spec grammar used by the CLI and experiment configs:
//   uniform:<N>
//   repeat:<token>:<N>[:<eps>]
//   cycle:<len>:<N>[:<eps>]
//   ngram:<order>:<alpha>:<N>:<corpus-path>
ModelPtr model_from_spec(const std::string& spec);

}  // namespace greenmark
