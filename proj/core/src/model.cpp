#include "greenmark/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "greenmark/sampling.hpp"
#include "greenmark/token_io.hpp"

namespace greenmark {

ProbVector softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  if (!std::isfinite(m)) throw std::invalid_argument("softmax requires finite logits");
  ProbVector p(logits.size());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double safe_log(double p) { return std::log(std::max(p, kProbFloor)); }

namespace {

void check_vocab(std::int32_t n) {
  if (n < 2) throw std::invalid_argument("vocab_size must be >= 2");
}

class UniformLm final : public NextTokenModel {
 public:
  explicit UniformLm(std::int32_t n) : n_(n) { check_vocab(n); }
  std::int32_t vocab_size() const override { return n_; }
  void next_logits(const TokenSeq&, const TokenSeq&, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }

 private:
  std::int32_t n_;
};

// Mass 1-eps on a distinguished token, eps spread over the rest. Logits
// are log-probabilities (floored so eps = 0 stays finite).
class PeakedLm final : public NextTokenModel {
 public:
  PeakedLm(DegenerateKind kind, std::int32_t n, std::int32_t param, double eps)
      : kind_(kind), n_(n), param_(param), eps_(eps) {
    check_vocab(n);
    if (eps < 0 || eps >= 1) throw std::invalid_argument("eps must lie in [0, 1)");
    if (kind == DegenerateKind::RepeatToken) {
      if (param < 0 || param >= n) throw std::invalid_argument("repeat token out of range");
    } else {
      if (param < 2 || param > n) throw std::invalid_argument("cycle length out of range");
    }
    peak_logit_ = safe_log(1.0 - eps_);
    rest_logit_ = safe_log(eps_ / (n_ - 1));
  }

  std::int32_t vocab_size() const override { return n_; }

  void next_logits(const TokenSeq& prompt, const TokenSeq& prefix,
                   std::span<double> out) const override {
    Token peak = param_;
    if (kind_ == DegenerateKind::CycleAlphabet) {
      Token last = -1;
      if (!prefix.empty()) last = prefix.back();
      else if (!prompt.empty()) last = prompt.back();
      peak = (last >= 0 && last < param_) ? (last + 1) % param_ : 0;
    }
    std::fill(out.begin(), out.end(), rest_logit_);
    out[static_cast<std::size_t>(peak)] = peak_logit_;
  }

 private:
  DegenerateKind kind_;
  std::int32_t n_;
  std::int32_t param_;
  double eps_;
  double peak_logit_;
  double rest_logit_;
};

// Context hashing for the n-gram tables: tokens packed against a rolling
// multiplier, one table per context length.
class NgramLm final : public NextTokenModel {
 public:
  NgramLm(const std::vector<TokenSeq>& corpus, int order, double alpha, std::int32_t n)
      : order_(order), alpha_(alpha), n_(n) {
    check_vocab(n);
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (!(alpha > 0)) throw std::invalid_argument("smoothing_alpha must be > 0");
    bool any = false;
    for (const TokenSeq& seq : corpus)
      if (!seq.empty()) any = true;
    if (corpus.empty() || !any) throw std::runtime_error("corpus is empty");

    tables_.resize(static_cast<std::size_t>(order) + 1);
    for (const TokenSeq& seq : corpus) {
      for (std::size_t t = 0; t < seq.size(); ++t) {
        const Token tok = seq[t];
        if (tok < 0 || tok >= n_) throw std::runtime_error("corpus token out of range");
        const int max_k = std::min<int>(order_, static_cast<int>(t));
        for (int k = 0; k <= max_k; ++k) {
          auto& table = tables_[static_cast<std::size_t>(k)];
          auto& ctx = table[context_hash(seq, t, k)];
          ctx.total += 1;
          ctx.counts[tok] += 1;
        }
      }
    }
  }

  std::int32_t vocab_size() const override { return n_; }

  void next_logits(const TokenSeq& prompt, const TokenSeq& prefix,
                   std::span<double> out) const override {
    // conditional = (count(ctx, v) + alpha) / (count(ctx) + alpha * N)
    thread_local TokenSeq joined;
    joined.clear();
    joined.insert(joined.end(), prompt.begin(), prompt.end());
    joined.insert(joined.end(), prefix.begin(), prefix.end());
    const int k = std::min<int>(order_, static_cast<int>(joined.size()));
    const ContextCounts* ctx = nullptr;
    const auto& table = tables_[static_cast<std::size_t>(k)];
    auto it = table.find(context_hash(joined, joined.size(), k));
    if (it != table.end()) ctx = &it->second;

    const double total = ctx ? static_cast<double>(ctx->total) : 0.0;
    const double denom = std::log(total + alpha_ * n_);
    const double unseen = std::log(alpha_) - denom;
    std::fill(out.begin(), out.end(), unseen);
    if (ctx)
      for (const auto& [tok, c] : ctx->counts)
        out[static_cast<std::size_t>(tok)] = std::log(static_cast<double>(c) + alpha_) - denom;
  }

 private:
  struct ContextCounts {
    long total = 0;
    std::unordered_map<Token, long> counts;
  };
  using Table = std::unordered_map<std::uint64_t, ContextCounts>;

  // Hash of the k tokens ending just before position t.
  static std::uint64_t context_hash(const TokenSeq& seq, std::size_t t, int k) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = t - static_cast<std::size_t>(k); i < t; ++i)
      h = mix64(h ^ (static_cast<std::uint64_t>(seq[i]) + 0x100000001b3ULL));
    return h;
  }

  int order_;
  double alpha_;
  std::int32_t n_;
  std::vector<Table> tables_;
};

}  // namespace

ModelPtr uniform_lm(std::int32_t vocab_size) { return std::make_shared<UniformLm>(vocab_size); }

ModelPtr ngram_fit(const std::vector<TokenSeq>& corpus, int order, double smoothing_alpha,
                   std::int32_t vocab_size) {
  return std::make_shared<NgramLm>(corpus, order, smoothing_alpha, vocab_size);
}

ModelPtr degenerate_lm(DegenerateKind kind, std::int32_t vocab_size, std::int32_t param,
                       double eps) {
  return std::make_shared<PeakedLm>(kind, vocab_size, param, eps);
}

EntropyReport entropy_diagnostics(const NextTokenModel& model, const TokenSeq& prompt,
                                  int horizon, int rollouts, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (rollouts < 1) throw std::invalid_argument("rollouts must be >= 1");

  const auto n = static_cast<std::size_t>(model.vocab_size());
  EntropyReport report;
  report.horizon = horizon;
  report.rollouts = rollouts;

  std::vector<double> per_rollout(static_cast<std::size_t>(rollouts), 0.0);
  LogitVector logits(n);
  double linf_sum = 0;
  for (int r = 0; r < rollouts; ++r) {
    TokenSeq prefix;
    prefix.reserve(static_cast<std::size_t>(horizon));
    double acc = 0;
    for (int t = 0; t < horizon; ++t) {
      model.next_logits(prompt, prefix, logits);
      const ProbVector p = softmax(logits);
      double l2 = 0, linf = 0;
      for (double v : p) {
        l2 += v * v;
        linf = std::max(linf, v);
      }
      acc += l2;
      linf_sum += linf;
      report.max_l2 = std::max(report.max_l2, l2);
      prefix.push_back(sample_next(logits, Decoding::multinomial(), rng));
    }
    per_rollout[static_cast<std::size_t>(r)] = acc / horizon;
  }

  double mean = 0;
  for (double v : per_rollout) mean += v;
  mean /= rollouts;
  double var = 0;
  for (double v : per_rollout) var += (v - mean) * (v - mean);
  var = rollouts > 1 ? var / (rollouts - 1) : 0.0;

  report.xi_hat = mean;
  report.xi_se = std::sqrt(var / rollouts);
  report.mean_linf = linf_sum / (static_cast<double>(rollouts) * horizon);
  return report;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

ModelPtr model_from_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  try {
    if (kind == "uniform" && parts.size() == 2) return uniform_lm(std::stoi(parts[1]));
    if (kind == "repeat" && (parts.size() == 3 || parts.size() == 4)) {
      const double eps = parts.size() == 4 ? std::stod(parts[3]) : 1e-6;
      return degenerate_lm(DegenerateKind::RepeatToken, std::stoi(parts[2]), std::stoi(parts[1]),
                           eps);
    }
    if (kind == "cycle" && (parts.size() == 3 || parts.size() == 4)) {
      const double eps = parts.size() == 4 ? std::stod(parts[3]) : 1e-6;
      return degenerate_lm(DegenerateKind::CycleAlphabet, std::stoi(parts[2]), std::stoi(parts[1]),
                           eps);
    }
    if (kind == "ngram" && parts.size() == 5) {
      const int order = std::stoi(parts[1]);
      const double alpha = std::stod(parts[2]);
      const std::int32_t n = std::stoi(parts[3]);
      return ngram_fit(read_corpus(parts[4]), order, alpha, n);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed model spec: " + spec);
  }
  throw std::invalid_argument("unknown model spec: " + spec);
}

}  // namespace greenmark
