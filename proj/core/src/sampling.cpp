#include "greenmark/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace greenmark {

Decoding Decoding::parse(const std::string& text) {
  if (text == "multinomial") return multinomial();
  if (text == "greedy") return greedy();
  if (text.rfind("topp:", 0) == 0) {
    const double p = std::stod(text.substr(5));
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("top-p must lie in (0, 1]");
    return top_p_nucleus(p);
  }
  throw std::invalid_argument("unknown decoding: " + text);
}

std::string Decoding::to_string() const {
  switch (kind) {
    case DecodingKind::Multinomial: return "multinomial";
    case DecodingKind::Greedy: return "greedy";
    case DecodingKind::TopP: return "topp:" + std::to_string(top_p);
  }
  throw std::logic_error("unknown decoding kind");
}

LogitVector bias_logits(std::span<const double> logits, const GreenList& green, double delta) {
  if (static_cast<std::int32_t>(logits.size()) != green.vocab_size())
    throw std::invalid_argument("logits length does not match green list vocab");
  LogitVector out(logits.begin(), logits.end());
  if (delta == 0.0) return out;
  for (std::int32_t v = 0; v < green.vocab_size(); ++v)
    if (green.contains(v)) out[static_cast<std::size_t>(v)] += delta;
  return out;
}

namespace {

Token sample_from_probs(std::span<const double> probs, Rng& rng) {
  const double u = rng.next_unit();
  double acc = 0;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    acc += probs[v];
    if (u < acc) return static_cast<Token>(v);
  }
  return static_cast<Token>(probs.size() - 1);  // u landed in fp slack
}

}  // namespace

Token sample_next(std::span<const double> logits, const Decoding& decoding, Rng& rng) {
  if (logits.empty()) throw std::invalid_argument("cannot sample from empty logits");
  switch (decoding.kind) {
    case DecodingKind::Greedy: {
      std::size_t best = 0;
      for (std::size_t v = 1; v < logits.size(); ++v)
        if (logits[v] > logits[best]) best = v;  // strict: lowest id wins ties
      return static_cast<Token>(best);
    }
    case DecodingKind::Multinomial: {
      const ProbVector p = softmax(logits);
      return sample_from_probs(p, rng);
    }
    case DecodingKind::TopP: {
      const ProbVector p = softmax(logits);
      std::vector<std::size_t> order(p.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p[a] != p[b] ? p[a] > p[b] : a < b;
      });
      double mass = 0;
      std::size_t cut = 0;
      while (cut < order.size()) {
        mass += p[order[cut]];
        ++cut;
        if (mass >= decoding.top_p) break;  // crossing token stays in the nucleus
      }
      const double u = rng.next_unit() * mass;
      double acc = 0;
      for (std::size_t i = 0; i < cut; ++i) {
        acc += p[order[i]];
        if (u < acc) return static_cast<Token>(order[i]);
      }
      return static_cast<Token>(order[cut - 1]);
    }
  }
  throw std::logic_error("unknown decoding kind");
}

namespace {

TokenSeq generate_impl(const NextTokenModel& model, const TokenSeq& prompt,
                       const GreenListSource* source, const GenerationConfig& config) {
  if (config.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (source && source->key().vocab_size != model.vocab_size())
    throw std::invalid_argument("key vocab_size does not match model");
  for (Token t : prompt)
    if (t < 0 || t >= model.vocab_size()) throw std::invalid_argument("prompt token out of range");

  const Scheme scheme = source ? source->key().scheme : Scheme::FixedSplit;
  const double delta = source ? source->key().delta : 0.0;

  Rng rng(config.seed);
  const auto n = static_cast<std::size_t>(model.vocab_size());
  LogitVector logits(n);
  TokenSeq out;
  out.reserve(static_cast<std::size_t>(config.horizon));
  for (int t = 0; t < config.horizon; ++t) {
    model.next_logits(prompt, out, logits);
    const GreenList* green = nullptr;
    if (source) {
      if (scheme == Scheme::FixedSplit) {
        green = &source->fixed();
      } else if (!out.empty()) {
        green = &source->for_prev(out.back());  // step 1 stays unbiased
      }
    }
    if (green && delta != 0.0) {
      for (std::int32_t v = 0; v < model.vocab_size(); ++v)
        if (green->contains(v)) logits[static_cast<std::size_t>(v)] += delta;
    }
    out.push_back(sample_next(logits, config.decoding, rng));
  }
  return out;
}

}  // namespace

TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt, const WatermarkKey* key,
                  const GenerationConfig& config) {
  if (!key) return generate_impl(model, prompt, nullptr, config);
  GreenListSource source(*key);
  return generate_impl(model, prompt, &source, config);
}

TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt,
                  const GenerationConfig& config) {
  return generate_impl(model, prompt, nullptr, config);
}

TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt,
                  const GreenListSource* source, const GenerationConfig& config) {
  return generate_impl(model, prompt, source, config);
}

}  // namespace greenmark
