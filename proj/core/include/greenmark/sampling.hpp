#pragma once

#include <span>
#include <string>

#include "greenmark/green_list.hpp"
#include "greenmark/model.hpp"
#include "greenmark/partition.hpp"
#include "greenmark/rng.hpp"

namespace greenmark {

enum class DecodingKind { Multinomial, Greedy, TopP };

struct Decoding {
  DecodingKind kind = DecodingKind::Multinomial;
  double top_p = 1.0;  // only for TopP, in (0, 1]

  static Decoding multinomial() { return {DecodingKind::Multinomial, 1.0}; }
  static Decoding greedy() { return {DecodingKind::Greedy, 1.0}; }
  static Decoding top_p_nucleus(double p) { return {DecodingKind::TopP, p}; }

  // "multinomial" | "greedy" | "topp:P"
  static Decoding parse(const std::string& text);
  std::string to_string() const;
};

struct GenerationConfig {
  int horizon = 200;  // n >= 1
  Decoding decoding = Decoding::multinomial();
  std::uint64_t seed = 0;
};

// out[v] = logits[v] + delta for v in green, unchanged otherwise.
LogitVector bias_logits(std::span<const double> logits, const GreenList& green, double delta);

// Multinomial draws from softmax(logits); Greedy takes the argmax (lowest
// id on ties); TopP renormalizes the smallest descending-probability
// prefix whose mass reaches p (the crossing token is included).
Token sample_next(std::span<const double> logits, const Decoding& decoding, Rng& rng);

// Length-n continuation of `prompt`. key == nullptr samples the raw model.
// A FixedSplit key biases every step with the fixed green list; a
// BigramHash key biases step t (t >= 2) with the list derived from the
// previous generated token and leaves step 1 unbiased. The prompt is not
// part of the returned sequence.
TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt, const WatermarkKey* key,
                  const GenerationConfig& config);

// Un-watermarked sampling from the raw model.
TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt,
                  const GenerationConfig& config);

// Batch form sharing a green-list cache across calls.
TokenSeq generate(const NextTokenModel& model, const TokenSeq& prompt,
                  const GreenListSource* source, const GenerationConfig& config);

}  // namespace greenmark
