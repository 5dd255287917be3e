#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "greenmark/rng.hpp"
#include "greenmark/types.hpp"

namespace greenmark {

enum class Scheme { FixedSplit, BigramHash };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Seed material plus the parameters that deterministically define the
// vocabulary partition. Immutable after construction; identical keys
// produce identical partitions bit for bit.
struct WatermarkKey {
  std::array<std::uint64_t, 4> seed{};  // 256 bits
  double gamma = 0.5;                   // green fraction, in (0,1)
  double delta = 2.0;                   // logit bonus, >= 0
  Scheme scheme = Scheme::FixedSplit;
  std::int32_t vocab_size = 0;          // N >= 2

  std::string seed_hex() const;  // 64 lowercase hex chars
};

// Number of green tokens, floor(gamma * N).
std::int32_t green_size(double gamma, std::int32_t vocab_size);

// The gamma actually realized by the partition, floor(gamma*N)/N. Detection
// uses this for small vocabularies so the null mean is exact; for N >= 1e4
// the nominal gamma is used (the difference is below 1e-4).
double effective_gamma(const WatermarkKey& key);

// Draws 256 bits of seed material from `entropy` and validates parameters.
// Two calls against the same entropy state yield identical keys.
WatermarkKey keygen(double gamma, double delta, Scheme scheme, std::int32_t vocab_size,
                    Rng& entropy);

// Key file: a JSON document {scheme, vocab_size, gamma, delta, seed}.
// Green lists are never serialized; they are re-derived from the key.
std::string key_to_json(const WatermarkKey& key);
WatermarkKey key_from_json(const std::string& text);
void save_key(const WatermarkKey& key, const std::string& path);
WatermarkKey load_key(const std::string& path);

}  // namespace greenmark
