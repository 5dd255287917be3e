#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "greenmark/green_list.hpp"
#include "greenmark/key.hpp"

namespace greenmark {

// Uniformly random size-floor(gamma*N) subset of the vocabulary, derived
// deterministically from the key (keyed counter PRNG + Fisher-Yates).
// Requires key.scheme == FixedSplit.
GreenList partition(const WatermarkKey& key);

// Green list for the position following `prev_token` under the bigram-hash
// scheme: the key seed is mixed with the previous token and the same
// shuffle construction is applied. Requires key.scheme == BigramHash.
GreenList bigram_green_list(const WatermarkKey& key, Token prev_token);

// Caches derived green lists for batch workloads (generation sweeps,
// bulk detection). Thread-safe; lists are shared read-only.
class GreenListSource {
 public:
  explicit GreenListSource(const WatermarkKey& key);

  const WatermarkKey& key() const noexcept { return key_; }
  const GreenList& fixed() const;                // FixedSplit keys
  const GreenList& for_prev(Token prev) const;   // BigramHash keys

 private:
  WatermarkKey key_;
  mutable std::mutex mu_;
  mutable std::optional<GreenList> fixed_;
  mutable std::unordered_map<Token, std::shared_ptr<const GreenList>> by_prev_;
};

}  // namespace greenmark
