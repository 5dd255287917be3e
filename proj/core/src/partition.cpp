#include "greenmark/partition.hpp"

#include <numeric>
#include <stdexcept>

namespace greenmark {

namespace {

// First floor(gamma*N) entries of a keyed Fisher-Yates shuffle of [0, N).
// Exact cardinality by construction, O(N), bit-deterministic per key.
GreenList shuffle_partition(const std::array<std::uint64_t, 4>& seed_words, double gamma,
                            std::int32_t vocab_size) {
  Rng rng(seed_words, /*stream=*/0);
  std::vector<Token> ids(static_cast<std::size_t>(vocab_size));
  std::iota(ids.begin(), ids.end(), 0);
  for (std::int32_t i = vocab_size - 1; i > 0; --i) {
    const auto j = static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
  }
  const std::int32_t g = green_size(gamma, vocab_size);
  ids.resize(static_cast<std::size_t>(g));
  return GreenList(vocab_size, ids);
}

std::array<std::uint64_t, 4> child_seed(const std::array<std::uint64_t, 4>& seed, Token prev) {
  const std::uint64_t tag = mix64(0xd1b54a32d192ed03ULL ^ static_cast<std::uint64_t>(prev));
  std::array<std::uint64_t, 4> out{};
  for (std::size_t i = 0; i < 4; ++i)
    out[i] = mix64(seed[i] + tag + 0x9e3779b97f4a7c15ULL * (i + 1));
  return out;
}

}  // namespace

GreenList partition(const WatermarkKey& key) {
  if (key.scheme != Scheme::FixedSplit)
    throw std::invalid_argument("partition requires a fixed-split key");
  return shuffle_partition(key.seed, key.gamma, key.vocab_size);
}

GreenList bigram_green_list(const WatermarkKey& key, Token prev_token) {
  if (key.scheme != Scheme::BigramHash)
    throw std::invalid_argument("bigram_green_list requires a bigram-hash key");
  if (prev_token < 0 || prev_token >= key.vocab_size)
    throw std::invalid_argument("prev_token out of range");
  return shuffle_partition(child_seed(key.seed, prev_token), key.gamma, key.vocab_size);
}

GreenListSource::GreenListSource(const WatermarkKey& key) : key_(key) {}

const GreenList& GreenListSource::fixed() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!fixed_) fixed_.emplace(partition(key_));
  return *fixed_;
}

const GreenList& GreenListSource::for_prev(Token prev) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = by_prev_.find(prev);
  if (it == by_prev_.end()) {
    auto list = std::make_shared<const GreenList>(bigram_green_list(key_, prev));
    it = by_prev_.emplace(prev, std::move(list)).first;
  }
  return *it->second;
}

}  // namespace greenmark
