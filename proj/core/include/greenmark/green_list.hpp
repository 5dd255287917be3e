#pragma once

#include <cstdint>
#include <vector>

#include "greenmark/types.hpp"

namespace greenmark {

// Membership-queryable subset of [0, N), stored as a bitset. Immutable
// after construction and safe to share across threads.
class GreenList {
 public:
  GreenList(std::int32_t vocab_size, const std::vector<Token>& members);

  bool contains(Token t) const noexcept {
    return (bits_[static_cast<std::uint32_t>(t) >> 6] >> (t & 63)) & 1u;
  }

  std::int32_t size() const noexcept { return count_; }
  std::int32_t vocab_size() const noexcept { return vocab_size_; }

  std::vector<Token> members() const;      // ascending
  std::vector<Token> complement() const;   // the red list, ascending

 private:
  std::int32_t vocab_size_;
  std::int32_t count_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace greenmark
