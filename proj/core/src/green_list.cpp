#include "greenmark/green_list.hpp"

#include <stdexcept>

namespace greenmark {

GreenList::GreenList(std::int32_t vocab_size, const std::vector<Token>& members)
    : vocab_size_(vocab_size),
      count_(0),
      bits_(static_cast<std::size_t>((vocab_size + 63) / 64), 0) {
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be positive");
  for (Token t : members) {
    if (t < 0 || t >= vocab_size) throw std::invalid_argument("green member out of range");
    std::uint64_t& block = bits_[static_cast<std::uint32_t>(t) >> 6];
    const std::uint64_t mask = 1ULL << (t & 63);
    if (block & mask) throw std::invalid_argument("duplicate green member");
    block |= mask;
    ++count_;
  }
}

std::vector<Token> GreenList::members() const {
  std::vector<Token> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (Token t = 0; t < vocab_size_; ++t)
    if (contains(t)) out.push_back(t);
  return out;
}

std::vector<Token> GreenList::complement() const {
  std::vector<Token> out;
  out.reserve(static_cast<std::size_t>(vocab_size_ - count_));
  for (Token t = 0; t < vocab_size_; ++t)
    if (!contains(t)) out.push_back(t);
  return out;
}

}  // namespace greenmark
