#include "greenmark/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greenmark {

int edit_distance(const TokenSeq& a, const TokenSeq& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  // Single-row DP over the shorter sequence.
  const TokenSeq& cols = m <= n ? b : a;
  const TokenSeq& rows = m <= n ? a : b;
  std::vector<int> row(cols.size() + 1);
  for (std::size_t j = 0; j <= cols.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= rows.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= cols.size(); ++j) {
      const int sub = diag + (rows[i - 1] == cols[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[cols.size()];
}

std::int32_t eta_from_rate(double rate, std::size_t n) {
  if (!(rate >= 0)) throw std::invalid_argument("rate must be >= 0");
  return static_cast<std::int32_t>(std::llround(rate * static_cast<double>(n)));
}

TokenSeq random_edit_attack(const TokenSeq& seq, std::int32_t eta, const EditMix& mix,
                            std::int32_t vocab_size, Rng& rng) {
  if (eta < 0) throw std::invalid_argument("eta must be >= 0");
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
  const double sum = mix.p_ins + mix.p_del + mix.p_rep;
  if (!(std::abs(sum - 1.0) <= 1e-9) || mix.p_ins < 0 || mix.p_del < 0 || mix.p_rep < 0)
    throw std::invalid_argument("edit mix must be a distribution");

  TokenSeq out = seq;
  for (std::int32_t k = 0; k < eta; ++k) {
    const double u = rng.next_unit();
    const auto len = static_cast<std::uint64_t>(out.size());
    if (u < mix.p_ins) {
      const auto pos = rng.next_below(len + 1);
      const auto tok = static_cast<Token>(rng.next_below(static_cast<std::uint64_t>(vocab_size)));
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), tok);
    } else if (u < mix.p_ins + mix.p_del) {
      if (len == 0) continue;  // nothing left to delete
      const auto pos = rng.next_below(len);
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      if (len == 0) continue;
      const auto pos = rng.next_below(len);
      out[pos] = static_cast<Token>(rng.next_below(static_cast<std::uint64_t>(vocab_size)));
    }
  }
  return out;
}

TokenSeq greenaware_attack(const TokenSeq& seq, const GreenList& green, std::int32_t eta,
                           std::int32_t vocab_size, Rng& rng) {
  if (eta < 0) throw std::invalid_argument("eta must be >= 0");
  if (vocab_size != green.vocab_size())
    throw std::invalid_argument("vocab_size does not match green list");
  const std::vector<Token> red = green.complement();
  if (red.empty()) throw std::invalid_argument("green list covers the whole vocabulary");

  std::vector<std::size_t> green_positions;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (green.contains(seq[i])) green_positions.push_back(i);

  // Partial Fisher-Yates: the first `hits` entries are a uniform sample
  // of green positions without replacement.
  const auto hits =
      std::min<std::size_t>(static_cast<std::size_t>(eta), green_positions.size());
  TokenSeq out = seq;
  for (std::size_t i = 0; i < hits; ++i) {
    const auto j = i + rng.next_below(green_positions.size() - i);
    std::swap(green_positions[i], green_positions[j]);
    out[green_positions[i]] = red[rng.next_below(red.size())];
  }
  return out;
}

}  // namespace greenmark
