#pragma once

#include <cstdint>

#include "greenmark/green_list.hpp"
#include "greenmark/rng.hpp"
#include "greenmark/types.hpp"

namespace greenmark {

// Token-level Levenshtein distance (insert/delete/replace, unit cost).
int edit_distance(const TokenSeq& a, const TokenSeq& b);

struct EditMix {
  double p_ins = 0;
  double p_del = 0;
  double p_rep = 1.0;  // must sum to 1

  static EditMix replacement_only() { return {0, 0, 1}; }
  static EditMix uniform() { return {1.0 / 3, 1.0 / 3, 1.0 / 3}; }
};

// Applies exactly eta atomic edits at uniform random positions, drawing
// insertion/replacement tokens uniformly from [0, N). A swap is two edits
// (delete + insert), so budgets count it at cost 2. Guarantees
// edit_distance(seq, out) <= eta. Ops that need a nonempty sequence are
// skipped if the sequence empties; an empty result is legal.
TokenSeq random_edit_attack(const TokenSeq& seq, std::int32_t eta, const EditMix& mix,
                            std::int32_t vocab_size, Rng& rng);

// Exact operation count for a rate-style budget.
std::int32_t eta_from_rate(double rate, std::size_t n);

// List-aware adversary: replaces up to eta green tokens (uniformly chosen
// green positions) with uniformly random red tokens. Each replacement
// removes exactly one green hit at fixed length, the worst trade available
// against the fixed-split detector.
TokenSeq greenaware_attack(const TokenSeq& seq, const GreenList& green, std::int32_t eta,
                           std::int32_t vocab_size, Rng& rng);

}  // namespace greenmark
