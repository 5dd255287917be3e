#pragma once

#include <cstdint>
#include <vector>

namespace greenmark {

using Token = std::int32_t;
using TokenSeq = std::vector<Token>;

// Raw scores over the vocabulary (length N, all finite).
using LogitVector = std::vector<double>;
// Nonnegative, sums to 1 within 1e-9 (length N).
using ProbVector = std::vector<double>;

inline constexpr double kProbFloor = 1e-30;  // floor applied before any log
inline constexpr double kProbSumTol = 1e-9;

}  // namespace greenmark
