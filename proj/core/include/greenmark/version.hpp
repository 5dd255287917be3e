#pragma once

namespace greenmark {

inline constexpr const char* kVersion = "greenmark-0.1.0";

}  // namespace greenmark
