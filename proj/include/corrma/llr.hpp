#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace corrma {

// Sign convention used everywhere in this project:
//   LLR = ln P(bit = 0) / P(bit = 1)
using LlrBlock = std::vector<double>;

inline constexpr double kLlrClip = 50.0;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double clip_llr(double v) { return std::clamp(v, -kLlrClip, kLlrClip); }

inline void clip_block(LlrBlock& block) {
  for (double& v : block) v = clip_llr(v);
}

// ln(e^a + e^b), exact Jacobian form
inline double max_star(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace corrma
