#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace sauna {

// A named view over one contiguous parameter (or gradient) tensor.
// Networks expose their storage through these so the optimizer, gradient
// clipping, and checkpointing all work on one flat representation.
struct ParamSpan {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
};

using ParamSpans = std::vector<ParamSpan>;

inline std::size_t total_size(const ParamSpans& spans) {
  std::size_t n = 0;
  for (const auto& s : spans) n += s.size;
  return n;
}

inline double l1_norm(const ParamSpans& spans) {
  double acc = 0.0;
  for (const auto& s : spans)
    for (std::size_t i = 0; i < s.size; ++i) acc += std::abs(s.data[i]);
  return acc;
}

inline double l2_norm(const ParamSpans& spans) {
  double acc = 0.0;
  for (const auto& s : spans)
    for (std::size_t i = 0; i < s.size; ++i) acc += s.data[i] * s.data[i];
  return std::sqrt(acc);
}

inline void scale(const ParamSpans& spans, double factor) {
  for (const auto& s : spans)
    for (std::size_t i = 0; i < s.size; ++i) s.data[i] *= factor;
}

inline void fill(const ParamSpans& spans, double value) {
  for (const auto& s : spans)
    for (std::size_t i = 0; i < s.size; ++i) s.data[i] = value;
}

inline bool all_finite(const ParamSpans& spans) {
  for (const auto& s : spans)
    for (std::size_t i = 0; i < s.size; ++i)
      if (!std::isfinite(s.data[i])) return false;
  return true;
}

// Clips the joint L2 norm of the given spans to max_norm (no-op if already
// within bounds or max_norm <= 0). Returns the pre-clip norm.
inline double clip_global_norm(const ParamSpans& spans, double max_norm) {
  double norm = l2_norm(spans);
  if (max_norm > 0.0 && norm > max_norm) {
    scale(spans, max_norm / norm);
  }
  return norm;
}

}  // namespace sauna
