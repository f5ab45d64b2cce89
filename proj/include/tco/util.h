// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tco {

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

// Contract checks stay on in release builds; violations carry the failing expression.
#define TCO_CHECK(cond, msg)                                                     \
  do {                                                                           \
    if (!(cond)) {                                                               \
      std::ostringstream oss_;                                                   \
      oss_ << msg << " (" #cond " failed at " << __FILE__ << ":" << __LINE__ << ")"; \
      ::tco::fail(oss_.str());                                                   \
    }                                                                            \
  } while (0)

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline double gaussian(Rng& rng, double mean = 0.0, double stddev = 1.0) {
  return std::normal_distribution<double>(mean, stddev)(rng);
}

// FNV-1a over raw bytes; used to certify frozen tensors untouched.
inline uint64_t fnv1a(const void* p, size_t n, uint64_t h = 1469598103934665603ull) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

int env_thread_count();  // TCO_THREADS, clamped to [1, hardware_concurrency]

}  // namespace tco
