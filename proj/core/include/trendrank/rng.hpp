#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace trendrank {

/// splitmix64 finalizer. Bijective with good avalanche; used to turn seed
/// paths into engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Substream derivation. Every consumer of randomness seeds its own engine
/// from a (root, path) pair:
///
///   h = mix64(root); for each p in path: h = mix64(h ^ mix64(p))
///
/// Distinct paths give unrelated streams, results never depend on the order
/// in which streams are consumed, and any stream can be re-created in
/// isolation (replications and hypothesis tests can run in parallel or be
/// replayed individually).
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(root);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
  return h;
}

/// First path component naming the role of a stream.
namespace stream {
inline constexpr std::uint64_t kInnovations = 1;   // simulate: panel innovations
inline constexpr std::uint64_t kDesignMatrix = 2;  // simulate: fixed D draw
inline constexpr std::uint64_t kTest = 3;          // rank: (algorithm, j) test draws
inline constexpr std::uint64_t kMcPanel = 4;       // harness: (cell, rep) panel
inline constexpr std::uint64_t kMcTest = 5;        // harness: (cell, rep, algorithm) tests
inline constexpr std::uint64_t kMcDesign = 6;      // harness: per-cell D seed
}  // namespace stream

/// Deterministic random source. std::mt19937_64 is bit-exact across standard
/// library implementations; the distribution transforms live here because
/// std::normal_distribution and friends are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t word() { return engine_(); }

  /// Uniform on [2^-53, 1]; never zero, so log() is safe.
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform01_halfopen() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; generates pairs and caches one.
  double normal();

  /// Number of successes in m fair coin flips, consuming ceil(m/64) words.
  /// Same law as counting {i : normal() <= 0} over m draws without
  /// materialising them.
  std::int64_t binomial_half(std::int64_t m);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace trendrank
