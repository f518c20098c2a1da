#pragma once

#include <cstdint>
#include <string_view>

namespace temper {

/// Splittable counter-based random source.
///
/// Every stream is identified by a 64-bit key; draws are a keyed hash of an
/// incrementing counter, so a stream never carries hidden state beyond
/// (key, counter). Child streams are derived by hashing (key, index), which
/// makes results independent of evaluation order: deriving the stream for
/// (seed, replicate, n_index) gives the same draws whether replicates run
/// serially or in parallel.
///
/// Instances are cheap values. Share kernels across threads, not sources:
/// each worker derives its own.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Child stream for a sub-task index.
  RandomSource derive(std::uint64_t index) const;
  /// Child stream for a named purpose (e.g. "predictor").
  RandomSource derive(std::string_view tag) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal (Marsaglia polar, one value cached).
  double normal();
  /// Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);
  double beta(double a, double b);
  double student_t(double df);
  bool bernoulli(double p);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

}  // namespace temper
