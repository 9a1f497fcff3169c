#pragma once

#include <cstdint>
#include <random>

namespace opprl {

/// Roles of the per-seed substreams used by an experiment run. Keeping the
/// streams separate guarantees that the variation-factor sequence is
/// identical across algorithms run with the same seed.
enum class StreamKind : std::uint32_t {
  variation = 0,
  transitions = 1,
  agent = 2,
};

/// Deterministic random stream. All draw procedures are coded explicitly on
/// top of mt19937_64 (instead of the std:: distributions, whose algorithms
/// are implementation-defined), so a seed pins the exact sequence of values.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t raw_seed) : engine_(raw_seed) {}
  RandomStream(std::int64_t seed, StreamKind kind);

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  /// Uniform on the open interval (0, 1); safe to pass through log().
  double uniform_open01();

  /// Standard normal via Box-Muller on two fresh uniforms.
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// log of a Gamma(shape, 1) draw. Stays finite for shapes as small as
  /// 1e-3, where the draw itself would underflow to zero.
  double log_gamma(double shape);

  /// Beta(a, b) from two gamma draws, combined in log space.
  double beta(double a, double b);

private:
  double gamma_at_least_one(double shape);

  std::mt19937_64 engine_;
};

}  // namespace opprl
