#include "opprl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opprl {

RandomStream::RandomStream(std::int64_t seed, StreamKind kind) {
  const auto raw = static_cast<std::uint64_t>(seed);
  std::seed_seq seq{static_cast<std::uint32_t>(raw & 0xffffffffu),
                    static_cast<std::uint32_t>(raw >> 32),
                    static_cast<std::uint32_t>(kind)};
  engine_.seed(seq);
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() {
  const double u1 = uniform_open01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang squeeze method, valid for shape >= 1.
double RandomStream::gamma_at_least_one(double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = uniform_open01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape >= 1.0) return gamma_at_least_one(shape);
  // Boost for shape < 1: Gamma(shape) = Gamma(shape + 1) * U^(1/shape).
  return gamma_at_least_one(shape + 1.0) *
         std::exp(std::log(uniform_open01()) / shape);
}

double RandomStream::log_gamma(double shape) {
  if (!(shape > 0.0))
    throw std::invalid_argument("log_gamma: shape must be > 0");
  if (shape >= 1.0) return std::log(gamma_at_least_one(shape));
  return std::log(gamma_at_least_one(shape + 1.0)) +
         std::log(uniform_open01()) / shape;
}

double RandomStream::beta(double a, double b) {
  const double la = log_gamma(a);
  const double lb = log_gamma(b);
  const double m = std::max(la, lb);
  const double ea = std::exp(la - m);
  const double eb = std::exp(lb - m);
  return ea / (ea + eb);
}

}  // namespace opprl
