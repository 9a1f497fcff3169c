#pragma once

#include "opprl/rng.hpp"

namespace opprl {

enum class VariationKind {
  binary_iid,
  periodic_square_wave,
  beta_iid,
  constant,
};

/// Generator of the per-episode variation factor L_k. The factor is external:
/// it is produced by its own random stream and never depends on the MDP state
/// or the agent's actions.
struct VariationProcess {
  VariationKind kind = VariationKind::constant;
  double eps0 = 0.0;        ///< low level (binary / square wave)
  double eps1 = 0.0;        ///< high level is 1 - eps1
  double rho = 0.5;         ///< P{L_k = eps0} for binary_iid
  double beta_alpha = 2.0;  ///< Beta shape parameters for beta_iid
  double beta_beta = 2.0;
  double value = 1.0;  ///< constant level

  /// i.i.d. L_k in {eps0, 1 - eps1} with P{L_k = eps0} = rho.
  static VariationProcess binary(double eps0, double eps1, double rho);
  /// Deterministic L_k = eps0 on even episodes, 1 - eps1 on odd episodes.
  static VariationProcess square_wave(double eps0, double eps1);
  /// i.i.d. L_k ~ Beta(alpha, beta).
  static VariationProcess beta(double alpha, double beta);
  static VariationProcess constant(double value);
};

/// Clamping thresholds for normalizing the variation factor to [0, 1].
struct NormalizationThresholds {
  double l_min = 0.0;
  double l_max = 1.0;
};

NormalizationThresholds make_thresholds(double l_min, double l_max);

/// Draws L_k for episode k (1-based). Only the stochastic kinds consume the
/// stream.
double sample_variation(const VariationProcess& process, int episode_index,
                        RandomStream& rng);

/// Normalized variation factor: clamp L to [l_min, l_max], then rescale
/// affinely to [0, 1].
double normalize(double variation, const NormalizationThresholds& thresholds);

/// Thresholds from the distribution itself: for beta_iid the rho- and
/// (1-rho)-quantiles of the Beta CDF (bisection to 1e-10); for binary_iid the
/// two support points (eps0, 1 - eps1), which map the levels to exactly
/// {0, 1}. Other kinds are rejected.
NormalizationThresholds quantile_thresholds(const VariationProcess& process,
                                            double rho);

/// Beta(a, b) CDF by Simpson integration under the t = sin^2 substitution,
/// which keeps the integrand finite for a, b >= 1/2 (smaller shapes are
/// rejected). Accurate to well below 1e-8 on the supported range.
double beta_cdf(double x, double a, double b);

}  // namespace opprl
