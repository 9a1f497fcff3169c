#include "opprl/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opprl {

namespace {

void check_levels(double eps0, double eps1) {
  if (eps0 < 0.0 || eps1 < 0.0)
    throw std::invalid_argument("variation: eps0 and eps1 must be >= 0");
  if (!(eps0 < 1.0 - eps1))
    throw std::invalid_argument("variation: require eps0 < 1 - eps1");
}

}  // namespace

VariationProcess VariationProcess::binary(double eps0, double eps1,
                                          double rho) {
  check_levels(eps0, eps1);
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("variation: rho must lie in [0, 1]");
  VariationProcess p;
  p.kind = VariationKind::binary_iid;
  p.eps0 = eps0;
  p.eps1 = eps1;
  p.rho = rho;
  return p;
}

VariationProcess VariationProcess::square_wave(double eps0, double eps1) {
  check_levels(eps0, eps1);
  VariationProcess p;
  p.kind = VariationKind::periodic_square_wave;
  p.eps0 = eps0;
  p.eps1 = eps1;
  return p;
}

VariationProcess VariationProcess::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("variation: Beta shapes must be > 0");
  VariationProcess p;
  p.kind = VariationKind::beta_iid;
  p.beta_alpha = alpha;
  p.beta_beta = beta;
  return p;
}

VariationProcess VariationProcess::constant(double value) {
  if (value < 0.0)
    throw std::invalid_argument("variation: constant level must be >= 0");
  VariationProcess p;
  p.kind = VariationKind::constant;
  p.value = value;
  return p;
}

NormalizationThresholds make_thresholds(double l_min, double l_max) {
  if (!(l_min < l_max))
    throw std::invalid_argument("thresholds: require l_min < l_max");
  return {l_min, l_max};
}

double sample_variation(const VariationProcess& process, int episode_index,
                        RandomStream& rng) {
  if (episode_index < 1)
    throw std::invalid_argument("sample_variation: episode index starts at 1");
  switch (process.kind) {
    case VariationKind::binary_iid:
      return rng.uniform01() < process.rho ? process.eps0 : 1.0 - process.eps1;
    case VariationKind::periodic_square_wave:
      return episode_index % 2 == 0 ? process.eps0 : 1.0 - process.eps1;
    case VariationKind::beta_iid:
      return rng.beta(process.beta_alpha, process.beta_beta);
    case VariationKind::constant:
      return process.value;
  }
  throw std::invalid_argument("sample_variation: unknown kind");
}

double normalize(double variation, const NormalizationThresholds& thresholds) {
  const double clamped =
      std::max(thresholds.l_min, std::min(variation, thresholds.l_max));
  return (clamped - thresholds.l_min) / (thresholds.l_max - thresholds.l_min);
}

double beta_cdf(double x, double a, double b) {
  if (std::min(a, b) < 0.5)
    throw std::invalid_argument("beta_cdf: shapes below 0.5 not supported");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Integrate t^(a-1) (1-t)^(b-1) with t = sin^2(theta):
  // the integrand becomes 2 sin^(2a-1) cos^(2b-1), bounded for a, b >= 1/2.
  // Shapes below 1 leave a singular derivative at the endpoint, so the mesh
  // is refined until the composite error is back under 1e-9.
  const double upper = std::asin(std::sqrt(x));
  const int panels = std::min(a, b) >= 1.0 ? 10000 : 320000;
  const double step = upper / panels;
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return 2.0 * std::pow(s, 2.0 * a - 1.0) * std::pow(c, 2.0 * b - 1.0);
  };
  double sum = integrand(0.0) + integrand(upper);
  for (int i = 1; i < panels; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * step);
  const double integral = sum * step / 3.0;
  const double log_norm =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return std::min(1.0, integral * std::exp(log_norm));
}

NormalizationThresholds quantile_thresholds(const VariationProcess& process,
                                            double rho) {
  if (process.kind == VariationKind::binary_iid)
    return make_thresholds(process.eps0, 1.0 - process.eps1);
  if (process.kind != VariationKind::beta_iid)
    throw std::invalid_argument(
        "quantile_thresholds: supported for binary and beta processes only");
  if (!(rho > 0.0) || !(rho < 0.5))
    throw std::invalid_argument(
        "quantile_thresholds: rho must lie in (0, 0.5)");

  auto quantile = [&](double target) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (beta_cdf(mid, process.beta_alpha, process.beta_beta) < target)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  return make_thresholds(quantile(rho), quantile(1.0 - rho));
}

}  // namespace opprl
