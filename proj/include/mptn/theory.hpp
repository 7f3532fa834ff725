#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mptn/graph.hpp"

namespace mptn {

/// U(d) = B(d) - R(d) with B(d) = b_max (1 - exp(-alpha d)) and R(d) = beta_risk d^k.
struct UtilityParams {
  double b_max = 1.0;
  double alpha = 1.0;
  double beta_risk = 0.1;
  double k = 2.0;
};

/// Throws InputError unless b_max, alpha, beta_risk > 0 and k >= 1.
void validate(const UtilityParams& p);

struct UtilityValue {
  double u = 0.0;
  double b = 0.0;
  double r = 0.0;
};

UtilityValue utility(const UtilityParams& p, double d);
/// dU/dd: marginal benefit minus marginal risk.
double marginal_utility(const UtilityParams& p, double d);
/// d2U/dd2, defined for d > 0.
double utility_curvature(const UtilityParams& p, double d);

struct OptimalIntegration {
  double d_star = 0.0;
  double residual = 0.0;    // |dU/dd| at d_star
  double curvature = 0.0;   // d2U/dd2 at d_star (NaN on the boundary)
  bool concave = false;     // curvature < 0
  bool boundary = false;    // k = 1 and b_max alpha <= beta_risk: no integration
};

/// Root of the marginal condition b_max alpha exp(-alpha d) = beta_risk k d^(k-1),
/// bracketed by doubling an upper bound and refined with Newton steps that
/// fall back to bisection. Throws NumericalError if no bracket is found or
/// the residual stays above 1e-10.
OptimalIntegration solve_optimal_d(const UtilityParams& p);

enum class UtilityParam { BMax, Alpha, BetaRisk, K };
std::optional<UtilityParam> parse_utility_param(std::string_view text);

/// Sign (-1, 0, +1) of the change in d* when `param` is scaled by (1 + delta).
int sensitivity(const UtilityParams& p, UtilityParam param, double delta);

struct ParetoPoint {
  double d_imt = 0.0;
  std::size_t imt_edges = 0;  // directed inter-modal edges
  double rb_random = 0.0;
  double rb_targeted = 0.0;
  double rl_750 = 0.0;
  bool operator==(const ParetoPoint&) const = default;
};

struct ParetoOptions {
  std::size_t repeats = 50;
  std::uint64_t seed = 42;
  double rl_d_max = 750.0;
};

/// Rebuilds transfer edges on `base` for each threshold (ascending) and
/// records robustness under random failure and degree attack plus the
/// symmetric relocation rate.
std::vector<ParetoPoint> pareto_sweep(const MultilayerGraph& base, std::span<const double> d_imts,
                                      const ParetoOptions& options = {});

struct UtilityFit {
  UtilityParams params;
  double benefit_sse = 0.0;
  double risk_sse = 0.0;
  OptimalIntegration optimum;
};

/// Heuristic least-squares fit of the utility model to a sweep: benefit is
/// the random-failure r_b gain over the first point, risk is the targeted r_b
/// loss, and d is d_imt / distance_scale.
UtilityFit fit_utility(std::span<const ParetoPoint> sweep, double distance_scale = 100.0);

}  // namespace mptn
