#include "mptn/theory.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "mptn/build.hpp"
#include "mptn/error.hpp"
#include "mptn/resilience.hpp"

namespace mptn {
namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr int kMaxDoublings = 60;

double benefit_sse(std::span<const double> d, std::span<const double> y, double alpha, double& b_out) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double phi = 1.0 - std::exp(-alpha * d[i]);
    num += y[i] * phi;
    den += phi * phi;
  }
  b_out = den > 0.0 ? num / den : 0.0;
  double sse = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = y[i] - b_out * (1.0 - std::exp(-alpha * d[i]));
    sse += r * r;
  }
  return sse;
}

}  // namespace

void validate(const UtilityParams& p) {
  if (!(p.b_max > 0.0) || !(p.alpha > 0.0) || !(p.beta_risk > 0.0) || !(p.k >= 1.0) ||
      !std::isfinite(p.b_max) || !std::isfinite(p.alpha) || !std::isfinite(p.beta_risk) ||
      !std::isfinite(p.k)) {
    throw InputError(fmt::format("invalid utility parameters (b_max={}, alpha={}, beta={}, k={})",
                                 p.b_max, p.alpha, p.beta_risk, p.k));
  }
}

UtilityValue utility(const UtilityParams& p, double d) {
  if (!(d >= 0.0)) throw InputError("integration level must be non-negative");
  UtilityValue v;
  v.b = p.b_max * (1.0 - std::exp(-p.alpha * d));
  v.r = p.beta_risk * std::pow(d, p.k);
  v.u = v.b - v.r;
  return v;
}

double marginal_utility(const UtilityParams& p, double d) {
  return p.b_max * p.alpha * std::exp(-p.alpha * d) - p.beta_risk * p.k * std::pow(d, p.k - 1.0);
}

double utility_curvature(const UtilityParams& p, double d) {
  const double risk = p.k == 1.0 ? 0.0 : p.beta_risk * p.k * (p.k - 1.0) * std::pow(d, p.k - 2.0);
  return -p.b_max * p.alpha * p.alpha * std::exp(-p.alpha * d) - risk;
}

OptimalIntegration solve_optimal_d(const UtilityParams& p) {
  validate(p);
  OptimalIntegration out;
  if (p.k == 1.0 && p.b_max * p.alpha <= p.beta_risk) {
    out.boundary = true;
    out.residual = std::abs(marginal_utility(p, 0.0));
    out.curvature = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // dU/dd is positive near 0 and strictly decreasing, so one sign change exists.
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (marginal_utility(p, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > kMaxDoublings) throw NumericalError("optimal d: no bracket found");
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double fx = marginal_utility(p, x);
    if (fx == 0.0) break;
    if (fx > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = utility_curvature(p, x);
    double next = x - fx / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
      x = next;
      break;
    }
    x = next;
  }

  out.d_star = x;
  out.residual = std::abs(marginal_utility(p, x));
  out.curvature = utility_curvature(p, x);
  out.concave = out.curvature < 0.0;
  if (!(out.residual < kResidualTolerance)) {
    throw NumericalError(fmt::format("optimal d: residual {} above tolerance", out.residual));
  }
  return out;
}

std::optional<UtilityParam> parse_utility_param(std::string_view text) {
  if (text == "bmax" || text == "b_max") return UtilityParam::BMax;
  if (text == "alpha") return UtilityParam::Alpha;
  if (text == "beta" || text == "beta_risk") return UtilityParam::BetaRisk;
  if (text == "k") return UtilityParam::K;
  return std::nullopt;
}

int sensitivity(const UtilityParams& p, UtilityParam param, double delta) {
  auto q = p;
  switch (param) {
    case UtilityParam::BMax: q.b_max *= 1.0 + delta; break;
    case UtilityParam::Alpha: q.alpha *= 1.0 + delta; break;
    case UtilityParam::BetaRisk: q.beta_risk *= 1.0 + delta; break;
    case UtilityParam::K: q.k *= 1.0 + delta; break;
  }
  const double base = solve_optimal_d(p).d_star;
  const double moved = solve_optimal_d(q).d_star;
  if (moved > base) return 1;
  if (moved < base) return -1;
  return 0;
}

std::vector<ParetoPoint> pareto_sweep(const MultilayerGraph& base, std::span<const double> d_imts,
                                      const ParetoOptions& options) {
  if (!std::is_sorted(d_imts.begin(), d_imts.end())) throw InputError("d_imt values must ascend");
  std::vector<Edge> intra;
  for (const auto& e : base.edges()) {
    if (e.kind == EdgeKind::IntraModal) intra.push_back(e);
  }
  const auto skeleton = MultilayerGraph::from_indexed(base.stations(), intra, 0.0);
  std::vector<ParetoPoint> out;
  for (double d : d_imts) {
    const auto g = add_transfer_edges(skeleton, d).graph;
    ParetoPoint pt;
    pt.d_imt = d;
    pt.imt_edges = g.count_edges(EdgeKind::InterModal);
    pt.rb_random = degradation_curve(g, AttackStrategy::random(options.seed), options.repeats).r_b;
    pt.rb_targeted = degradation_curve(g, AttackStrategy::targeted(AttackKind::DegreeTargeted)).r_b;
    pt.rl_750 = relocation_rate(g, options.rl_d_max, RelocationModel::Symmetric).network_rl;
    out.push_back(pt);
  }
  return out;
}

UtilityFit fit_utility(std::span<const ParetoPoint> sweep, double distance_scale) {
  if (sweep.size() < 3) throw InputError("fitting needs at least three sweep points");
  std::vector<double> d, benefit, risk;
  for (const auto& pt : sweep) {
    d.push_back(pt.d_imt / distance_scale);
    benefit.push_back(pt.rb_random - sweep.front().rb_random);
    risk.push_back(sweep.front().rb_targeted - pt.rb_targeted);
  }

  UtilityFit fit;
  // Benefit: scan alpha on a log grid, then golden-section refine.
  double best_alpha = 1.0, best_sse = std::numeric_limits<double>::infinity(), b = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double alpha = std::pow(10.0, -3.0 + 5.0 * i / 400.0);
    const double sse = benefit_sse(d, benefit, alpha, b);
    if (sse < best_sse) {
      best_sse = sse;
      best_alpha = alpha;
    }
  }
  double lo = best_alpha / std::pow(10.0, 5.0 / 400.0), hi = best_alpha * std::pow(10.0, 5.0 / 400.0);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 100; ++i) {
    const double m1 = hi - ratio * (hi - lo), m2 = lo + ratio * (hi - lo);
    if (benefit_sse(d, benefit, m1, b) < benefit_sse(d, benefit, m2, b)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  fit.params.alpha = 0.5 * (lo + hi);
  fit.benefit_sse = benefit_sse(d, benefit, fit.params.alpha, fit.params.b_max);

  // Risk: log-log regression on the positive part, k clamped to >= 1.
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0 && risk[i] > 0.0) {
      lx.push_back(std::log(d[i]));
      ly.push_back(std::log(risk[i]));
    }
  }
  if (lx.empty()) throw NumericalError("risk proxy never increases; cannot fit the risk model");
  double k = 1.0;
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) k = std::max(1.0, sxy / sxx);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double basis = std::pow(d[i], k);
    num += risk[i] * basis;
    den += basis * basis;
  }
  fit.params.k = k;
  fit.params.beta_risk = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = risk[i] - fit.params.beta_risk * std::pow(d[i], k);
    fit.risk_sse += r * r;
  }
  validate(fit.params);
  fit.optimum = solve_optimal_d(fit.params);
  return fit;
}

}  // namespace mptn
