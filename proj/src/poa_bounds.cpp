#include "mixroute/poa_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixroute/error.hpp"

namespace mixroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGammaSlack = 1e-9;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
}

void require_mu(double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::DomainError, "mu must lie in (0, 1]");
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::DomainError, "lambda must lie in [0, 1]");
}

bool unit_asymmetry(double mu) { return std::abs(1.0 - mu) < kUnitAsymmetryEps; }

/// 1 - sqrt(1 - alpha) without cancellation for small alpha.
double one_minus_root(double alpha) { return alpha / (1.0 + std::sqrt(1.0 - alpha)); }

Threshold make_threshold(double value) {
  Threshold t;
  t.value = value;
  t.in_range = value >= 0.0 && value <= 1.0;
  t.clamped = std::clamp(value, 0.0, 1.0);
  return t;
}

double checked_gamma(double gamma, double alpha) {
  if (!(gamma >= 0.0) || gamma > 1.0 / alpha + kGammaSlack)
    throw Error(ErrorCode::DomainError, "gamma must lie in [0, 1/alpha]");
  return std::min(gamma, 1.0 / alpha);
}

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::A0: return "A0";
    case Region::A1: return "A1";
    case Region::LambdaStar: return "A_lambda*";
    case Region::LambdaPlus: return "A_lambda+";
  }
  return "?";
}

std::string_view to_string(BoundExpression expr) {
  switch (expr) {
    case BoundExpression::Infinite: return "inf";
    case BoundExpression::AtOne: return "PoA_w1(1)";
    case BoundExpression::AtLambdaStar: return "PoA_w1(lambda*)";
    case BoundExpression::AtLambdaPlus: return "PoA_w1(lambda+)";
  }
  return "?";
}

AlphaThresholds alpha_thresholds(double mu) {
  require_mu(mu);
  const double eps = 1.0 - mu;
  const double root = std::sqrt(mu);
  AlphaThresholds t;
  if (eps < kUnitAsymmetryEps) {
    // every threshold diverges to -inf as mu -> 1
    t.alpha0 = t.alpha1 = t.alpha2 = t.alpha_tilde = t.alpha1_alternative = make_threshold(-kInf);
    return t;
  }
  t.alpha0 = make_threshold((1.0 - 2.0 * root) / eps);
  t.alpha1 = make_threshold(1.0 + (mu - std::sqrt(mu * mu + 4.0 * mu)) / (2.0 * eps));
  t.alpha2 = make_threshold((1.0 - 2.0 * mu) / (eps * eps));
  t.alpha_tilde = make_threshold((1.0 - 2.0 * root) / ((1.0 - root) * (1.0 - root)));
  t.alpha1_alternative = t.alpha_tilde;
  return t;
}

LambdaThresholds lambda_thresholds(double alpha, double mu) {
  require_alpha(alpha);
  require_mu(mu);
  const double ae = alpha * (1.0 - mu);
  const double s = std::sqrt(1.0 - alpha);
  const double denom = alpha * (1.0 - mu) * (1.0 - mu) + 4.0 * mu;
  LambdaThresholds t;
  t.omega1_root = (1.0 - ae) * (1.0 - ae) / (4.0 * mu);
  t.omega2_root = 1.0 - alpha;
  t.plus = (2.0 * mu * (1.0 + s) - ae * mu) / denom;
  t.minus = (2.0 * mu * one_minus_root(alpha) - ae * mu) / denom;
  t.link_critical = mu / (ae + 2.0 * mu);
  t.star = (1.0 - ae) * (1.0 - ae) / ((2.0 - ae) * mu);
  return t;
}

double beta_bound(double gamma, double alpha, double mu, double alpha_star) {
  require_alpha(alpha);
  require_mu(mu);
  if (!(alpha_star >= 0.0 && alpha_star <= 1.0)) throw Error(ErrorCode::DomainError, "alpha_star must lie in [0, 1]");
  gamma = checked_gamma(gamma, alpha);
  if (gamma == 0.0) return 1.0;
  const double eps = 1.0 - mu;
  const double gamma_tilde = 1.0 / (1.0 + (alpha - alpha_star) * eps);
  if (gamma >= gamma_tilde) return 0.0;
  return 1.0 - (1.0 - alpha_star * eps) / (1.0 / gamma - alpha * eps);
}

double beta_bound_relaxed(double gamma, double alpha, double mu) {
  require_alpha(alpha);
  require_mu(mu);
  gamma = checked_gamma(gamma, alpha);
  if (gamma == 0.0) return 1.0;
  const double eps = 1.0 - mu;
  const double gamma_plus = unit_asymmetry(mu) ? 1.0 : 1.0 / (alpha * eps + mu);
  if (gamma >= gamma_plus) return 0.0;
  return 1.0 - mu / (1.0 / gamma - alpha * eps);
}

double delta(double lambda, double alpha, double mu) {
  require_lambda(lambda);
  require_alpha(alpha);
  require_mu(mu);
  if (unit_asymmetry(mu)) {
    if (lambda == 0.0) throw Error(ErrorCode::DomainError, "delta undefined at lambda = 0, mu = 1");
    return 1.0;
  }
  return std::sqrt(lambda * mu / (alpha * (1.0 - mu) + lambda * mu));
}

double omega1(double lambda, double alpha, double mu) {
  require_lambda(lambda);
  require_alpha(alpha);
  require_mu(mu);
  if (unit_asymmetry(mu)) {
    if (lambda == 0.0) throw Error(ErrorCode::DomainError, "omega1 limit undefined at lambda = 0");
    return 1.0 / (4.0 * lambda);
  }
  // (1 - D)/(a e) - mu (1 - D)^2 lambda / (a^2 e^2 D) with e = 1 - mu, rewritten via
  // 1 - D = (1 - D^2)/(1 + D) so that no power of (1 - mu) remains in a denominator.
  const double ae = alpha * (1.0 - mu);
  const double d = delta(lambda, alpha, mu);
  const double u = 1.0 / ((ae + lambda * mu) * (1.0 + d));
  return u - u * u * std::sqrt(lambda * mu * (ae + lambda * mu));
}

double omega1_sup(double lambda, double alpha, double mu) {
  const LambdaThresholds t = lambda_thresholds(alpha, mu);
  require_lambda(lambda);
  if (lambda > t.link_critical) return omega1(lambda, alpha, mu);
  const double gamma_plus = unit_asymmetry(mu) ? 1.0 : 1.0 / (alpha * (1.0 - mu) + mu);
  return gamma_plus * (1.0 - lambda);
}

double omega2(double lambda, double alpha) {
  require_lambda(lambda);
  require_alpha(alpha);
  return (1.0 - lambda) / alpha;
}

double omega(double lambda, double alpha, double mu) {
  const double plus = lambda_thresholds(alpha, mu).plus;
  return lambda <= plus ? omega2(lambda, alpha) : omega1(lambda, alpha, mu);
}

double omega_at_gamma(double lambda, double gamma, double alpha, double mu) {
  require_lambda(lambda);
  if (gamma == 0.0) return 0.0;
  return gamma * (1.0 + (beta_bound_relaxed(gamma, alpha, mu) - 1.0) * lambda);
}

double poa_from_lambda(double lambda, double alpha, double mu) {
  const double w = omega(lambda, alpha, mu);
  // Roundoff at the roots of omega = 1 must not turn a pole into a huge value.
  if (w >= 1.0 - 1e-12) throw Error(ErrorCode::InfeasibleLambda, "omega(lambda) >= 1");
  return lambda / (1.0 - w);
}

std::optional<LambdaInterval> feasible_lambda_interval(double alpha, double mu) {
  require_alpha(alpha);
  const AlphaThresholds a = alpha_thresholds(mu);
  if (alpha <= a.alpha0.value) return std::nullopt;
  const LambdaThresholds l = lambda_thresholds(alpha, mu);
  if (alpha <= a.alpha_tilde.value) return LambdaInterval{l.omega1_root, 1.0};
  return LambdaInterval{l.omega2_root, 1.0};
}

Region classify_region(double alpha, double mu) {
  require_alpha(alpha);
  const AlphaThresholds t = alpha_thresholds(mu);
  if (alpha <= t.alpha0.value) return Region::A0;
  if (alpha < t.alpha1.value) return Region::A1;
  if (alpha < t.alpha2.value) return Region::LambdaStar;
  return Region::LambdaPlus;
}

double poa_at_one(double alpha, double mu) {
  const double ae = alpha * (1.0 - mu);
  const double num = ae * ae - ae - 2.0 * mu - 2.0 * std::sqrt(mu * mu + ae * mu);
  const double den = (1.0 - ae) * (1.0 - ae) - 4.0 * mu;
  return num / den;
}

double poa_at_lambda_star(double alpha, double mu) { return (1.0 - alpha * (1.0 - mu)) / mu; }

double poa_at_lambda_plus(double alpha, double mu) {
  // Numerator and denominator both carry a factor alpha; it is divided out
  // so the alpha -> 0 limit stays well conditioned.
  const double eps = 1.0 - mu;
  const double s = std::sqrt(1.0 - alpha);
  const double num = 2.0 * mu * (1.0 + s) - alpha * eps * mu;
  const double den = alpha * eps * eps + (5.0 * mu - 1.0) - 2.0 * mu / (1.0 + s);
  return num / den;
}

BoundResult poa_bound(double alpha, double mu) {
  require_alpha(alpha);
  require_mu(mu);
  BoundResult r;
  r.alpha = alpha;
  r.mu = mu;
  r.thresholds = alpha_thresholds(mu);
  r.lambdas = lambda_thresholds(alpha, mu);
  r.region = classify_region(alpha, mu);
  switch (r.region) {
    case Region::A0:
      r.expression = BoundExpression::Infinite;
      r.bound = kInf;
      break;
    case Region::A1:
      r.expression = BoundExpression::AtOne;
      r.bound = poa_at_one(alpha, mu);
      break;
    case Region::LambdaStar:
      r.expression = BoundExpression::AtLambdaStar;
      r.bound = poa_at_lambda_star(alpha, mu);
      break;
    case Region::LambdaPlus:
      r.expression = BoundExpression::AtLambdaPlus;
      r.bound = poa_at_lambda_plus(alpha, mu);
      break;
  }
  return r;
}

double poa_bound_selfish(double mu) {
  require_mu(mu);
  if (mu <= 0.25) throw Error(ErrorCode::DomainError, "selfish bound needs mu > 1/4");
  return 4.0 * mu / (4.0 * mu - 1.0);
}

double poa_bound_single_class(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in [0, 1]");
  const double r = 1.0 + std::sqrt(1.0 - alpha);
  return r * r / (2.0 * r - 1.0);
}

}  // namespace mixroute
