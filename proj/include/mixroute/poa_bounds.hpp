#pragma once

// Closed-form price-of-anarchy bounds for the mixed-autonomy SCALE strategy
// with affine latencies, as functions of the network autonomy fraction alpha
// and the minimum degree of asymmetry mu.

#include <optional>
#include <string_view>

namespace mixroute {

enum class Region { A0, A1, LambdaStar, LambdaPlus };

enum class BoundExpression { Infinite, AtOne, AtLambdaStar, AtLambdaPlus };

std::string_view to_string(Region region);
std::string_view to_string(BoundExpression expr);

/// |1 - mu| below this switches to the mu = 1 analytic limits.
inline constexpr double kUnitAsymmetryEps = 1e-9;

struct Threshold {
  double value = 0.0;    // raw formula value, may be -inf or outside [0, 1]
  double clamped = 0.0;  // value clamped to [0, 1]
  bool in_range = false;
};

struct AlphaThresholds {
  Threshold alpha0;       // (1 - 2 sqrt mu) / (1 - mu)
  Threshold alpha1;       // 1 + (mu - sqrt(mu^2 + 4 mu)) / (2 (1 - mu)), where lambda* = 1
  Threshold alpha2;       // (1 - 2 mu) / (1 - mu)^2, where lambda* = lambda+
  Threshold alpha_tilde;  // (1 - 2 sqrt mu) / (1 - sqrt mu)^2
  // Competing closed form for alpha1, equal to alpha_tilde.
  // Reported for comparison only; classification uses alpha1.
  Threshold alpha1_alternative;
};

AlphaThresholds alpha_thresholds(double mu);

struct LambdaThresholds {
  double omega1_root = 0.0;  // omega1(lambda) = 1: (1 - alpha(1-mu))^2 / (4 mu)
  double omega2_root = 0.0;  // omega2(lambda) = 1: 1 - alpha
  double plus = 0.0;         // upper crossing of omega1 and omega2
  double minus = 0.0;        // lower crossing of omega1 and omega2
  double link_critical = 0.0;  // where the interior maximizer reaches gamma+
  double star = 0.0;         // stationary point of lambda / (1 - omega1(lambda))
};

LambdaThresholds lambda_thresholds(double alpha, double mu);

/// Upper bound on the per-link latency ratio beta given the flow ratio gamma
/// and the link's optimal degree of autonomy alpha_star.
double beta_bound(double gamma, double alpha, double mu, double alpha_star);

/// beta_bound maximized over alpha_star in [0, 1].
double beta_bound_relaxed(double gamma, double alpha, double mu);

/// sqrt(lambda mu / (alpha (1 - mu) + lambda mu)).
double delta(double lambda, double alpha, double mu);

/// Interior supremum over gamma of gamma (1 + (beta_relaxed(gamma) - 1) lambda).
double omega1(double lambda, double alpha, double mu);
/// Supremum over gamma in (0, gamma+]: omega1 once its maximizer lies below
/// gamma+ (lambda > link_critical), gamma+ (1 - lambda) before.
double omega1_sup(double lambda, double alpha, double mu);
/// (1 - lambda) / alpha, the supremum at gamma = 1 / alpha.
double omega2(double lambda, double alpha);
/// omega2 up to lambda+, omega1 beyond.
double omega(double lambda, double alpha, double mu);

/// gamma (1 + (beta_relaxed(gamma) - 1) lambda): the quantity whose
/// supremum over gamma in [0, 1/alpha] omega captures.
double omega_at_gamma(double lambda, double gamma, double alpha, double mu);

/// lambda / (1 - omega(lambda)). Throws InfeasibleLambda when omega >= 1.
double poa_from_lambda(double lambda, double alpha, double mu);

struct LambdaInterval {
  double lower = 0.0;  // open
  double upper = 1.0;  // closed
};

/// The feasible set {lambda in [0,1] : omega(lambda) < 1}, or nullopt when empty.
std::optional<LambdaInterval> feasible_lambda_interval(double alpha, double mu);

Region classify_region(double alpha, double mu);

double poa_at_one(double alpha, double mu);
double poa_at_lambda_star(double alpha, double mu);
double poa_at_lambda_plus(double alpha, double mu);

struct BoundResult {
  double alpha = 0.0;
  double mu = 1.0;
  Region region = Region::LambdaPlus;
  BoundExpression expression = BoundExpression::AtLambdaPlus;
  AlphaThresholds thresholds;
  LambdaThresholds lambdas;
  double bound = 0.0;  // +infinity in A0

  bool finite() const { return region != Region::A0; }
};

/// Piecewise upper bound on the price of anarchy of SCALE.
BoundResult poa_bound(double alpha, double mu);

/// 4 mu / (4 mu - 1): both classes selfish, mu > 1/4.
double poa_bound_selfish(double mu);

/// (1 + sqrt(1 - alpha))^2 / (2 (1 + sqrt(1 - alpha)) - 1): single-class SCALE.
double poa_bound_single_class(double alpha);

}  // namespace mixroute
