#pragma once

#include <optional>

#include "rsmm/plan.hpp"
#include "rsmm/rational.hpp"

namespace rsmm {

struct RateBounds {
  Rational upper{0};
  Rational lower{0};
};

// Download-rate capacity bounds. Needs k, l, alpha, D, E only.
RateBounds capacity_bounds(const Params& params);
// Local-randomness rate bounds. Throws RangeError for l = 0.
RateBounds randomness_bounds(const Params& params);

struct SquareOptima {
  Rational capacity{0};
  Rational randomness{0};
};

// Closed-form optima for square matrices. Throws RangeError unless D = E.
SquareOptima square_optima(const Params& params);

struct AchievedRate {
  Rational finite{0};      // counted symbols at this m
  Rational asymptotic{0};  // limit as m grows with |P|/m -> alpha*k/l
};

AchievedRate achieved_rate(const BlockPlan& plan);

struct AchievedRandomness {
  Rational finite{0};
  Rational asymptotic{0};
};

AchievedRandomness achieved_randomness(const BlockPlan& plan);

struct RateReport {
  Rational achieved_rate_finite{0};
  Rational achieved_rate_asymptotic{0};
  Rational capacity_upper{0};
  Rational capacity_lower{0};
  Rational randomness_achieved{0};
  Rational randomness_achieved_asymptotic{0};
  std::optional<Rational> randomness_upper;  // absent when l = 0
  std::optional<Rational> randomness_lower;
  std::optional<Rational> square_capacity;   // present when D = E
  std::optional<Rational> square_randomness;
  // H(AB|B) is taken as m * min(CD, CE), exact only as q grows.
  bool product_entropy_large_q = true;
};

RateReport rate_report(const BlockPlan& plan);

}  // namespace rsmm
