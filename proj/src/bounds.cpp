#include "rsmm/bounds.hpp"

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

struct Shape {
  Rational k, l, alpha, ratio;  // ratio = D/E
};

Shape shape_of(const Params& p) {
  return Shape{Rational(static_cast<std::int64_t>(p.k)), Rational(static_cast<std::int64_t>(p.l)),
               p.alpha,
               Rational(static_cast<std::int64_t>(p.D), static_cast<std::int64_t>(p.E))};
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

RateBounds capacity_bounds(const Params& params) {
  const Shape s = shape_of(params);
  const Rational widest = rmax(1, s.ratio);
  const Rational narrowest = rmin(1, s.ratio);
  RateBounds out;
  if (s.alpha < 1 / widest) {
    out.upper = rmin((s.k - s.l) / (s.k * (1 - s.alpha * widest)), 1);
  } else {
    out.upper = 1;
  }
  if (s.alpha * s.k < s.l) {
    out.lower = (s.k - s.l) / (s.k * (1 - s.alpha)) * narrowest;
  } else {
    out.lower = narrowest;
  }
  return out;
}

RateBounds randomness_bounds(const Params& params) {
  if (params.l == 0) throw RangeError("randomness bounds need l >= 1");
  const Shape s = shape_of(params);
  const Rational widest = rmax(1, s.ratio);
  RateBounds out;
  out.upper = s.alpha * s.k < s.l ? (s.l - s.alpha * s.k) / (s.k - s.l) * widest : Rational(0);
  out.lower = positive_part(s.l - s.alpha * s.k * widest) / (s.k - s.l);
  return out;
}

SquareOptima square_optima(const Params& params) {
  if (params.D != params.E) throw RangeError("square optima need D = E");
  const Shape s = shape_of(params);
  return SquareOptima{rmin((s.k - s.l) / (s.k * (1 - s.alpha)), 1),
                      positive_part(s.l - s.alpha * s.k) / (s.k - s.l)};
}

AchievedRate achieved_rate(const BlockPlan& plan) {
  const Params& p = plan.params;
  const auto m = static_cast<std::int64_t>(p.m);
  const auto k = static_cast<std::int64_t>(p.k);
  const auto C = static_cast<std::int64_t>(p.C);
  const auto D = static_cast<std::int64_t>(p.D);
  const auto E = static_cast<std::int64_t>(p.E);
  const std::int64_t product = m * std::min(C * D, C * E);

  // Each block yields one C x E worth of symbols per server.
  std::int64_t blocks = 0;
  for (const auto& part : plan.parts) blocks += static_cast<std::int64_t>(part.blocks);

  AchievedRate out;
  out.finite = Rational(product, k * blocks * C * E);

  // Per unit of m, a server sends share/k + (1 - share)/L blocks of C x E,
  // where share is the limiting fraction |P|/m (1 in case 1).
  const Rational share = plan.scheme == SchemeCase::kCase1
                             ? Rational(1)
                             : p.alpha * k / static_cast<std::int64_t>(p.l);
  const Rational per_server = share / k + (1 - share) / static_cast<std::int64_t>(plan.L);
  out.asymptotic = rmin(1, Rational(D, E)) / (k * per_server);
  return out;
}

AchievedRandomness achieved_randomness(const BlockPlan& plan) {
  AchievedRandomness out;
  if (plan.scheme == SchemeCase::kCase1) return out;
  const Params& p = plan.params;
  const auto m = static_cast<std::int64_t>(p.m);
  const auto l = static_cast<std::int64_t>(p.l);
  const auto L = static_cast<std::int64_t>(plan.L);
  const auto C = static_cast<std::int64_t>(p.C);
  const auto D = static_cast<std::int64_t>(p.D);
  const auto E = static_cast<std::int64_t>(p.E);
  const std::int64_t product = m * std::min(C * D, C * E);
  const std::int64_t masked_blocks = ceil_div(m - static_cast<std::int64_t>(plan.p), L);
  out.finite = Rational(masked_blocks * l * C * D, product);

  const Rational share = p.alpha * static_cast<std::int64_t>(p.k) / l;
  out.asymptotic = (1 - share) / L * l * C * D / std::min(C * D, C * E);
  return out;
}

RateReport rate_report(const BlockPlan& plan) {
  const Params& p = plan.params;
  RateReport r;
  const auto rate = achieved_rate(plan);
  r.achieved_rate_finite = rate.finite;
  r.achieved_rate_asymptotic = rate.asymptotic;
  const auto cap = capacity_bounds(p);
  r.capacity_upper = cap.upper;
  r.capacity_lower = cap.lower;
  const auto rnd = achieved_randomness(plan);
  r.randomness_achieved = rnd.finite;
  r.randomness_achieved_asymptotic = rnd.asymptotic;
  if (p.l >= 1) {
    const auto rb = randomness_bounds(p);
    r.randomness_upper = rb.upper;
    r.randomness_lower = rb.lower;
  }
  if (p.D == p.E) {
    const auto sq = square_optima(p);
    r.square_capacity = sq.capacity;
    r.square_randomness = sq.randomness;
  }
  return r;
}

}  // namespace rsmm
