// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "rsmm/audit.hpp"
#include "rsmm/bounds.hpp"
#include "rsmm/decoder.hpp"
#include "rsmm/experiment.hpp"
#include "rsmm/servers.hpp"

using namespace rsmm;

namespace {

Params make_params(std::size_t N, std::size_t k, std::size_t l, Rational alpha, std::uint64_t q,
                   std::size_t C, std::size_t D, std::size_t E, std::size_t m) {
  Params p;
  p.N = N;
  p.k = k;
  p.l = l;
  p.alpha = alpha;
  p.q = q;
  p.C = C;
  p.D = D;
  p.E = E;
  p.m = m;
  return p;
}

MatrixSeq random_seq(std::mt19937_64& gen, const PrimeField& f, Role role, std::size_t count,
                     std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::uint64_t> dist(0, f.modulus() - 1);
  MatrixSeq seq{role, {}};
  for (std::size_t s = 0; s < count; ++s) {
    FieldMatrix x(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) x(i, j) = dist(gen);
    }
    seq.items.push_back(std::move(x));
  }
  return seq;
}

MatrixSeq direct(const MatrixSeq& a, const MatrixSeq& b) {
  MatrixSeq out{Role::kAB, {}};
  for (std::size_t s = 0; s < a.size(); ++s) out.items.push_back(mat_mul(a.items[s], b.items[s]));
  return out;
}

std::vector<ServerResponse> respond(const SharePackage& shares, const MatrixSeq& b,
                                    const BlockPlan& plan) {
  const auto slots = align_to_slots(b, plan, plan.params.D, plan.params.E);
  std::vector<ServerResponse> out;
  for (const auto& s : shares.servers) out.push_back(process(s, slots));
  return out;
}

std::string text(const Rational& r) { return to_string(r); }

// Returns an empty string on success, else the first failure.
using Check = std::function<std::string()>;

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const Check& check) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    failure = check();
  } catch (const std::exception& e) {
    failure = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (failure.empty() && limit_seconds > 0 && elapsed >= limit_seconds) {
    failure = "took " + std::to_string(elapsed) + " s, limit " + std::to_string(limit_seconds) + " s";
  }
  if (!failure.empty()) ++failures;
  std::printf("%s %d %s (%.3f s)%s%s\n", failure.empty() ? "PASS" : "FAIL", id, name, elapsed,
              failure.empty() ? "" : ": ", failure.c_str());
}

std::string recoverability() {
  for (Rational alpha : {Rational(1, 4), Rational(1, 2)}) {
    const BlockPlan plan = build_plan(make_params(5, 4, 2, alpha, 97, 4, 3, 2, 8));
    for (std::uint64_t seed : {0, 1, 2}) {
      std::mt19937_64 gen(seed);
      const MatrixSeq a = random_seq(gen, plan.field, Role::kA, 8, 4, 3);
      const MatrixSeq b = random_seq(gen, plan.field, Role::kB, 8, 3, 2);
      const auto all = respond(encode(a, draw_randomness(plan, seed), plan), b, plan);
      const MatrixSeq expected = direct(a, b);
      for (const auto& subset : subsets_of_size(5, 4)) {
        std::vector<ServerResponse> chosen;
        for (auto id : subset) chosen.push_back(all[id - 1]);
        if (!(decode(chosen, plan) == expected)) {
          return "alpha=" + text(alpha) + " seed=" + std::to_string(seed) + " mismatch";
        }
      }
    }
  }
  return "";
}

std::string leakage_profile() {
  for (Rational alpha : {Rational(1, 4), Rational(1, 2)}) {
    const BlockPlan plan = build_plan(make_params(5, 4, 2, alpha, 97, 4, 1, 1, 8));
    const CoefficientSystem system = build_coefficients(plan);
    for (const auto& subset : all_subsets(5)) {
      const Rational measured = leakage_rank(system, subset).fraction;
      const Rational predicted = predicted_g(subset.size(), plan);
      if (measured != predicted) {
        return "alpha=" + text(alpha) + " |I|=" + std::to_string(subset.size()) + " measured " +
               text(measured) + " predicted " + text(predicted);
      }
      if (subset.size() <= 2 && measured > alpha) return "privacy violated";
    }
  }
  const BlockPlan case2 = build_plan(make_params(5, 4, 2, Rational(1, 4), 97, 4, 1, 1, 8));
  const Rational expected[] = {Rational(0), Rational(1, 8), Rational(1, 4), Rational(5, 8),
                               Rational(1), Rational(1)};
  for (std::size_t t = 0; t <= 5; ++t) {
    if (predicted_g(t, case2) != expected[t]) return "g(" + std::to_string(t) + ") off";
  }
  return "";
}

std::string oracle_equivalence() {
  const BlockPlan plan = build_plan(make_params(2, 2, 1, Rational(1, 2), 3, 2, 1, 1, 2));
  const CoefficientSystem system = build_coefficients(plan);
  for (const auto& subset : all_subsets(2)) {
    const Rational exact = leakage_rank(system, subset).fraction;
    const double brute = leakage_exhaustive(plan, subset);
    if (std::abs(brute - boost::rational_cast<double>(exact)) > 1e-6) return "deviation";
    if (subset.size() == 1 && exact != Rational(1, 2)) return "singleton " + text(exact);
  }
  return "";
}

std::string rates() {
  const auto case2 = achieved_rate(build_plan(make_params(5, 4, 2, Rational(1, 4), 97, 4, 1, 1, 8)));
  if (case2.finite != Rational(2, 3)) return "case 2 rate " + text(case2.finite);
  const auto case1 = achieved_rate(build_plan(make_params(5, 4, 2, Rational(1, 2), 97, 4, 1, 1, 4)));
  if (case1.finite != Rational(1)) return "case 1 rate " + text(case1.finite);
  return "";
}

std::string randomness() {
  const auto case2 =
      achieved_randomness(build_plan(make_params(5, 4, 2, Rational(1, 4), 97, 4, 1, 1, 8)));
  if (case2.finite != Rational(1, 2)) return "case 2 randomness " + text(case2.finite);
  const auto case1 =
      achieved_randomness(build_plan(make_params(5, 4, 2, Rational(1, 2), 97, 4, 1, 1, 4)));
  if (case1.finite != Rational(0)) return "case 1 randomness " + text(case1.finite);
  return "";
}

std::string bound_grid() {
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 2}, {1, 1}, {2, 1}};
  for (std::size_t N = 2; N <= 8; ++N) {
    for (std::size_t k = 2; k <= N; ++k) {
      for (std::size_t l = 1; l < k; ++l) {
        for (std::int64_t a = 0; a < 8; ++a) {
          for (auto [D, E] : shapes) {
            const Params p = make_params(N, k, l, Rational(a, 8), 1009, k * (k - l), D, E, 1);
            const std::string at = "N=" + std::to_string(N) + " k=" + std::to_string(k) +
                                   " l=" + std::to_string(l) + " a=" + std::to_string(a) + "/8";
            const RateBounds cap = capacity_bounds(p);
            const RateBounds rnd = randomness_bounds(p);
            if (cap.lower > cap.upper || rnd.lower > rnd.upper) return "lower > upper at " + at;
            if (achieved_rate(build_plan(p)).asymptotic != cap.lower) return "rate off at " + at;
            if (D == E) {
              const SquareOptima sq = square_optima(p);
              if (cap.upper != sq.capacity || cap.lower != sq.capacity ||
                  rnd.upper != sq.randomness || rnd.lower != sq.randomness) {
                return "no collapse at " + at;
              }
            }
          }
        }
      }
    }
  }
  return "";
}

std::string masked_levels() {
  for (Rational alpha : {Rational(0), Rational(1, 8), Rational(1, 4)}) {
    const BlockPlan plan = build_plan(make_params(5, 4, 2, alpha, 97, 4, 1, 1, 8));
    const CoefficientSystem system = build_coefficients(plan);
    for (const auto& subset : all_subsets(5)) {
      const LeakageMeasure m = leakage_rank(system, subset);
      const std::size_t t = subset.size();
      if (t <= 2 && (m.masked_gap != 0 || m.masked_fraction != Rational(0))) {
        return "nonzero masked leakage at |I|=" + std::to_string(t);
      }
      if (t == 3 && m.masked_fraction != Rational(1, 2)) {
        return "masked leakage " + text(m.masked_fraction) + " at |I|=3";
      }
    }
  }
  return "";
}

std::string g_invertible() {
  for (Rational alpha : {Rational(0), Rational(1, 8), Rational(1, 4)}) {
    for (std::size_t m : {5, 8, 16}) {
      const BlockPlan plan = build_plan(make_params(5, 4, 2, alpha, 97, 4, 3, 2, m));
      for (std::size_t b = 1; b <= plan.masked()->blocks; ++b) {
        for (const auto& subset : subsets_of_size(5, 2)) {
          if (!check_G_invertible(plan, subset, b)) return "singular G";
        }
      }
    }
  }
  return "";
}

std::string straggler_invariance() {
  const BlockPlan plan = build_plan(make_params(5, 4, 2, Rational(1, 4), 97, 4, 3, 2, 8));
  std::mt19937_64 gen(9);
  const MatrixSeq a = random_seq(gen, plan.field, Role::kA, 8, 4, 3);
  const MatrixSeq b = random_seq(gen, plan.field, Role::kB, 8, 3, 2);
  const SharePackage shares = encode(a, draw_randomness(plan, 9), plan);
  const MatrixSeq expected = direct(a, b);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DelayModel model = seed % 2 ? DelayModel::uniform(0.0, 5.0, seed)
                                      : DelayModel::exponential(1.0, seed);
    const RoundResult round = simulate_round(shares, b, model, 4);
    if (!(decode(round.responses, plan) == expected)) return "seed " + std::to_string(seed);
  }

  ExperimentConfig config;
  config.params = plan.params;
  config.seed = 5;
  config.audit.all_subsets = false;
  config.audit.sampled = 8;
  const std::string first = emit_report(run_experiment(config), ReportFormat::kJson);
  const std::string second = emit_report(run_experiment(config), ReportFormat::kJson);
  if (first != second) return "report bytes differ";
  return "";
}

}  // namespace

int main() {
  criterion(1, "recoverability from every k-subset", 1.0, recoverability);
  criterion(2, "leakage profile exactness and privacy", 1.0, leakage_profile);
  criterion(3, "rank and exhaustive oracles agree", 5.0, oracle_equivalence);
  criterion(4, "achieved download rate", 0, rates);
  criterion(5, "achieved randomness rate", 0, randomness);
  criterion(6, "bound sanity grid", 10.0, bound_grid);
  criterion(7, "masked part leakage levels", 0, masked_levels);
  criterion(8, "G invertible for every l-subset and block", 0, g_invertible);
  criterion(9, "straggler invariance and reproducible reports", 5.0, straggler_invariance);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
