#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rsmm/encoder.hpp"
#include "rsmm/matrix.hpp"
#include "rsmm/plan.hpp"

namespace rsmm::testing {

inline FieldMatrix make(std::uint64_t q, std::size_t rows, std::size_t cols,
                        std::vector<Residue> entries) {
  return FieldMatrix(PrimeField(q), rows, cols, std::move(entries));
}

inline FieldMatrix random_matrix(std::mt19937_64& gen, const PrimeField& f, std::size_t rows,
                                 std::size_t cols) {
  std::uniform_int_distribution<std::uint64_t> dist(0, f.modulus() - 1);
  std::vector<Residue> e(rows * cols);
  for (auto& x : e) x = dist(gen);
  return FieldMatrix(f, rows, cols, std::move(e));
}

inline MatrixSeq random_batch(std::mt19937_64& gen, const PrimeField& f, Role role,
                              std::size_t count, std::size_t rows, std::size_t cols) {
  MatrixSeq seq{role, {}};
  for (std::size_t i = 0; i < count; ++i) seq.items.push_back(random_matrix(gen, f, rows, cols));
  return seq;
}

inline Params params(std::size_t N, std::size_t k, std::size_t l, Rational alpha, std::uint64_t q,
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

}  // namespace rsmm::testing
