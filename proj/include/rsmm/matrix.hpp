#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsmm/field.hpp"

namespace rsmm {

// Dense row-major matrix over F_q. The field travels with the matrix so that
// mixing moduli is caught at the operation boundary.
class FieldMatrix {
 public:
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols);
  // Entries are reduced mod q on construction.
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols,
              std::vector<Residue> entries);

  static FieldMatrix identity(PrimeField field, std::size_t n);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  Residue operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  // Caller must store reduced residues.
  Residue& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  std::span<const Residue> entries() const noexcept { return entries_; }
  std::span<const Residue> row(std::size_t r) const {
    return std::span<const Residue>(entries_).subspan(r * cols_, cols_);
  }

  bool is_zero() const noexcept;
  FieldMatrix transpose() const;

  bool operator==(const FieldMatrix& other) const noexcept = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> entries_;
};

FieldMatrix mat_add(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix mat_scale(const FieldMatrix& x, Residue c);
// x += c * y, in place.
void mat_axpy(FieldMatrix& x, Residue c, const FieldMatrix& y);
FieldMatrix mat_mul(const FieldMatrix& x, const FieldMatrix& y);

// Rank by Gaussian elimination with first-nonzero pivoting.
std::size_t mat_rank(const FieldMatrix& x);

// Solves m * X = y for square invertible m. Throws SingularMatrix otherwise.
FieldMatrix mat_solve(const FieldMatrix& m, const FieldMatrix& y);
FieldMatrix mat_inverse(const FieldMatrix& m);

FieldMatrix vstack(std::span<const FieldMatrix> blocks);
FieldMatrix hstack(std::span<const FieldMatrix> blocks);
// Rows [first, first + count).
FieldMatrix row_block(const FieldMatrix& x, std::size_t first, std::size_t count);

}  // namespace rsmm
