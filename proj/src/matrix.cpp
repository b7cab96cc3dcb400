#include "rsmm/matrix.hpp"

#include <string>
#include <utility>

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

void require_same_field(const FieldMatrix& x, const FieldMatrix& y) {
  if (!(x.field() == y.field())) {
    throw ShapeError("operands live in different fields (q=" +
                     std::to_string(x.field().modulus()) + " vs q=" +
                     std::to_string(y.field().modulus()) + ")");
  }
}

std::string shape(const FieldMatrix& x) {
  return std::to_string(x.rows()) + "x" + std::to_string(x.cols());
}

// Reduces `work` to row echelon form in place and returns the rank. When
// `rhs` is non-null the same row operations are applied to it, and the
// pivot rows are normalized and cleared upward (full Gauss-Jordan).
std::size_t eliminate(FieldMatrix& work, FieldMatrix* rhs) {
  const PrimeField& f = work.field();
  const std::size_t rows = work.rows();
  const std::size_t cols = work.cols();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && work(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(work(pivot, j), work(rank, j));
      if (rhs) {
        for (std::size_t j = 0; j < rhs->cols(); ++j) {
          std::swap((*rhs)(pivot, j), (*rhs)(rank, j));
        }
      }
    }
    const Residue inv = f.inv(work(rank, c));
    if (rhs) {
      for (std::size_t j = 0; j < cols; ++j) work(rank, j) = f.mul(work(rank, j), inv);
      for (std::size_t j = 0; j < rhs->cols(); ++j) {
        (*rhs)(rank, j) = f.mul((*rhs)(rank, j), inv);
      }
    }
    const std::size_t start = rhs ? 0 : rank + 1;
    for (std::size_t r = start; r < rows; ++r) {
      if (r == rank || work(r, c) == 0) continue;
      const Residue factor = rhs ? work(r, c) : f.mul(work(r, c), inv);
      for (std::size_t j = c; j < cols; ++j) {
        work(r, j) = f.sub(work(r, j), f.mul(factor, work(rank, j)));
      }
      if (rhs) {
        for (std::size_t j = 0; j < rhs->cols(); ++j) {
          (*rhs)(r, j) = f.sub((*rhs)(r, j), f.mul(factor, (*rhs)(rank, j)));
        }
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols,
                         std::vector<Residue> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw ShapeError("expected " + std::to_string(rows * cols) +
                     " entries, got " + std::to_string(entries_.size()));
  }
  for (auto& e : entries_) e = field_.reduce(e);
}

FieldMatrix FieldMatrix::identity(PrimeField field, std::size_t n) {
  FieldMatrix out(field, n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

bool FieldMatrix::is_zero() const noexcept {
  for (auto e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

FieldMatrix mat_add(const FieldMatrix& x, const FieldMatrix& y) {
  FieldMatrix out = x;
  mat_axpy(out, 1, y);
  return out;
}

FieldMatrix mat_scale(const FieldMatrix& x, Residue c) {
  const PrimeField& f = x.field();
  c = f.reduce(c);
  FieldMatrix out(f, x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(r, j) = f.mul(c, x(r, j));
  }
  return out;
}

void mat_axpy(FieldMatrix& x, Residue c, const FieldMatrix& y) {
  require_same_field(x, y);
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("cannot add " + shape(y) + " into " + shape(x));
  }
  const PrimeField& f = x.field();
  c = f.reduce(c);
  if (c == 0) return;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      x(r, j) = f.add(x(r, j), f.mul(c, y(r, j)));
    }
  }
}

FieldMatrix mat_mul(const FieldMatrix& x, const FieldMatrix& y) {
  require_same_field(x, y);
  if (x.cols() != y.rows()) {
    throw ShapeError("cannot multiply " + shape(x) + " by " + shape(y));
  }
  const PrimeField& f = x.field();
  FieldMatrix out(f, x.rows(), y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t t = 0; t < x.cols(); ++t) {
      const Residue a = x(r, t);
      if (a == 0) continue;
      for (std::size_t c = 0; c < y.cols(); ++c) {
        out(r, c) = f.add(out(r, c), f.mul(a, y(t, c)));
      }
    }
  }
  return out;
}

std::size_t mat_rank(const FieldMatrix& x) {
  FieldMatrix work = x;
  return eliminate(work, nullptr);
}

FieldMatrix mat_solve(const FieldMatrix& m, const FieldMatrix& y) {
  require_same_field(m, y);
  if (m.rows() != m.cols()) {
    throw ShapeError("mat_solve needs a square system, got " + shape(m));
  }
  if (m.rows() != y.rows()) {
    throw ShapeError("right-hand side " + shape(y) + " does not match " + shape(m));
  }
  FieldMatrix work = m;
  FieldMatrix rhs = y;
  if (eliminate(work, &rhs) != m.rows()) {
    throw SingularMatrix("matrix of shape " + shape(m) + " is singular over F_" +
                         std::to_string(m.field().modulus()));
  }
  return rhs;
}

FieldMatrix mat_inverse(const FieldMatrix& m) {
  return mat_solve(m, FieldMatrix::identity(m.field(), m.rows()));
}

FieldMatrix vstack(std::span<const FieldMatrix> blocks) {
  if (blocks.empty()) throw ShapeError("vstack of nothing");
  const std::size_t cols = blocks.front().cols();
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    require_same_field(blocks.front(), b);
    if (b.cols() != cols) throw ShapeError("vstack column mismatch");
    rows += b.rows();
  }
  std::vector<Residue> entries;
  entries.reserve(rows * cols);
  for (const auto& b : blocks) entries.insert(entries.end(), b.entries().begin(), b.entries().end());
  return FieldMatrix(blocks.front().field(), rows, cols, std::move(entries));
}

FieldMatrix hstack(std::span<const FieldMatrix> blocks) {
  if (blocks.empty()) throw ShapeError("hstack of nothing");
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    require_same_field(blocks.front(), b);
    if (b.rows() != rows) throw ShapeError("hstack row mismatch");
    cols += b.cols();
  }
  FieldMatrix out(blocks.front().field(), rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, offset + c) = b(r, c);
    }
    offset += b.cols();
  }
  return out;
}

FieldMatrix row_block(const FieldMatrix& x, std::size_t first, std::size_t count) {
  if (first + count > x.rows()) {
    throw ShapeError("row range [" + std::to_string(first) + ", " +
                     std::to_string(first + count) + ") outside " + shape(x));
  }
  auto all = x.entries();
  std::vector<Residue> entries(all.begin() + first * x.cols(),
                               all.begin() + (first + count) * x.cols());
  return FieldMatrix(x.field(), count, x.cols(), std::move(entries));
}

}  // namespace rsmm
