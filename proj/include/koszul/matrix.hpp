#pragma once

#include <map>
#include <utility>
#include <vector>

#include "koszul/error.hpp"
#include "koszul/rational.hpp"

namespace koszul {

// Sparse vector over Q, indexed from 0. Absent entries are zero; stored entries are nonzero.
using SparseVec = std::map<int, Rat>;

void vec_axpy(SparseVec& y, const Rat& a, const SparseVec& x); // y += a*x
Rat vec_dot(const SparseVec& a, const SparseVec& b);
SparseVec vec_scale(const SparseVec& x, const Rat& a);

// Row-major sparse matrix over Q.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const SparseVec& row(int r) const { return data_[r]; }
    SparseVec& row(int r) { return data_[r]; }

    Rat get(int r, int c) const;
    void set(int r, int c, const Rat& v); // erases on zero
    void add(int r, int c, const Rat& v);

    int nnz() const;
    bool zero() const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix scaled(const Rat& a) const;
    bool operator==(const Matrix& other) const;

    SparseVec apply(const SparseVec& x) const;          // y = M x
    SparseVec apply_transposed(const SparseVec& x) const; // y = M^T x

    // Stacks rows of `below` under this matrix (same column count).
    Matrix vstack(const Matrix& below) const;

  private:
    int rows_, cols_;
    std::vector<SparseVec> data_;
};

struct RrefResult {
    Matrix mat;              // reduced row echelon form, zero rows dropped, rows sorted by pivot
    std::vector<int> pivots; // pivot column of each row
    int rank = 0;
};

// Exact Gauss-Jordan elimination over Q. Pivots are chosen by a minimal-fill
// (Markowitz) heuristic with ties broken by lowest column index; the reduced
// echelon form itself is unique, so results are deterministic.
RrefResult rref(const Matrix& m);

struct RankKernelImage {
    int rank = 0;
    Matrix kernel; // RREF basis rows of the right kernel, in Q^cols
    Matrix image;  // RREF basis rows of the column space, in Q^rows
};

RankKernelImage rank_kernel_image(const Matrix& m);
int rank_of(const Matrix& m);

} // namespace koszul
