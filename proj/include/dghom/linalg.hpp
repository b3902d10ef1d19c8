#pragma once

#include <optional>
#include <vector>

#include "dghom/scalar.hpp"

namespace dghom {

using Vec = std::vector<Scalar>;

struct Matrix {
    int rows = 0;
    int cols = 0;
    Field field;
    std::vector<Vec> a; // row major

    static Matrix zero(int r, int c, const Field& f);
    Scalar& at(int i, int j) { return a[i][j]; }
    const Scalar& at(int i, int j) const { return a[i][j]; }
    Matrix transposed() const;
};

Vec mat_vec(const Matrix& m, const Vec& x);
Vec vec_mat(const Vec& y, const Matrix& m); // y * m

// Elimination backend. Serial is the reference implementation; Parallel
// distributes the row updates of each pivot step with OpenMP. Pivoting is
// identical (first nonzero column, smallest row index) and the arithmetic is
// exact, so both produce bit-identical results.
enum class Backend { Serial, Parallel };

Backend default_backend();
void set_default_backend(Backend b);

struct Rref {
    Matrix r;                   // reduced row echelon form
    Matrix t;                   // transform, t * input = r
    std::vector<int> pivot_col; // one entry per pivot row
    int rank = 0;
};

Rref rref(const Matrix& m, Backend b = default_backend());

// One solution of a x = b (free variables set to zero), or a certificate of
// inconsistency: a row vector y with y a = 0 and y b != 0.
struct SolveResult {
    bool ok = false;
    Vec x;
    Vec certificate;
};

SolveResult solve(const Matrix& a, const Vec& b, Backend backend = default_backend());

// Deterministic basis of {x : a x = 0}: one vector per free column, in column
// order, with unit entry at the free column.
std::vector<Vec> kernel_basis(const Matrix& a, Backend backend = default_backend());

// Same basis, plus the free column of each vector. A kernel vector carries a
// unit at its own free column and zeros at the others, so coordinates of a
// kernel member can be read straight off the free-column entries.
struct KernelBasis {
    std::vector<Vec> vectors;
    std::vector<int> free_cols;
};

KernelBasis kernel_basis_with_columns(const Matrix& a, Backend backend = default_backend());

int rank_of(const Matrix& a, Backend backend = default_backend());

// Least structure needed for "is V = F S solvable for F" questions (maps
// defined on a spanning set): returns F with F S = V, or nullopt.
std::optional<Matrix> factor_through(const Matrix& s, const Matrix& v,
                                     Backend backend = default_backend());

} // namespace dghom
