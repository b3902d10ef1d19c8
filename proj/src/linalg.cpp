#include "dghom/linalg.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dghom {

Matrix Matrix::zero(int r, int c, const Field& f) {
    Matrix m;
    m.rows = r;
    m.cols = c;
    m.field = f;
    m.a.assign(r, Vec(c, Scalar::zero(f)));
    return m;
}

Matrix Matrix::transposed() const {
    Matrix m = zero(cols, rows, field);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.a[j][i] = a[i][j];
    return m;
}

Vec mat_vec(const Matrix& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.cols) throw std::logic_error("mat_vec size mismatch");
    Vec r(m.rows, Scalar::zero(m.field));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!m.a[i][j].is_zero() && !x[j].is_zero()) r[i] += m.a[i][j] * x[j];
    return r;
}

Vec vec_mat(const Vec& y, const Matrix& m) {
    if (static_cast<int>(y.size()) != m.rows) throw std::logic_error("vec_mat size mismatch");
    Vec r(m.cols, Scalar::zero(m.field));
    for (int i = 0; i < m.rows; ++i)
        if (!y[i].is_zero())
            for (int j = 0; j < m.cols; ++j)
                if (!m.a[i][j].is_zero()) r[j] += y[i] * m.a[i][j];
    return r;
}

namespace {
Backend g_backend =
#ifdef _OPENMP
    Backend::Parallel;
#else
    Backend::Serial;
#endif

// Subtract factor * pivot row from every row in `targets`. Rows are disjoint,
// so the parallel version distributes rows without changing any result.
void eliminate_rows(std::vector<Vec>& m, std::vector<Vec>& t, int pivot_row, int pivot_col,
                    const std::vector<int>& targets, Backend backend) {
    const int n = static_cast<int>(targets.size());
    const int cols = static_cast<int>(m[pivot_row].size());
    const int tcols = static_cast<int>(t[pivot_row].size());

    auto update = [&](int k) {
        int row = targets[k];
        Scalar factor = m[row][pivot_col];
        m[row][pivot_col] = Scalar::zero(factor.field());
        for (int j = pivot_col + 1; j < cols; ++j)
            if (!m[pivot_row][j].is_zero()) m[row][j] -= factor * m[pivot_row][j];
        for (int j = 0; j < tcols; ++j)
            if (!t[pivot_row][j].is_zero()) t[row][j] -= factor * t[pivot_row][j];
    };

    if (backend == Backend::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 16)
#endif
        for (int k = 0; k < n; ++k) update(k);
    } else {
        for (int k = 0; k < n; ++k) update(k);
    }
}
} // namespace

Backend default_backend() { return g_backend; }
void set_default_backend(Backend b) { g_backend = b; }

Rref rref(const Matrix& m, Backend backend) {
    Rref out;
    out.r = m;
    out.t = Matrix::zero(m.rows, m.rows, m.field);
    for (int i = 0; i < m.rows; ++i) out.t.a[i][i] = Scalar::one(m.field);

    int next = 0; // next pivot row slot
    for (int col = 0; col < m.cols && next < m.rows; ++col) {
        int pr = -1;
        for (int i = next; i < m.rows; ++i)
            if (!out.r.a[i][col].is_zero()) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(out.r.a[next], out.r.a[pr]);
        std::swap(out.t.a[next], out.t.a[pr]);

        Scalar inv = out.r.a[next][col].inv();
        if (!inv.is_one()) {
            for (int j = col; j < m.cols; ++j)
                if (!out.r.a[next][j].is_zero()) out.r.a[next][j] *= inv;
            for (int j = 0; j < m.rows; ++j)
                if (!out.t.a[next][j].is_zero()) out.t.a[next][j] *= inv;
        }

        std::vector<int> targets;
        targets.reserve(m.rows - 1);
        for (int i = 0; i < m.rows; ++i)
            if (i != next && !out.r.a[i][col].is_zero()) targets.push_back(i);
        eliminate_rows(out.r.a, out.t.a, next, col, targets, backend);

        out.pivot_col.push_back(col);
        ++next;
    }
    out.rank = next;
    return out;
}

SolveResult solve(const Matrix& a, const Vec& b, Backend backend) {
    if (static_cast<int>(b.size()) != a.rows) throw std::logic_error("solve: rhs size mismatch");
    Rref f = rref(a, backend);
    Vec c = mat_vec(f.t, b);

    SolveResult res;
    for (int i = f.rank; i < a.rows; ++i)
        if (!c[i].is_zero()) {
            res.ok = false;
            res.certificate = f.t.a[i];
            return res;
        }
    res.ok = true;
    res.x.assign(a.cols, Scalar::zero(a.field));
    for (int r = 0; r < f.rank; ++r) res.x[f.pivot_col[r]] = c[r];
    return res;
}

KernelBasis kernel_basis_with_columns(const Matrix& a, Backend backend) {
    Rref f = rref(a, backend);
    std::vector<bool> is_pivot(a.cols, false);
    for (int c : f.pivot_col) is_pivot[c] = true;

    KernelBasis out;
    for (int free = 0; free < a.cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v(a.cols, Scalar::zero(a.field));
        v[free] = Scalar::one(a.field);
        for (int r = 0; r < f.rank; ++r) v[f.pivot_col[r]] = -f.r.a[r][free];
        out.vectors.push_back(std::move(v));
        out.free_cols.push_back(free);
    }
    return out;
}

std::vector<Vec> kernel_basis(const Matrix& a, Backend backend) {
    return kernel_basis_with_columns(a, backend).vectors;
}

int rank_of(const Matrix& a, Backend backend) { return rref(a, backend).rank; }

std::optional<Matrix> factor_through(const Matrix& s, const Matrix& v, Backend backend) {
    // F s = v  <=>  s^T F^T = v^T, column by column
    if (s.cols != v.cols) throw std::logic_error("factor_through: shape mismatch");
    Matrix st = s.transposed();
    Rref f = rref(st, backend);
    Matrix ft = Matrix::zero(st.cols, v.rows, v.field);
    for (int j = 0; j < v.rows; ++j) {
        Vec rhs(st.rows, Scalar::zero(v.field));
        for (int i = 0; i < st.rows; ++i) rhs[i] = v.a[j][i];
        Vec c = mat_vec(f.t, rhs);
        for (int i = f.rank; i < st.rows; ++i)
            if (!c[i].is_zero()) return std::nullopt;
        for (int r = 0; r < f.rank; ++r) ft.a[f.pivot_col[r]][j] = c[r];
    }
    return ft.transposed();
}

} // namespace dghom
