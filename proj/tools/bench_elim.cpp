// Times the serial elimination against the OpenMP row-update kernel on
// random exact matrices and checks that both produce identical output.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dghom/linalg.hpp"
#include "dghom/rng.hpp"

using namespace dghom;

namespace {

Matrix random_matrix(int n, int m, const Field& f, Rng& rng) {
    Matrix a = Matrix::zero(n, m, f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (!rng.chance(2, 3)) continue; // about one third zero
            long num = rng.range(-9, 9);
            long den = f.p == 0 ? rng.range(1, 4) : 1;
            a.a[i][j] = f.p == 0 ? Scalar::rational(num, den) : Scalar::of(num, f);
        }
    return a;
}

double run_ms(const Matrix& a, Backend b, int trials, Rref& out) {
    double best = 1e300;
    for (int t = 0; t < trials; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        out = rref(a, b);
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

bool same(const Rref& x, const Rref& y) {
    if (x.rank != y.rank || x.pivot_col != y.pivot_col) return false;
    if (x.r.rows != y.r.rows || x.r.cols != y.r.cols) return false;
    for (int i = 0; i < x.r.rows; ++i)
        for (int j = 0; j < x.r.cols; ++j)
            if (!(x.r.a[i][j] == y.r.a[i][j])) return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = 7;
    int max_dim = 192;
    int trials = 3;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        auto next = [&]() -> long {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "%s needs a value\n", a.c_str());
                std::exit(1);
            }
            return std::atol(argv[++i]);
        };
        if (a == "--seed")
            seed = static_cast<std::uint64_t>(next());
        else if (a == "--max")
            max_dim = static_cast<int>(next());
        else if (a == "--trials")
            trials = static_cast<int>(next());
        else {
            std::fprintf(stderr, "usage: bench_elim [--seed S] [--max N] [--trials T]\n");
            return a == "--help" || a == "-h" ? 0 : 1;
        }
    }

    Rng rng(seed);
    std::printf("%-18s %8s %12s %12s %9s  %s\n", "matrix", "rank", "serial ms", "parallel ms",
                "speedup", "identical");
    bool all_same = true;
    struct Case {
        int n, m;
        unsigned long p;
    };
    Case cases[] = {{48, 64, 0},  {96, 128, 0},  {0, 0, 0}, {48, 64, 32003},
                    {96, 128, 32003}, {0, 0, 32003}};
    for (Case& c : cases) {
        if (c.n == 0) {
            c.n = max_dim;
            c.m = max_dim + max_dim / 2;
        }
        Field f{c.p};
        Matrix a = random_matrix(c.n, c.m, f, rng);
        Rref rs, rp;
        double ms_s = run_ms(a, Backend::Serial, trials, rs);
        double ms_p = run_ms(a, Backend::Parallel, trials, rp);
        bool ok = same(rs, rp);
        all_same = all_same && ok;
        char label[64];
        std::snprintf(label, sizeof label, "%dx%d %s", c.n, c.m,
                      c.p == 0 ? "Q" : ("F" + std::to_string(c.p)).c_str());
        std::printf("%-18s %8d %12.2f %12.2f %8.2fx  %s\n", label, rs.rank, ms_s, ms_p,
                    ms_s / ms_p, ok ? "yes" : "NO");
    }
    if (!all_same) {
        std::printf("MISMATCH between backends\n");
        return 1;
    }
    return 0;
}
