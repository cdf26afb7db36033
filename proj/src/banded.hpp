#pragma once

// Internal helpers around LAPACK band and tridiagonal routines.
// Not installed; solver translation units only.

#include <vector>

#include <lapacke.h>

#include "fbdual/errors.hpp"

namespace fbdual::detail {

// General banded matrix in LAPACK band storage (column-major, with the
// extra kl rows dgbtrf needs for fill-in).
struct Banded {
    int n = 0;
    int kl = 0;
    int ku = 0;
    int ldab = 0;
    std::vector<double> ab;

    Banded(int n_, int kl_, int ku_)
        : n(n_), kl(kl_), ku(ku_), ldab(2 * kl_ + ku_ + 1),
          ab(static_cast<std::size_t>(ldab) * n_, 0.0) {}

    double& at(int i, int j) { return ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)]; }
    double get(int i, int j) const {
        if (i - j > kl || j - i > ku)
            return 0.0;
        return ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)];
    }
    void add(int i, int j, double v) { at(i, j) += v; }
    void shift_diagonal(double s) {
        for (int j = 0; j < n; ++j)
            at(j, j) += s;
    }
    // y = A x
    void matvec(const double* x, double* y) const;
};

struct BandedLU {
    int n = 0, kl = 0, ku = 0, ldab = 0;
    std::vector<double> ab;
    std::vector<lapack_int> ipiv;
    bool singular = false;

    static BandedLU factor(Banded m);
    // Sign of the determinant: -1, 0 (singular), or +1.
    int det_sign() const;
    // Solve A x = b in place.
    void solve(double* b) const;
};

// Lowest n_levels eigenpairs of a symmetric tridiagonal matrix
// (diagonal d, off-diagonal e) via bisection + inverse iteration.
struct TridiagEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
TridiagEigen tridiag_lowest(const std::vector<double>& d, const std::vector<double>& e,
                            int n_levels);

// Solve the dense system A x = b (row-major, n x n) in place; x returned in b.
void dense_solve(std::vector<double>& a, std::vector<double>& b, int n);

} // namespace fbdual::detail
