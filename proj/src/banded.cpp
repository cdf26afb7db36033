#include "banded.hpp"

#include <cmath>
#include <string>

namespace fbdual::detail {

void Banded::matvec(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const int jlo = i - kl > 0 ? i - kl : 0;
        const int jhi = i + ku < n - 1 ? i + ku : n - 1;
        for (int j = jlo; j <= jhi; ++j)
            s += ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)] * x[j];
        y[i] = s;
    }
}

BandedLU BandedLU::factor(Banded m) {
    BandedLU lu;
    lu.n = m.n;
    lu.kl = m.kl;
    lu.ku = m.ku;
    lu.ldab = m.ldab;
    lu.ab = std::move(m.ab);
    lu.ipiv.resize(lu.n);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, lu.n, lu.n, lu.kl, lu.ku,
                                           lu.ab.data(), lu.ldab, lu.ipiv.data());
    if (info < 0)
        throw error("dgbtrf: illegal argument " + std::to_string(-info));
    lu.singular = info > 0;
    return lu;
}

int BandedLU::det_sign() const {
    if (singular)
        return 0;
    int sign = 1;
    for (int j = 0; j < n; ++j) {
        if (ipiv[j] != j + 1)
            sign = -sign;
        const double ujj = ab[static_cast<std::size_t>(j) * ldab + (kl + ku)];
        if (ujj < 0.0)
            sign = -sign;
        else if (ujj == 0.0)
            return 0;
    }
    return sign;
}

void BandedLU::solve(double* b) const {
    if (singular)
        throw error("banded solve on a singular factorization");
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1,
                                           ab.data(), ldab, ipiv.data(), b, n);
    if (info != 0)
        throw error("dgbtrs failed with info " + std::to_string(info));
}

TridiagEigen tridiag_lowest(const std::vector<double>& d, const std::vector<double>& e,
                            int n_levels) {
    const int n = static_cast<int>(d.size());
    if (n_levels < 1 || n_levels > n)
        throw capacity_error("tridiagonal solve: requested " + std::to_string(n_levels)
                             + " levels from a matrix of dimension " + std::to_string(n));
    std::vector<double> dd = d, ee = e;
    ee.resize(n, 0.0); // dstebz wants length n-1 but tolerate slack storage
    std::vector<double> w(n);
    std::vector<lapack_int> iblock(n), isplit(n);
    lapack_int m = 0, nsplit = 0;
    lapack_int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, n_levels, 0.0,
                                     dd.data(), ee.data(), &m, &nsplit, w.data(),
                                     iblock.data(), isplit.data());
    if (info != 0)
        throw convergence_error("dstebz failed with info " + std::to_string(info));
    if (m < n_levels)
        throw capacity_error("dstebz returned fewer eigenvalues than requested");
    std::vector<double> z(static_cast<std::size_t>(n) * m);
    std::vector<lapack_int> ifail(m);
    info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, dd.data(), ee.data(), m, w.data(),
                          iblock.data(), isplit.data(), z.data(), n, ifail.data());
    if (info != 0)
        throw convergence_error("dstein failed with info " + std::to_string(info));
    TridiagEigen out;
    out.values.assign(w.begin(), w.begin() + n_levels);
    out.vectors.resize(n_levels);
    for (int k = 0; k < n_levels; ++k)
        out.vectors[k].assign(z.begin() + static_cast<std::size_t>(k) * n,
                              z.begin() + static_cast<std::size_t>(k + 1) * n);
    return out;
}

void dense_solve(std::vector<double>& a, std::vector<double>& b, int n) {
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dgesv(LAPACK_ROW_MAJOR, n, 1, a.data(), n,
                                          ipiv.data(), b.data(), 1);
    if (info != 0)
        throw convergence_error("dgesv failed with info " + std::to_string(info));
}

} // namespace fbdual::detail
