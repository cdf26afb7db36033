// Times the determinant-scan solver and the spacing batch in serial and
// OpenMP modes and checks that both produce bit-identical numbers.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "fbdual/spectral.hpp"

using namespace fbdual;

namespace {

template <typename F>
double ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size()
           && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

} // namespace

int main(int argc, char** argv) {
    int levels = 8;
    if (argc > 1)
        levels = std::atoi(argv[1]);
    if (levels < 1)
        levels = 1;

    const contact::Coupling coupling = contact::EpsilonCoupling{1.0};
    const spectral::TrapSpec trap = spectral::TrapSpec::line(2.0, 10.0);
    const spectral::Grid grid = spectral::default_interface_grid(trap);

    std::vector<double> e_serial, e_omp;
    spectral::SolveOptions opt;
    opt.exec = exec_mode::serial;
    const double t_scan_s = ms([&] {
        for (const auto& lv : spectral::solve_interface(trap, coupling, levels, grid, opt).levels)
            e_serial.push_back(lv.energy);
    });
    opt.exec = exec_mode::openmp;
    const double t_scan_p = ms([&] {
        for (const auto& lv : spectral::solve_interface(trap, coupling, levels, grid, opt).levels)
            e_omp.push_back(lv.energy);
    });

    const std::vector<double> a_values = {0.2, 0.1, 0.05, 0.025, 0.0125};
    std::vector<double> err_serial, err_omp;
    opt.exec = exec_mode::serial;
    const double t_batch_s = ms([&] {
        for (const auto& r :
             spectral::convergence_study(contact::EpsilonCoupling{1.0}, trap, a_values, opt).rows)
            err_serial.push_back(r.abs_error);
    });
    opt.exec = exec_mode::openmp;
    const double t_batch_p = ms([&] {
        for (const auto& r :
             spectral::convergence_study(contact::EpsilonCoupling{1.0}, trap, a_values, opt).rows)
            err_omp.push_back(r.abs_error);
    });

    std::printf("determinant scan, %d levels: serial %8.1f ms  openmp %8.1f ms  speedup %.2fx\n",
                levels, t_scan_s, t_scan_p, t_scan_s / t_scan_p);
    std::printf("spacing batch, %zu points:   serial %8.1f ms  openmp %8.1f ms  speedup %.2fx\n",
                a_values.size(), t_batch_s, t_batch_p, t_batch_s / t_batch_p);
    const bool same = bit_equal(e_serial, e_omp) && bit_equal(err_serial, err_omp);
    std::printf("serial and openmp results bit-identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
