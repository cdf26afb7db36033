#pragma once

// Artifact emission: CSV tables, standalone SVG figures, and text summaries
// for spectra, duality reports, convergence tables, and ring-gas states,
// plus a config-driven runner that the command-line tool wraps.  Everything
// here is deterministic: fixed series and key orders, round-trip numeric
// formatting, content hashes instead of timestamps.

#include <cstdint>
#include <string>
#include <vector>

#include "fbdual/bethe.hpp"
#include "fbdual/duality.hpp"
#include "fbdual/spectral.hpp"

namespace fbdual::report {

inline constexpr const char* kVersion = "fbdual 0.1.0";

// Shortest exact decimal round trip for a double ("%.17g").
std::string format_double(double x);

// FNV-1a 64-bit over raw bytes; the manifest's content hash.
std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct Panel {
    std::string title;
    std::vector<Series> series;
};

struct FigureBundle {
    std::string title;
    std::string stamp;   // parameter stamp identifying the producing config
    std::string x_label;
    std::string y_label;
    int columns = 1;
    std::vector<Panel> panels;
};

// Standalone SVG, byte-identical for identical bundles.  Rejects bundles
// with no panels, panels with no series, empty series, or x/y length
// mismatches.
void emit_svg(const FigureBundle& bundle, const std::string& path);

// Long-form table of a bundle: panel,series,x,y rows in emission order.
std::string csv_of_bundle(const FigureBundle& bundle);

std::string csv_of_levels(const spectral::Spectrum& sp);
// One x column and one column per level; rows thinned by stride but always
// keeping the walls and both origin slots.
std::string csv_of_states(const spectral::Spectrum& sp, std::size_t stride);
std::string csv_of_duality(const duality::DualityReport& rep);
std::string csv_of_convergence(const spectral::ConvergenceTable& table);
// Rows (j, I_j, k_j), then a "sum" row carrying (energy, momentum).
std::string csv_of_bethe(const bethe::BetheState& st);

struct RunConfig {
    std::string command; // spectrum | duality | converge | fig1 | fig2 | bethe | dual-nbody

    // physical parameters
    double omega = 2.0;
    std::string coupling_kind = "epsilon"; // epsilon | delta | hardcore
    double coupling = 1.0;                 // c or v by kind; v for the ring gas
    double a = 0.0;                        // range/spacing; 0 = per-command default
    int n = 2;                             // particle count for the ring gas
    double length = 10.0;                  // ring length
    double twist = 0.0;
    int n_levels = 4;
    bool ring = false;

    // numerical parameters
    double half_width = 0.0; // 0 = default from omega and coupling
    double tol = 1e-5;       // comparison tolerance (duality)
    double bisect_tol = 1e-10;
    std::string solver = "interface"; // interface | numerov
    std::vector<double> a_values;     // converge; empty = {0.2, 0.1, 0.05, 0.025}
    std::vector<double> couplings;    // fig2 rows; empty = {0.2, 1, 5}

    // output
    std::string outdir = ".";
    std::vector<std::string> formats = {"csv", "text"}; // subset of csv, svg, text
};

struct RunResult {
    std::vector<std::string> artifacts; // paths written, manifest last
    std::string summary;                // one-paragraph text result
};

// Validates the config, runs the requested computation, writes the selected
// artifact formats plus a manifest (path, content hash, config hash), and
// returns the artifact list.  Identical configs produce byte-identical
// artifacts.  Solver and validation failures propagate as exceptions.
RunResult run(const RunConfig& cfg);

// The canonical parameter stamp hashed into the manifest.
std::string stamp_of(const RunConfig& cfg);

} // namespace fbdual::report
