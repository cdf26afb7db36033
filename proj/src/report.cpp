#include "fbdual/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "fbdual/errors.hpp"

namespace fbdual::report {

namespace {

using spectral::Grid;
using spectral::Spectrum;
using spectral::TrapSpec;
using spectral::Wavefunction;

std::string fmt(double x) { return format_double(x); }

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '&')
            out += "&amp;";
        else if (ch == '<')
            out += "&lt;";
        else if (ch == '>')
            out += "&gt;";
        else
            out += ch;
    }
    return out;
}

void check_bundle(const FigureBundle& b) {
    if (b.panels.empty())
        throw invalid_input("figure bundle has no panels");
    if (b.columns < 1)
        throw invalid_input("figure bundle needs a positive column count");
    for (const Panel& p : b.panels) {
        if (p.series.empty())
            throw invalid_input("panel '" + p.title + "' has no series");
        for (const Series& s : p.series) {
            if (s.x.empty())
                throw invalid_input("series '" + s.name + "' is empty");
            if (s.x.size() != s.y.size())
                throw invalid_input("series '" + s.name + "' has mismatched x/y lengths");
        }
    }
}

struct PixelBox {
    double x0, y0, w, h;
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

std::string svg_of_bundle(const FigureBundle& b) {
    check_bundle(b);
    const double cell_w = 380.0, cell_h = 280.0;
    const double ml = 56.0, mr = 14.0, mt = 26.0, mb = 42.0;
    const int cols = b.columns;
    const int rows = (static_cast<int>(b.panels.size()) + cols - 1) / cols;
    const double width = cols * cell_w;
    const double height = rows * cell_h + 18.0;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    const int n_colors = 6;

    char buf[256];
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n",
                  width, height);
    svg += buf;

    for (std::size_t pi = 0; pi < b.panels.size(); ++pi) {
        const Panel& panel = b.panels[pi];
        const double ox = static_cast<double>(pi % static_cast<std::size_t>(cols)) * cell_w;
        const double oy = static_cast<double>(pi / static_cast<std::size_t>(cols)) * cell_h;
        PixelBox box{ox + ml, oy + mt, cell_w - ml - mr, cell_h - mt - mb, 0, 0, 0, 0};

        bool first = true;
        for (const Series& s : panel.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (first) {
                    box.xmin = box.xmax = s.x[i];
                    box.ymin = box.ymax = s.y[i];
                    first = false;
                }
                box.xmin = std::fmin(box.xmin, s.x[i]);
                box.xmax = std::fmax(box.xmax, s.x[i]);
                box.ymin = std::fmin(box.ymin, s.y[i]);
                box.ymax = std::fmax(box.ymax, s.y[i]);
            }
        if (box.xmax - box.xmin <= 0.0) {
            box.xmin -= 1.0;
            box.xmax += 1.0;
        }
        const double ypad = box.ymax - box.ymin <= 0.0 ? 1.0 : 0.05 * (box.ymax - box.ymin);
        box.ymin -= ypad;
        box.ymax += ypad;

        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                      "stroke=\"#444444\" stroke-width=\"1\"/>\n",
                      box.x0, box.y0, box.w, box.h);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"12\" "
                      "text-anchor=\"middle\">",
                      box.x0 + box.w / 2.0, oy + 17.0);
        svg += buf;
        svg += xml_escape(panel.title);
        svg += "</text>\n";

        for (int t = 0; t < 5; ++t) {
            const double fx = box.xmin + (box.xmax - box.xmin) * t / 4.0;
            const double fy = box.ymin + (box.ymax - box.ymin) * t / 4.0;
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                          "stroke=\"#444444\" stroke-width=\"1\"/>\n",
                          box.px(fx), box.y0 + box.h, box.px(fx), box.y0 + box.h + 4.0);
            svg += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"9\" "
                          "text-anchor=\"middle\">%s</text>\n",
                          box.px(fx), box.y0 + box.h + 14.0, fmt_short(fx).c_str());
            svg += buf;
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                          "stroke=\"#444444\" stroke-width=\"1\"/>\n",
                          box.x0 - 4.0, box.py(fy), box.x0, box.py(fy));
            svg += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"9\" "
                          "text-anchor=\"end\">%s</text>\n",
                          box.x0 - 6.0, box.py(fy) + 3.0, fmt_short(fy).c_str());
            svg += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"10\" "
                      "text-anchor=\"middle\">",
                      box.x0 + box.w / 2.0, box.y0 + box.h + 28.0);
        svg += buf;
        svg += xml_escape(b.x_label);
        svg += "</text>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"10\" "
                      "text-anchor=\"middle\" transform=\"rotate(-90 %.2f %.2f)\">",
                      ox + 12.0, box.y0 + box.h / 2.0, ox + 12.0, box.y0 + box.h / 2.0);
        svg += buf;
        svg += xml_escape(b.y_label);
        svg += "</text>\n";

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const Series& s = panel.series[si];
            const char* color = palette[si % n_colors];
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i == 0 ? "" : " ", box.px(s.x[i]),
                              box.py(s.y[i]));
                svg += buf;
            }
            svg += "\"/>\n";
            const double ly = box.y0 + 12.0 + 12.0 * static_cast<double>(si);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                          "stroke-width=\"2\"/>\n",
                          box.x0 + box.w - 96.0, ly - 3.0, box.x0 + box.w - 82.0, ly - 3.0,
                          color);
            svg += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"9\" "
                          "text-anchor=\"start\">",
                          box.x0 + box.w - 78.0, ly);
            svg += buf;
            svg += xml_escape(s.name);
            svg += "</text>\n";
        }
    }

    // The stamp can exceed the scratch buffer, so append it via the string.
    std::snprintf(buf, sizeof buf,
                  "<text x=\"4\" y=\"%.2f\" font-family=\"monospace\" font-size=\"9\" "
                  "fill=\"#666666\">",
                  height - 5.0);
    svg += buf;
    svg += xml_escape(b.stamp);
    svg += "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"9\" "
                  "fill=\"#666666\" text-anchor=\"end\">",
                  width - 4.0, height - 5.0);
    svg += buf;
    svg += xml_escape(kVersion);
    svg += "</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw io_error("short write to " + path);
}

// Grid indices thinned to roughly max_points, always keeping the end points
// and both origin slots, restricted to |x| <= clip (clip <= 0: no clip).
std::vector<std::size_t> thin_indices(const Grid& grid, std::size_t max_points, double clip) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (clip <= 0.0 || std::fabs(grid.xs[i]) <= clip)
            keep.push_back(i);
    if (keep.empty())
        throw invalid_input("clip window excludes every grid point");
    const std::size_t stride = std::max<std::size_t>(1, keep.size() / max_points);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const std::size_t i = keep[k];
        const bool forced = k == 0 || k + 1 == keep.size() || i == grid.origin_left
                            || i == grid.origin_right();
        if (forced || k % stride == 0) {
            if (out.empty() || out.back() != i)
                out.push_back(i);
        }
    }
    return out;
}

Series series_of_state(const std::string& name, const Wavefunction& wf, double clip) {
    Series s;
    s.name = name;
    for (std::size_t i : thin_indices(wf.grid, 700, clip)) {
        s.x.push_back(wf.grid.xs[i]);
        s.y.push_back(wf.values[i]);
    }
    return s;
}

// ---- the runner ----------------------------------------------------------

bool wants(const RunConfig& cfg, const std::string& f) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end();
}

contact::Coupling coupling_of(const RunConfig& cfg) {
    if (cfg.coupling_kind == "epsilon")
        return contact::EpsilonCoupling{cfg.coupling};
    if (cfg.coupling_kind == "delta")
        return contact::DeltaCoupling{cfg.coupling};
    if (cfg.coupling_kind == "hardcore")
        return contact::HardCore{};
    throw invalid_input("coupling_kind: unknown value '" + cfg.coupling_kind
                        + "' (epsilon, delta, or hardcore)");
}

TrapSpec trap_of(const RunConfig& cfg, const contact::Coupling& coupling) {
    if (cfg.ring)
        return TrapSpec::ring(cfg.length, cfg.twist);
    const double hw = cfg.half_width > 0.0
                          ? cfg.half_width
                          : spectral::default_half_width(cfg.omega, coupling);
    return TrapSpec::line(cfg.omega, hw);
}

struct Emitter {
    std::filesystem::path dir;
    std::string stamp;
    std::string config_hash;
    std::vector<std::string> rows; // manifest rows, sorted before writing
    RunResult result;

    void emit(const std::string& name, const std::string& content) {
        const std::string path = (dir / name).string();
        write_file(path, content);
        rows.push_back(name + "," + hash_hex(fnv1a(content)) + "," + config_hash);
        result.artifacts.push_back(path);
    }

    void finish() {
        std::sort(rows.begin(), rows.end());
        std::string manifest = "path,content_hash,config_hash\n";
        for (const std::string& r : rows)
            manifest += r + "\n";
        const std::string path = (dir / "manifest.csv").string();
        write_file(path, manifest);
        result.artifacts.push_back(path);
    }
};

void run_spectrum(const RunConfig& cfg, Emitter& em) {
    const contact::Coupling cpl = coupling_of(cfg);
    const TrapSpec trap = trap_of(cfg, cpl);
    Spectrum sp;
    if (cfg.solver == "interface")
        sp = spectral::solve_interface(trap, cpl, cfg.n_levels,
                                       spectral::default_interface_grid(trap));
    else if (cfg.solver == "numerov")
        sp = spectral::solve_numerov(trap, cpl, cfg.n_levels, cfg.bisect_tol);
    else
        throw invalid_input("solver: unknown value '" + cfg.solver
                            + "' (interface or numerov)");

    std::string text = "spectrum: " + em.stamp + "\n";
    for (std::size_t k = 0; k < sp.levels.size(); ++k)
        text += "E_" + std::to_string(k) + " = " + fmt(sp.levels[k].energy)
                + (sp.levels[k].degenerate_flag ? "  (near-degenerate)\n" : "\n");
    em.result.summary = std::to_string(sp.levels.size()) + " levels, ground energy "
                        + fmt_short(sp.levels.front().energy);

    if (wants(cfg, "csv")) {
        em.emit("spectrum_levels.csv", csv_of_levels(sp));
        em.emit("spectrum_states.csv",
                csv_of_states(sp, std::max<std::size_t>(1, sp.levels[0].state.grid.size() / 1500)));
    }
    if (wants(cfg, "text"))
        em.emit("spectrum.txt", text);
    if (wants(cfg, "svg")) {
        FigureBundle b;
        b.title = "spectrum";
        b.stamp = em.stamp;
        b.x_label = "x";
        b.y_label = "phi";
        b.columns = 1;
        Panel panel;
        panel.title = "lowest eigenfunctions";
        for (std::size_t k = 0; k < sp.levels.size() && k < 6; ++k)
            panel.series.push_back(series_of_state(
                "E=" + fmt_short(sp.levels[k].energy), sp.levels[k].state, 0.0));
        b.panels.push_back(std::move(panel));
        em.emit("spectrum.svg", svg_of_bundle(b));
    }
}

void run_duality(const RunConfig& cfg, Emitter& em) {
    if (cfg.coupling_kind != "epsilon")
        throw invalid_input("coupling_kind: the duality driver takes the value-jump side "
                            "(epsilon)");
    const contact::EpsilonCoupling c{cfg.coupling};
    const TrapSpec trap = trap_of(cfg, c);
    const duality::DualityReport rep = duality::verify_two_body(c, trap, cfg.n_levels, cfg.tol);

    std::string text = "duality: " + em.stamp + "\n";
    text += "c = " + fmt(rep.c) + ", v = " + fmt(rep.v) + "\n";
    for (std::size_t k = 0; k < rep.level_pairs.size(); ++k) {
        const auto& p = rep.level_pairs[k];
        text += "level " + std::to_string(k) + ": E- = " + fmt(p.e_fermi)
                + ", E+ = " + fmt(p.e_bose) + ", rel dE = " + fmt_short(p.rel_de)
                + ", wf gap = " + fmt_short(p.wf_distance) + "\n";
    }
    text += rep.pass ? "pass\n" : "FAIL\n";
    em.result.summary = std::string("duality ") + (rep.pass ? "pass" : "FAIL") + " at c = "
                        + fmt_short(rep.c);

    if (wants(cfg, "csv"))
        em.emit("duality.csv", csv_of_duality(rep));
    if (wants(cfg, "text"))
        em.emit("duality.txt", text);
    if (wants(cfg, "svg")) {
        const Grid grid = spectral::default_interface_grid(trap);
        const Spectrum sf = spectral::solve_interface(trap, c, 1, grid);
        const Spectrum sb =
            spectral::solve_interface(trap, duality::dual_of(c), 1, grid);
        FigureBundle b;
        b.title = "duality";
        b.stamp = em.stamp;
        b.x_label = "x";
        b.y_label = "phi";
        b.columns = 1;
        Panel panel;
        panel.title = "sign-transformed ground state against its dual";
        panel.series.push_back(
            series_of_state("sgn * psi-minus", duality::transform(sf.levels[0].state), 0.0));
        panel.series.push_back(series_of_state("psi-plus", sb.levels[0].state, 0.0));
        b.panels.push_back(std::move(panel));
        em.emit("duality.svg", svg_of_bundle(b));
    }
}

void run_converge(const RunConfig& cfg, Emitter& em) {
    if (cfg.coupling_kind != "epsilon")
        throw invalid_input("coupling_kind: the convergence study realizes the value-jump "
                            "coupling (epsilon)");
    const contact::EpsilonCoupling c{cfg.coupling};
    const TrapSpec trap = trap_of(cfg, c);
    const std::vector<double> avs =
        cfg.a_values.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : cfg.a_values;
    const spectral::ConvergenceTable table = spectral::convergence_study(c, trap, avs);

    std::string text = "converge: " + em.stamp + "\n";
    text += "exact ground energy " + fmt(table.e_exact) + "\n";
    for (const auto& r : table.rows)
        text += "a = " + fmt(r.a) + ": E = " + fmt(r.energy) + ", error = " + fmt(r.abs_error)
                + "\n";
    text += "fitted order " + fmt_short(table.slope) + "\n";
    if (!table.warning.empty())
        text += "warning: " + table.warning + "\n";
    em.result.summary = "convergence order " + fmt_short(table.slope)
                        + (table.warning.empty() ? "" : " (with resolution-floor warning)");

    if (wants(cfg, "csv"))
        em.emit("converge.csv", csv_of_convergence(table));
    if (wants(cfg, "text"))
        em.emit("converge.txt", text);
    if (wants(cfg, "svg")) {
        FigureBundle b;
        b.title = "convergence";
        b.stamp = em.stamp;
        b.x_label = "log10 a";
        b.y_label = "log10 |dE|";
        b.columns = 1;
        Panel panel;
        panel.title = "ground-energy error of the three-spike realization";
        Series s;
        s.name = "error";
        for (const auto& r : table.rows) {
            s.x.push_back(std::log10(r.a));
            s.y.push_back(std::log10(r.abs_error));
        }
        panel.series.push_back(std::move(s));
        b.panels.push_back(std::move(panel));
        em.emit("converge.svg", svg_of_bundle(b));
    }
}

void run_fig1(const RunConfig& cfg, Emitter& em) {
    const double omega = cfg.omega;
    const double hw = cfg.half_width > 0.0
                          ? cfg.half_width
                          : std::fmax(omega > 0.0 ? 6.0 / std::sqrt(omega) : 10.0, 10.0);
    const TrapSpec trap = TrapSpec::line(omega, hw);
    const Grid grid = spectral::default_finite_grid(trap);
    const double a = cfg.a > 0.0 ? cfg.a : 0.2;
    const double clip = std::fmin(4.0, hw);
    const double depths[] = {-50.0, 300.0};
    const char* names[] = {"attractive well depth -50", "repulsive barrier height 300"};

    FigureBundle b;
    b.title = "two-body odd states across a square interaction";
    b.stamp = em.stamp;
    b.x_label = "x";
    b.y_label = "phi";
    b.columns = 2;
    std::string text = "fig1: " + em.stamp + "\n";
    for (int case_i = 0; case_i < 2; ++case_i) {
        const spectral::SquareWell well{depths[case_i], a};
        const Spectrum sp = spectral::solve_finite_range(trap, spectral::FiniteRangePotential{well},
                                                         contact::Parity::odd, 2, grid);
        Panel panel;
        panel.title = names[case_i];
        Series prof;
        prof.name = "V/100";
        for (std::size_t i : thin_indices(grid, 700, clip)) {
            prof.x.push_back(grid.xs[i]);
            prof.y.push_back(std::fabs(grid.xs[i]) <= a ? depths[case_i] / 100.0 : 0.0);
        }
        panel.series.push_back(std::move(prof));
        panel.series.push_back(series_of_state("psi0", sp.levels[0].state, clip));
        panel.series.push_back(series_of_state("psi1", sp.levels[1].state, clip));
        b.panels.push_back(std::move(panel));
        text += std::string(names[case_i]) + ": E0 = " + fmt(sp.levels[0].energy)
                + ", E1 = " + fmt(sp.levels[1].energy) + "\n";
    }
    em.result.summary = "two square-interaction cases, two odd levels each";

    if (wants(cfg, "csv"))
        em.emit("fig1.csv", csv_of_bundle(b));
    if (wants(cfg, "text"))
        em.emit("fig1.txt", text);
    if (wants(cfg, "svg"))
        em.emit("fig1.svg", svg_of_bundle(b));
}

void run_fig2(const RunConfig& cfg, Emitter& em) {
    if (cfg.ring)
        throw invalid_input("ring: the figure commands run on the trapped line");
    const double a = cfg.a > 0.0 ? cfg.a : 0.05;
    const std::vector<double> cs =
        cfg.couplings.empty() ? std::vector<double>{0.2, 1.0, 5.0} : cfg.couplings;
    for (double c : cs)
        if (c == 0.0 || !std::isfinite(c))
            throw invalid_input("couplings: the spike realization needs nonzero finite c");

    FigureBundle b;
    b.title = "dual pairs of ground states at finite spike spacing";
    b.stamp = em.stamp;
    b.x_label = "x";
    b.y_label = "phi";
    b.columns = 2;
    std::string text = "fig2: " + em.stamp + "\nspike spacing a = " + fmt(a) + "\n";

    for (double c : cs) {
        const contact::EpsilonCoupling eps{c};
        const TrapSpec trap = trap_of(cfg, eps);
        const double clip = std::fmin(4.0, trap.line_geom().half_width);
        const contact::ThreeDeltaRealization td =
            contact::three_delta_strengths(contact::epsilon_as_chi(eps), a);
        const Spectrum sf = spectral::solve_finite_range(
            trap, spectral::FiniteRangePotential{td}, contact::Parity::odd, 1,
            spectral::default_finite_grid(trap));
        const Wavefunction mapped = duality::transform(sf.levels[0].state);
        const Spectrum sb = spectral::solve_interface(trap, duality::dual_of(eps), 1,
                                                      spectral::default_interface_grid(trap));

        Panel left;
        left.title = "fermionic c = " + fmt_short(c);
        left.series.push_back(series_of_state("psi-minus", sf.levels[0].state, clip));
        Panel right;
        right.title = "bosonic v = " + fmt_short(1.0 / c);
        right.series.push_back(series_of_state("sgn * psi-minus", mapped, clip));
        right.series.push_back(series_of_state("zero-range psi-plus", sb.levels[0].state, clip));
        b.panels.push_back(std::move(left));
        b.panels.push_back(std::move(right));

        // The coarse grid nodes all exist on the fine grid (2:1 spacing).
        const Grid& coarse = sb.levels[0].state.grid;
        const std::size_t mc = coarse.per_side();
        double gap = 0.0;
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            const std::size_t fi = k <= mc ? 2 * k : 2 * k - 1;
            gap = std::fmax(gap, std::fabs(mapped.values[fi]
                                           - sb.levels[0].state.values[k]));
        }
        text += "c = " + fmt(c) + ": E-(a) = " + fmt(sf.levels[0].energy)
                + ", zero-range E+ = " + fmt(sb.levels[0].energy)
                + ", sup |sgn psi- - psi+| = " + fmt_short(gap) + "\n";
    }
    em.result.summary = std::to_string(cs.size()) + " dual ground-state pairs at a = "
                        + fmt_short(a);

    if (wants(cfg, "csv"))
        em.emit("fig2.csv", csv_of_bundle(b));
    if (wants(cfg, "text"))
        em.emit("fig2.txt", text);
    if (wants(cfg, "svg"))
        em.emit("fig2.svg", svg_of_bundle(b));
}

void emit_ring_gas(const RunConfig& cfg, Emitter& em, const std::string& name,
                   const bethe::BetheState& st, const std::string& text) {
    if (wants(cfg, "csv"))
        em.emit(name + ".csv", csv_of_bethe(st));
    if (wants(cfg, "text"))
        em.emit(name + ".txt", text);
    if (wants(cfg, "svg")) {
        FigureBundle b;
        b.title = name;
        b.stamp = em.stamp;
        b.x_label = "j";
        b.y_label = "k_j";
        b.columns = 1;
        Panel panel;
        panel.title = "ground-state quasimomenta";
        Series s;
        s.name = "roots";
        for (std::size_t j = 0; j < st.roots.size(); ++j) {
            s.x.push_back(static_cast<double>(j + 1));
            s.y.push_back(st.roots[j]);
        }
        panel.series.push_back(std::move(s));
        b.panels.push_back(std::move(panel));
        em.emit(name + ".svg", svg_of_bundle(b));
    }
}

void run_bethe(const RunConfig& cfg, Emitter& em) {
    const bethe::RingSpec ring(cfg.n, cfg.length, cfg.coupling, cfg.twist);
    const bethe::BetheState st = bethe::ground_state(ring);
    std::string text = "bethe: " + em.stamp + "\n";
    text += "E = " + fmt(st.energy) + ", P = " + fmt(st.momentum) + ", residual = "
            + fmt_short(st.residual) + "\n";
    em.result.summary = "ring gas ground energy " + fmt_short(st.energy);
    emit_ring_gas(cfg, em, "bethe", st, text);
}

void run_dual_nbody(const RunConfig& cfg, Emitter& em) {
    const contact::EpsilonCoupling c{cfg.coupling};
    const double e_dual = bethe::dual_fermion_energy(cfg.n, cfg.length, c, cfg.twist);
    const double lambda_plus = duality::dual_twist_plus(cfg.n, cfg.twist);
    const double v = 1.0 / c.c;
    const bethe::RingSpec ring(cfg.n, cfg.length, v, lambda_plus);
    const bethe::BetheState st = bethe::ground_state(ring);
    if (std::fabs(st.energy - e_dual) > 1e-12 * std::fmax(1.0, std::fabs(e_dual)))
        throw solver_inconsistency("dual energy disagrees with the direct ring-gas solve");

    std::vector<duality::ContactData> ft, bt;
    for (double d : {1.0, -0.7, 2.3})
        ft.push_back(duality::fermi_contact_family(c.c, d));
    for (double w : {1.0, -1.1, 0.4})
        bt.push_back(duality::bose_contact_family(v, w));
    if (!duality::nbody_contact_equivalence_check(c.c, ft, bt, 1e-12))
        throw solver_inconsistency("contact-data equivalence check failed");

    std::string text = "dual-nbody: " + em.stamp + "\n";
    text += "N = " + std::to_string(cfg.n) + ", L = " + fmt(cfg.length) + "\n";
    text += "fermionic twist = " + fmt(duality::twist_rule(cfg.n, lambda_plus).lambda_minus)
            + ", bosonic twist = " + fmt(lambda_plus) + "\n";
    text += "c = " + fmt(c.c) + ", v = " + fmt(v) + "\n";
    text += "ground energy (shared by both statistics) = " + fmt(e_dual) + "\n";
    text += "contact-data equivalence on sampled boundary data: pass\n";
    em.result.summary = "dual gas energy " + fmt_short(e_dual) + ", contact algebra pass";
    emit_ring_gas(cfg, em, "dual_nbody", st, text);
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void emit_svg(const FigureBundle& bundle, const std::string& path) {
    write_file(path, svg_of_bundle(bundle));
}

std::string csv_of_bundle(const FigureBundle& bundle) {
    check_bundle(bundle);
    std::string out = "panel,series,x,y\n";
    for (const Panel& p : bundle.panels)
        for (const Series& s : p.series)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out += p.title + "," + s.name + "," + fmt(s.x[i]) + "," + fmt(s.y[i]) + "\n";
    return out;
}

std::string csv_of_levels(const spectral::Spectrum& sp) {
    std::string out = "index,energy,degenerate\n";
    for (std::size_t k = 0; k < sp.levels.size(); ++k)
        out += std::to_string(k) + "," + fmt(sp.levels[k].energy) + ","
               + (sp.levels[k].degenerate_flag ? "1" : "0") + "\n";
    return out;
}

std::string csv_of_states(const spectral::Spectrum& sp, std::size_t stride) {
    if (sp.levels.empty())
        throw invalid_input("spectrum has no levels to serialize");
    const Grid& grid = sp.levels[0].state.grid;
    std::string out = "x";
    for (std::size_t k = 0; k < sp.levels.size(); ++k)
        out += ",psi" + std::to_string(k);
    out += "\n";
    const std::size_t max_points = stride == 0 ? grid.size() : grid.size() / stride + 1;
    for (std::size_t i : thin_indices(grid, std::max<std::size_t>(max_points, 2), 0.0)) {
        out += fmt(grid.xs[i]);
        for (const auto& lv : sp.levels)
            out += "," + fmt(lv.state.values[i]);
        out += "\n";
    }
    return out;
}

std::string csv_of_duality(const duality::DualityReport& rep) {
    std::string out = "level,e_fermi,e_bose,rel_de,wf_distance,pass\n";
    for (std::size_t k = 0; k < rep.level_pairs.size(); ++k) {
        const auto& p = rep.level_pairs[k];
        const bool ok = p.rel_de <= rep.energy_tol && p.wf_distance <= rep.wf_tol;
        out += std::to_string(k) + "," + fmt(p.e_fermi) + "," + fmt(p.e_bose) + ","
               + fmt(p.rel_de) + "," + fmt(p.wf_distance) + "," + (ok ? "1" : "0") + "\n";
    }
    return out;
}

std::string csv_of_convergence(const spectral::ConvergenceTable& table) {
    std::string out = "a,energy,abs_error\n";
    for (const auto& r : table.rows)
        out += fmt(r.a) + "," + fmt(r.energy) + "," + fmt(r.abs_error) + "\n";
    return out;
}

std::string csv_of_bethe(const bethe::BetheState& st) {
    std::string out = "j,i,k\n";
    for (std::size_t j = 0; j < st.roots.size(); ++j)
        out += std::to_string(j + 1) + "," + fmt(st.quantum_numbers[j]) + ","
               + fmt(st.roots[j]) + "\n";
    out += "sum," + fmt(st.energy) + "," + fmt(st.momentum) + "\n";
    return out;
}

std::string stamp_of(const RunConfig& cfg) {
    std::string s = "command=" + cfg.command;
    s += " omega=" + fmt(cfg.omega);
    s += " kind=" + cfg.coupling_kind;
    s += " coupling=" + fmt(cfg.coupling);
    s += " a=" + fmt(cfg.a);
    s += " n=" + std::to_string(cfg.n);
    s += " length=" + fmt(cfg.length);
    s += " twist=" + fmt(cfg.twist);
    s += " levels=" + std::to_string(cfg.n_levels);
    s += cfg.ring ? " ring=1" : " ring=0";
    s += " half_width=" + fmt(cfg.half_width);
    s += " tol=" + fmt(cfg.tol);
    s += " bisect_tol=" + fmt(cfg.bisect_tol);
    s += " solver=" + cfg.solver;
    s += " a_values=";
    for (std::size_t i = 0; i < cfg.a_values.size(); ++i)
        s += (i ? "|" : "") + fmt(cfg.a_values[i]);
    s += " couplings=";
    for (std::size_t i = 0; i < cfg.couplings.size(); ++i)
        s += (i ? "|" : "") + fmt(cfg.couplings[i]);
    return s;
}

RunResult run(const RunConfig& cfg) {
    static const char* commands[] = {"spectrum", "duality", "converge", "fig1",
                                     "fig2",     "bethe",   "dual-nbody"};
    if (std::find_if(std::begin(commands), std::end(commands),
                     [&](const char* c) { return cfg.command == c; })
        == std::end(commands))
        throw invalid_input("command: unknown value '" + cfg.command + "'");
    if (cfg.formats.empty())
        throw invalid_input("formats: choose at least one of csv, svg, text");
    for (const std::string& f : cfg.formats)
        if (f != "csv" && f != "svg" && f != "text")
            throw invalid_input("formats: unknown value '" + f + "'");
    if (cfg.n_levels < 1)
        throw invalid_input("n_levels: must be at least 1");
    if (cfg.outdir.empty())
        throw invalid_input("outdir: must not be empty");

    Emitter em;
    em.dir = cfg.outdir;
    em.stamp = stamp_of(cfg);
    em.config_hash = hash_hex(fnv1a(em.stamp));
    std::filesystem::create_directories(em.dir);

    if (cfg.command == "spectrum")
        run_spectrum(cfg, em);
    else if (cfg.command == "duality")
        run_duality(cfg, em);
    else if (cfg.command == "converge")
        run_converge(cfg, em);
    else if (cfg.command == "fig1")
        run_fig1(cfg, em);
    else if (cfg.command == "fig2")
        run_fig2(cfg, em);
    else if (cfg.command == "bethe")
        run_bethe(cfg, em);
    else
        run_dual_nbody(cfg, em);

    em.finish();
    return std::move(em.result);
}

} // namespace fbdual::report
