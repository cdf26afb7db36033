// Command-line front end: thin argument handling around report::run.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbdual/errors.hpp"
#include "fbdual/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"generalized 1d contact interactions: spectra, fermion-boson duality, "
                 "spike-realization convergence, and the exactly solvable ring gas"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (sections per command)");

    fbdual::report::RunConfig cfg;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--outdir", cfg.outdir, "directory for artifacts")
            ->capture_default_str();
        sub->add_option("--formats", cfg.formats, "any of: csv svg text")
            ->capture_default_str();
    };
    auto add_trap = [&](CLI::App* sub) {
        sub->add_option("--omega", cfg.omega, "trap frequency")->capture_default_str();
        sub->add_option("--half-width", cfg.half_width,
                        "domain half width (0: choose from omega and coupling)")
            ->capture_default_str();
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "lowest levels of one coupling");
    add_trap(spectrum);
    add_output(spectrum);
    spectrum->add_option("--kind", cfg.coupling_kind, "epsilon | delta | hardcore")
        ->capture_default_str();
    spectrum->add_option("--coupling", cfg.coupling, "c or v by kind")->capture_default_str();
    spectrum->add_option("--levels", cfg.n_levels, "level count")->capture_default_str();
    spectrum->add_flag("--ring", cfg.ring, "periodic geometry instead of the trapped line");
    spectrum->add_option("--length", cfg.length, "ring length")->capture_default_str();
    spectrum->add_option("--twist", cfg.twist, "ring boundary twist in radians")
        ->capture_default_str();
    spectrum->add_option("--solver", cfg.solver, "interface | numerov")->capture_default_str();
    spectrum->add_option("--bisect-tol", cfg.bisect_tol, "energy bisection tolerance")
        ->capture_default_str();

    CLI::App* dual = app.add_subcommand("duality", "two-body fermion-boson equivalence");
    add_trap(dual);
    add_output(dual);
    dual->add_option("--c", cfg.coupling, "value-jump coupling")->capture_default_str();
    dual->add_option("--levels", cfg.n_levels, "levels to pair")->capture_default_str();
    dual->add_option("--tol", cfg.tol, "relative energy tolerance")->capture_default_str();

    CLI::App* conv = app.add_subcommand("converge", "spike-realization error against spacing");
    add_trap(conv);
    add_output(conv);
    conv->add_option("--c", cfg.coupling, "value-jump coupling")->capture_default_str();
    conv->add_option("--a-values", cfg.a_values, "decreasing spike spacings");

    CLI::App* fig1 = app.add_subcommand("fig1", "odd two-body states across square wells");
    add_trap(fig1);
    add_output(fig1);
    fig1->add_option("--a", cfg.a, "well range (0: default 0.2)")->capture_default_str();

    CLI::App* fig2 = app.add_subcommand("fig2", "dual ground-state pairs at finite spacing");
    add_trap(fig2);
    add_output(fig2);
    fig2->add_option("--a", cfg.a, "spike spacing (0: default 0.05)")->capture_default_str();
    fig2->add_option("--couplings", cfg.couplings, "value-jump couplings, one row each");

    CLI::App* bet = app.add_subcommand("bethe", "exact ring-gas ground state");
    add_output(bet);
    bet->add_option("--n", cfg.n, "particle count")->capture_default_str();
    bet->add_option("--length", cfg.length, "ring length")->capture_default_str();
    bet->add_option("--v", cfg.coupling, "repulsive coupling (inf for the hard core)")
        ->capture_default_str();
    bet->add_option("--twist", cfg.twist, "bosonic boundary twist")->capture_default_str();

    CLI::App* dn = app.add_subcommand("dual-nbody", "fermion gas solved on its bosonic side");
    add_output(dn);
    dn->add_option("--n", cfg.n, "particle count")->capture_default_str();
    dn->add_option("--length", cfg.length, "ring length")->capture_default_str();
    dn->add_option("--c", cfg.coupling, "value-jump coupling (> 0)")->capture_default_str();
    dn->add_option("--twist", cfg.twist, "fermionic boundary twist")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        const fbdual::report::RunResult res = fbdual::report::run(cfg);
        std::printf("%s\n", res.summary.c_str());
        for (const std::string& path : res.artifacts)
            std::printf("wrote %s\n", path.c_str());
        return 0;
    } catch (const fbdual::invalid_input& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const fbdual::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 3;
    }
}
