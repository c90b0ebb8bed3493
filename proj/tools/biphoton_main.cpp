// Command-line front end: spectra, sweeps, correlation traces, phase-matching
// reports and inverse profile design for parametric down-conversion sources.

#include <iostream>

#include <CLI11.hpp>

#include "biphoton/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "biphoton - spectral workbench for parametric down-conversion sources\n"
        "Exit codes: 0 ok, 2 config/parse, 3 validation, 4 numerical, 5 "
        "non-convergence under --strict."};
    app.require_subcommand(1);

    std::string catalog_path;
    auto* validate =
        app.add_subcommand("catalog-validate", "Check every record of a crystal catalog");
    validate->add_option("catalog", catalog_path, "catalog JSON file")->required();

    biphoton::CommandOptions options;
    auto add_common = [&](CLI::App* cmd, bool wants_gnuplot) {
        cmd->add_option("-c,--config", options.config, "simulation config JSON")
            ->required();
        cmd->add_option("-o,--output", options.output_prefix,
                        "output path prefix (default: out)");
        cmd->add_flag("--strict", options.strict,
                      "fail on numerical warnings instead of flagging them");
        if (wants_gnuplot)
            cmd->add_flag("--gnuplot", options.gnuplot,
                          "also write a plain-text gnuplot script");
    };

    auto* spectrum = app.add_subcommand(
        "spectrum", "Spectral amplitude and intensity -> CSV + JSON summary");
    add_common(spectrum, true);

    auto* sweep = app.add_subcommand(
        "sweep",
        "Width/intensity sweep over one parameter: delta_t (K), gradient (K/m), "
        "chirp_alpha (rad/um^2), field (kV/cm), length (mm), pump_dq (rad/m), "
        "pump_domega_p (THz)");
    add_common(sweep, false);
    sweep->add_option("--param", options.sweep_parameter, "parameter name")->required();
    sweep->add_option("--values", options.sweep_values, "parameter values")
        ->required()
        ->delimiter(',');

    auto* correlations = app.add_subcommand(
        "correlations", "g1/g2/HOM traces plus correlation-time summary");
    add_common(correlations, false);

    auto* design = app.add_subcommand(
        "design", "Inverse profile design against a target spectral shape");
    design->add_option("-p,--problem", options.config, "design problem JSON")->required();
    design->add_option("-o,--output", options.output_prefix, "output path prefix");
    design->add_flag("--strict", options.strict, "exit 5 when the search fails to converge");

    auto* phase_match = app.add_subcommand(
        "phase-match", "Mismatch curve, Taylor structure, width limits, QPM period");
    add_common(phase_match, false);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed())
        return biphoton::cmd_catalog_validate(catalog_path, std::cout);
    if (spectrum->parsed()) return biphoton::cmd_spectrum(options, std::cout);
    if (sweep->parsed()) return biphoton::cmd_sweep(options, std::cout);
    if (correlations->parsed()) return biphoton::cmd_correlations(options, std::cout);
    if (design->parsed()) return biphoton::cmd_design(options, std::cout);
    if (phase_match->parsed()) return biphoton::cmd_phase_match(options, std::cout);
    return biphoton::exit_config;
}
