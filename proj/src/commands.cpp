#include "biphoton/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "biphoton/config.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/correlations.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/io_util.hpp"

namespace biphoton {

using nlohmann::json;

namespace {

int run_guarded(std::ostream& out, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& err) {
        out << "error (parse): " << err.what() << "\n";
        return exit_config;
    } catch (const ConfigError& err) {
        out << "error (config): " << err.what() << "\n";
        return exit_config;
    } catch (const ValidationError& err) {
        out << "error (validation): " << err.what() << "\n";
        return exit_validation;
    } catch (const NumericalError& err) {
        out << "error (numerical): " << err.what() << "\n";
        return exit_numerical;
    }
}

std::string spectrum_csv(const SpectralAmplitude& amplitude) {
    CsvWriter csv({"omega_rad_per_s", "nu_detuning_thz", "lambda_nm", "re_f", "im_f", "s"});
    const double ws0 = omega_from_wavelength_um(amplitude.provenance.center_wavelength_um);
    for (int i = 0; i < amplitude.grid.points; ++i) {
        const double omega = amplitude.grid.omega(i);
        const double lambda_nm = two_pi * speed_of_light / (ws0 + omega) * 1e9;
        csv.add_row({omega, thz_from_omega(omega), lambda_nm,
                     amplitude.values[i].real(), amplitude.values[i].imag(),
                     std::norm(amplitude.values[i])});
    }
    return csv.str();
}

json width_json(const WidthReport& w) {
    return json{{"fwhm_rad_per_s", w.fwhm},
                {"fwhm_thz", w.fwhm_thz},
                {"fwhm_nm", w.fwhm_nm},
                {"range_width_rad_per_s", w.range_width},
                {"range_width_thz", w.range_width_thz},
                {"range_width_nm", w.range_width_nm},
                {"range_threshold", w.threshold},
                {"rms_width_rad_per_s", w.rms_width},
                {"peak_count", w.peak_count}};
}

struct SpectrumRun {
    SpectralAmplitude amplitude;
    SpectralAmplitude homogeneous_reference;
    WidthReport widths;
    double integral_ratio = 1.0;
};

SpectrumRun compute_spectrum(SimulationConfig& config) {
    config.resolve_angle();
    const CrystalRecord& crystal = config.crystal();
    const FrequencyGrid grid = config.make_grid();
    SpectrumRun run;
    run.homogeneous_reference =
        amplitude_homogeneous(crystal, config.matching, grid,
                              config.ambient_temperature_c, config.ambient_field_v_per_m);
    const bool chirped = std::holds_alternative<ChirpedPoling>(config.matching.poling);
    if (config.profile) {
        run.amplitude =
            amplitude_inhomogeneous(crystal, config.matching, *config.profile, grid,
                                    config.phase_mode, config.quadrature);
    } else if (chirped) {
        const auto& c = std::get<ChirpedPoling>(config.matching.poling);
        const auto profile = LongitudinalProfile::linear(
            ProfileQuantity::poling_wavenumber, config.matching.crystal_length_m,
            c.k0_rad_per_um, c.alpha_rad_per_um2 * 1e6);
        run.amplitude = amplitude_inhomogeneous(crystal, config.matching, profile, grid,
                                                config.phase_mode, config.quadrature);
        run.amplitude.provenance.label = "chirped-poling";
    } else {
        run.amplitude = run.homogeneous_reference;
    }
    run.widths = width_metrics(spectral_intensity(run.amplitude));
    run.integral_ratio = integral_intensity(run.amplitude, run.homogeneous_reference);
    return run;
}

json spectrum_summary(const SimulationConfig& config, const SpectrumRun& run) {
    const auto assignment = assign_polarizations(config.crystal(), config.matching);
    json summary;
    summary["crystal"] = config.crystal_name;
    summary["provenance"] = run.amplitude.provenance.label;
    summary["homogeneous_equivalent"] = run.amplitude.provenance.homogeneous_equivalent;
    summary["polarizations"] = assignment.description;
    summary["pump_axis_angle_deg"] = config.matching.pump_axis_angle_rad * 180.0 / pi;
    summary["grid_points"] = run.amplitude.grid.points;
    summary["grid_half_span_thz"] = thz_from_omega(run.amplitude.grid.half_span);
    summary["widths"] = width_json(run.widths);
    summary["integral_intensity_ratio"] = run.integral_ratio;
    if (run.amplitude.convergence) {
        summary["quadrature"] = {{"panels", run.amplitude.convergence->panels},
                                 {"max_rel_change", run.amplitude.convergence->max_rel_change},
                                 {"converged", run.amplitude.convergence->converged}};
    }
    return summary;
}

void maybe_write_gnuplot(const CommandOptions& options,
                         const std::filesystem::path& csv_path) {
    if (!options.gnuplot) return;
    std::string script;
    script += "set datafile separator ','\n";
    script += "set xlabel 'detuning (THz)'\n";
    script += "set ylabel 'S (normalized)'\n";
    script += "plot '" + csv_path.filename().string() + "' using 2:6 with lines title 'S'\n";
    std::filesystem::path gp = options.output_prefix;
    gp += "_spectrum.gp";
    write_file_atomic(gp, script);
}

bool quadrature_flagged(const SpectralAmplitude& amplitude) {
    return amplitude.convergence && !amplitude.convergence->converged;
}

}  // namespace

int cmd_catalog_validate(const std::filesystem::path& catalog_path, std::ostream& out) {
    return run_guarded(out, [&] {
        const Catalog catalog = load_catalog(catalog_path);
        if (catalog.records.empty())
            throw ParseError(catalog_path.string() + ": catalog holds no records");
        for (const auto& rec : catalog.records) out << rec.name << ": pass\n";
        out << catalog.records.size() << " record(s) valid\n";
        return exit_ok;
    });
}

int cmd_spectrum(const CommandOptions& options, std::ostream& out) {
    return run_guarded(out, [&] {
        SimulationConfig config = load_simulation_config(options.config);
        SpectrumRun run = compute_spectrum(config);

        std::filesystem::path csv_path = options.output_prefix;
        csv_path += "_spectrum.csv";
        write_file_atomic(csv_path, spectrum_csv(run.amplitude));
        maybe_write_gnuplot(options, csv_path);

        json summary = spectrum_summary(config, run);
        std::filesystem::path json_path = options.output_prefix;
        json_path += "_summary.json";
        write_file_atomic(json_path, summary.dump(2) + "\n");

        out << "spectrum: " << csv_path.string() << "\n";
        out << "summary:  " << json_path.string() << "\n";
        if (quadrature_flagged(run.amplitude)) {
            out << "warning: quadrature did not reach its tolerance\n";
            if (options.strict) return exit_numerical;
        }
        return exit_ok;
    });
}

int cmd_sweep(const CommandOptions& options, std::ostream& out) {
    return run_guarded(out, [&] {
        if (options.sweep_values.empty())
            throw ConfigError("sweep: at least one --values entry required");
        const std::string& param = options.sweep_parameter;
        const bool analytic = param == "pump_dq" || param == "pump_domega_p";

        CsvWriter csv({"param", "fwhm_thz", "range_width_thz", "integral_intensity"});
        bool flagged = false;
        for (double value : options.sweep_values) {
            SimulationConfig config = load_simulation_config(options.config);
            const double L = config.matching.crystal_length_m;
            if (param == "delta_t") {
                double start = config.ambient_temperature_c;
                if (config.profile &&
                    config.profile->quantity == ProfileQuantity::temperature)
                    start = config.profile->evaluate(0.0);
                config.profile = LongitudinalProfile::linear(ProfileQuantity::temperature,
                                                             L, start, value / L);
            } else if (param == "gradient") {
                double start = config.ambient_temperature_c;
                if (config.profile &&
                    config.profile->quantity == ProfileQuantity::temperature)
                    start = config.profile->evaluate(0.0);
                config.profile = LongitudinalProfile::linear(ProfileQuantity::temperature,
                                                             L, start, value);
            } else if (param == "chirp_alpha") {
                double k0 = 0.0;
                if (const auto* u = std::get_if<UniformPoling>(&config.matching.poling))
                    k0 = two_pi / u->period_um;
                else if (const auto* c =
                             std::get_if<ChirpedPoling>(&config.matching.poling))
                    k0 = c->k0_rad_per_um;
                else
                    throw ConfigError("sweep chirp_alpha: config must specify poling");
                config.matching.poling = ChirpedPoling{k0, value};
                config.profile.reset();
            } else if (param == "field") {
                config.profile = LongitudinalProfile::uniform(ProfileQuantity::field, L,
                                                              value * 1e5);
            } else if (param == "length") {
                if (config.profile)
                    throw ConfigError("sweep length: only homogeneous configs supported");
                config.matching.crystal_length_m = value * 1e-3;
            } else if (param == "pump_dq") {
                config.matching.pump_angular_width = value;
            } else if (param == "pump_domega_p") {
                config.matching.pump_spectral_width = omega_from_thz(value);
            } else {
                throw ConfigError("sweep: unknown parameter '" + param +
                                  "' (expected delta_t, gradient, chirp_alpha, field, "
                                  "length, pump_dq or pump_domega_p)");
            }

            if (analytic) {
                config.resolve_angle();
                const auto limits =
                    width_limits(config.crystal(), config.matching,
                                 config.ambient_temperature_c, config.ambient_field_v_per_m);
                const auto& entry = param == "pump_dq" ? limits.pump_angular_spread
                                                       : limits.pump_bandwidth;
                const double width =
                    entry && entry->bounded ? thz_from_omega(entry->value) : 0.0;
                csv.add_row({value, width, width,
                             std::numeric_limits<double>::quiet_NaN()});
                continue;
            }

            SpectrumRun run = compute_spectrum(config);
            flagged = flagged || quadrature_flagged(run.amplitude);
            csv.add_row({value, run.widths.fwhm_thz, run.widths.range_width_thz,
                         run.integral_ratio});
        }

        std::filesystem::path csv_path = options.output_prefix;
        csv_path += "_sweep.csv";
        write_file_atomic(csv_path, csv.str());
        out << "sweep: " << csv_path.string() << "\n";
        if (flagged) {
            out << "warning: quadrature did not reach its tolerance at one or more points\n";
            if (options.strict) return exit_numerical;
        }
        return exit_ok;
    });
}

int cmd_correlations(const CommandOptions& options, std::ostream& out) {
    return run_guarded(out, [&] {
        SimulationConfig config = load_simulation_config(options.config);
        SpectrumRun run = compute_spectrum(config);
        const SampledIntensity intensity = spectral_intensity(run.amplitude);

        // Delay grid covering 8x the estimated coherence time on both sides.
        const double coherence = two_pi / run.widths.fwhm;
        TimeGrid tau_grid{8.0 * coherence, 4097};
        const CorrelationTrace trace_g1 = g1(intensity, tau_grid);
        const CorrelationTrace trace_g2 =
            g2(run.amplitude, tau_grid, G2Form::complex_exponential);
        TimeGrid hom_grid{tau_grid.half_span / 2.0, 2049};
        const CorrelationTrace trace_hom = hom_dip(trace_g1, hom_grid);

        // Zero-phase reference: same |F|, flat phase.
        SpectralAmplitude flat = run.amplitude;
        for (auto& v : flat.values) v = std::abs(v);
        const CorrelationTrace trace_g2_flat =
            g2(flat, tau_grid, G2Form::complex_exponential);

        const double d1 = correlation_width(trace_g1);
        const double d2 = correlation_width(trace_g2);
        const double d2_flat = correlation_width(trace_g2_flat);
        const TimeAmplitude ta = time_amplitude(run.amplitude, tau_grid);
        const auto resolutions = tomography_resolutions(d1);

        auto trace_csv = [](const CorrelationTrace& t) {
            CsvWriter csv({"tau_s", "value"});
            for (int i = 0; i < t.grid.points; ++i)
                csv.add_row({t.grid.tau(i), t.values[i]});
            return csv.str();
        };
        auto path_for = [&](const char* stem) {
            std::filesystem::path p = options.output_prefix;
            p += stem;
            return p;
        };
        write_file_atomic(path_for("_g1.csv"), trace_csv(trace_g1));
        write_file_atomic(path_for("_g2.csv"), trace_csv(trace_g2));
        write_file_atomic(path_for("_hom.csv"), trace_csv(trace_hom));

        json summary;
        summary["delta1_tau_s"] = d1;
        summary["delta2_tau_s"] = d2;
        summary["delta2_tau_zero_phase_s"] = d2_flat;
        summary["fourier_excess_ratio"] = d2 / d2_flat;
        summary["hom_dip_fwhm_s"] = correlation_width(trace_hom);
        summary["parseval_ratio"] = ta.parseval_ratio;
        summary["oct_resolution_m"] = resolutions.oct_m;
        summary["qoct_resolution_m"] = resolutions.qoct_m;
        summary["effective_wavelength_nm"] =
            effective_wavelength(run.amplitude.provenance.center_wavelength_um * 1e3);
        summary["spectral_widths"] = width_json(run.widths);
        write_file_atomic(path_for("_correlations.json"), summary.dump(2) + "\n");

        out << "correlations: " << path_for("_correlations.json").string() << "\n";
        if (std::abs(ta.parseval_ratio - 1.0) > 0.05)
            out << "warning: delay grid too short for the spectral support "
                   "(parseval ratio "
                << format_double(ta.parseval_ratio) << ")\n";
        if (quadrature_flagged(run.amplitude)) {
            out << "warning: quadrature did not reach its tolerance\n";
            if (options.strict) return exit_numerical;
        }
        return exit_ok;
    });
}

int cmd_design(const CommandOptions& options, std::ostream& out) {
    return run_guarded(out, [&] {
        DesignDocument doc = load_design_problem(options.config);
        const DesignResult result = design_profile(doc.problem);

        json report;
        report["parameters"] = result.parameters;
        report["loss"] = result.loss_value;
        report["evaluations"] = result.evaluations;
        report["converged"] = result.converged;
        report["best_restart"] = result.best_restart;
        report["loss_trace"] = result.loss_trace;

        std::filesystem::path json_path = options.output_prefix;
        json_path += "_design.json";
        write_file_atomic(json_path, report.dump(2) + "\n");
        std::filesystem::path csv_path = options.output_prefix;
        csv_path += "_achieved.csv";
        write_file_atomic(csv_path, spectrum_csv(result.spectrum));

        out << "design: " << json_path.string() << " (loss "
            << format_double(result.loss_value) << ")\n";
        if (!result.converged) {
            out << "warning: simplex did not converge within its evaluation budget\n";
            if (options.strict) return exit_unconverged;
        }
        return exit_ok;
    });
}

int cmd_phase_match(const CommandOptions& options, std::ostream& out) {
    return run_guarded(out, [&] {
        SimulationConfig config = load_simulation_config(options.config);
        config.resolve_angle();
        const CrystalRecord& crystal = config.crystal();
        const MatchingConfig& cfg = config.matching;
        const double temp = config.ambient_temperature_c;
        const double field = config.ambient_field_v_per_m;

        const FrequencyGrid grid = config.make_grid();
        CsvWriter csv({"omega_rad_per_s", "delta_k_rad_per_m"});
        for (int i = 0; i < grid.points; ++i)
            csv.add_row({grid.omega(i),
                         collinear_mismatch(crystal, cfg, grid.omega(i), temp, field)});
        std::filesystem::path csv_path = options.output_prefix;
        csv_path += "_mismatch.csv";
        write_file_atomic(csv_path, csv.str());

        const auto taylor = taylor_coefficients(crystal, cfg, temp, field);
        const auto conditions = broadband_conditions_report(crystal, cfg, temp, field);
        const auto limits = width_limits(crystal, cfg, temp, field);
        const auto assignment = assign_polarizations(crystal, cfg);

        json report;
        report["polarizations"] = assignment.description;
        report["pump_axis_angle_deg"] = cfg.pump_axis_angle_rad * 180.0 / pi;
        report["taylor"] = {{"d0_rad_per_m", taylor.d0},
                            {"d1_s_per_m", taylor.d1},
                            {"d2_s2_per_m", taylor.d2}};
        report["broadband_conditions"] = {
            {"center_residual_rad_per_m", conditions.center_residual},
            {"group_residual_s_per_m", conditions.group_residual},
            {"dispersion_residual_s2_per_m", conditions.dispersion_residual},
            {"center_ok", conditions.center_ok},
            {"group_ok", conditions.group_ok},
            {"dispersion_ok", conditions.dispersion_ok}};
        auto entry_json = [](const WidthLimitEntry& e) {
            return json{{"mechanism", e.mechanism},
                        {"bounded", e.bounded},
                        {"value_rad_per_s", e.value},
                        {"value_thz", thz_from_omega(e.value)}};
        };
        report["width_limits"] = json::array();
        report["width_limits"].push_back(entry_json(limits.homogeneous));
        if (limits.pump_angular_spread)
            report["width_limits"].push_back(entry_json(*limits.pump_angular_spread));
        if (limits.noncollinear_gvd)
            report["width_limits"].push_back(entry_json(*limits.noncollinear_gvd));
        if (limits.pump_bandwidth) {
            report["width_limits"].push_back(entry_json(*limits.pump_bandwidth));
            report["pump_bandwidth_gamma_rad_per_s"] = limits.gamma;
            report["pump_bandwidth_roots_rad_per_s"] = {limits.bandwidth_root_plus,
                                                        limits.bandwidth_root_minus};
        }
        try {
            report["qpm_period_um"] = solve_poling_period(crystal, cfg, temp, field);
        } catch (const ConfigError&) {
            report["qpm_period_um"] = nullptr;
        }

        std::filesystem::path json_path = options.output_prefix;
        json_path += "_phase_match.json";
        write_file_atomic(json_path, report.dump(2) + "\n");
        out << "phase-match: " << json_path.string() << "\n";
        return exit_ok;
    });
}

}  // namespace biphoton
