#include "biphoton/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

JointSpectralAmplitude joint_spectral_amplitude(const CrystalRecord& crystal,
                                                const MatchingConfig& cfg,
                                                const FrequencyGrid& signal_grid,
                                                const FrequencyGrid& idler_grid,
                                                double pump_width, double temperature_c,
                                                double field_v_per_m) {
    signal_grid.validate();
    idler_grid.validate();
    if (pump_width < 0.0) throw ValidationError("jsa: pump width must be nonnegative");

    JointSpectralAmplitude out;
    out.signal_grid = signal_grid;
    out.idler_grid = idler_grid;
    out.pump_width = pump_width;
    out.delta_pump = pump_width == 0.0;
    out.values.assign(static_cast<std::size_t>(signal_grid.points) * idler_grid.points,
                      {0.0, 0.0});

    const double L = cfg.crystal_length_m;
    const double diag_tol =
        0.5 * std::min(signal_grid.spacing(), idler_grid.spacing());
    auto envelope_at = [&](double op) {
        if (out.delta_pump) return std::abs(op) < diag_tol ? 1.0 : 0.0;
        if (std::isinf(pump_width)) return 1.0;
        return std::exp(-op * op / (2.0 * pump_width * pump_width));
    };

    const int ns = signal_grid.points;
    const int ni = idler_grid.points;
    const bool shared_lattice =
        std::abs(signal_grid.spacing() - idler_grid.spacing()) <
        1e-12 * signal_grid.spacing();
    if (shared_lattice) {
        // Omega_p = Omega_s - Omega_i lives on a lattice of ns + ni - 1
        // points, so every wavenumber is precomputable and the fill is pure
        // arithmetic.
        const auto pol = assign_polarizations(crystal, cfg);
        const double kg = cfg.grating_wavenumber(0.0);
        std::vector<double> ks(ns), ki(ni), kp(ns + ni - 1);
        for (int s = 0; s < ns; ++s)
            ks[s] = wavenumber(crystal, pol.signal, cfg.signal_omega() + signal_grid.omega(s),
                               temperature_c, field_v_per_m);
        for (int i = 0; i < ni; ++i)
            ki[i] = wavenumber(crystal, pol.idler, cfg.idler_omega() - idler_grid.omega(i),
                               temperature_c, field_v_per_m);
        const double base_op = signal_grid.omega(0) - idler_grid.omega(ni - 1);
        for (int j = 0; j < ns + ni - 1; ++j)
            kp[j] = wavenumber(crystal, pol.pump,
                               cfg.pump_omega() + base_op + j * signal_grid.spacing(),
                               temperature_c, field_v_per_m);
        for (int s = 0; s < ns; ++s) {
            const double os = signal_grid.omega(s);
            for (int i = 0; i < ni; ++i) {
                const double op = os - idler_grid.omega(i);
                const double envelope = envelope_at(op);
                if (envelope == 0.0) continue;
                const double dk = kp[s + (ni - 1 - i)] - ks[s] - ki[i] - kg;
                const double arg = 0.5 * dk * L;
                out.values[static_cast<std::size_t>(s) * ni + i] =
                    envelope * L * sinc(arg) * std::polar(1.0, -arg);
            }
        }
    } else {
        for (int s = 0; s < ns; ++s) {
            const double os = signal_grid.omega(s);
            for (int i = 0; i < ni; ++i) {
                const double oi = idler_grid.omega(i);
                const double envelope = envelope_at(os - oi);
                if (envelope == 0.0) continue;
                const double dk = pump_detuned_mismatch(crystal, cfg, os, oi,
                                                        temperature_c, field_v_per_m);
                const double arg = 0.5 * dk * L;
                out.values[static_cast<std::size_t>(s) * ni + i] =
                    envelope * L * sinc(arg) * std::polar(1.0, -arg);
            }
        }
    }
    double peak = 0.0;
    for (const auto& v : out.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw NumericalError("jsa: amplitude vanished everywhere");
    for (auto& v : out.values) v /= peak;
    out.scale = peak;
    return out;
}

double fedorov_ratio(const JointSpectralAmplitude& jsa) {
    const int ns = jsa.signal_grid.points;
    const int ni = jsa.idler_grid.points;

    SampledIntensity marginal;
    marginal.grid = jsa.signal_grid;
    marginal.values.resize(ns);
    for (int s = 0; s < ns; ++s) {
        double sum = 0.0;
        for (int i = 0; i < ni; ++i) {
            const double w = (i == 0 || i == ni - 1) ? 0.5 : 1.0;
            sum += w * std::norm(jsa.at(s, i));
        }
        marginal.values[s] = sum * jsa.idler_grid.spacing();
    }

    SampledIntensity conditional;
    conditional.grid = jsa.signal_grid;
    conditional.values.resize(ns);
    const int i0 = jsa.idler_grid.center_index();
    for (int s = 0; s < ns; ++s) conditional.values[s] = std::norm(jsa.at(s, i0));

    const double cond_peak =
        *std::max_element(conditional.values.begin(), conditional.values.end());
    if (!(cond_peak > 0.0))
        throw NumericalError("fedorov_ratio: conditional slice vanished");

    const WidthReport wm = width_metrics(marginal);
    const WidthReport wc = width_metrics(conditional);
    if (!(wc.fwhm > 2.0 * jsa.signal_grid.spacing()))
        throw NumericalError("fedorov_ratio: conditional width degenerate on this grid");
    return wm.fwhm / wc.fwhm;
}

}  // namespace biphoton
