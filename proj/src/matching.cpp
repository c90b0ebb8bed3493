#include "biphoton/matching.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

double MatchingConfig::pump_omega() const {
    return omega_from_wavelength_um(pump_wavelength_um);
}
double MatchingConfig::signal_omega() const {
    return omega_from_wavelength_um(signal_wavelength_um);
}
double MatchingConfig::idler_omega() const {
    return omega_from_wavelength_um(idler_wavelength_um);
}

double MatchingConfig::grating_wavenumber(double z_m) const {
    if (const auto* u = std::get_if<UniformPoling>(&poling))
        return two_pi / (u->period_um * 1e-6);
    if (const auto* c = std::get_if<ChirpedPoling>(&poling))
        return (c->k0_rad_per_um + c->alpha_rad_per_um2 * z_m * 1e6) * 1e6;
    return 0.0;
}

void MatchingConfig::validate() const {
    if (!(pump_wavelength_um > 0.0) || !(signal_wavelength_um > 0.0) ||
        !(idler_wavelength_um > 0.0))
        throw ValidationError("matching: wavelengths must be positive");
    const double wp = pump_omega();
    const double mismatch = std::abs(signal_omega() + idler_omega() - wp) / wp;
    if (mismatch >= 1e-12)
        throw ValidationError("matching: center frequencies violate energy conservation (" +
                              std::to_string(mismatch) + " relative)");
    if (!(crystal_length_m > 0.0))
        throw ValidationError("matching: crystal length must be positive");
    if (const auto* u = std::get_if<UniformPoling>(&poling)) {
        if (!(u->period_um > 0.0))
            throw ValidationError("matching: poling period must be positive");
    }
    const double rel_s = std::abs(signal_wavelength_um - 2.0 * pump_wavelength_um) /
                         (2.0 * pump_wavelength_um);
    const double rel_i = std::abs(idler_wavelength_um - 2.0 * pump_wavelength_um) /
                         (2.0 * pump_wavelength_um);
    const bool centers_degenerate = rel_s < 1e-12 && rel_i < 1e-12;
    if (degenerate != centers_degenerate)
        throw ValidationError("matching: degenerate flag inconsistent with center wavelengths");
    if (pump_axis_angle_rad < 0.0 || pump_axis_angle_rad > pi / 2.0)
        throw ValidationError("matching: pump axis angle outside [0, pi/2]");
    if (pump_angular_width < 0.0 || pump_spectral_width < 0.0)
        throw ValidationError("matching: pump widths must be nonnegative");
}

MatchingConfig MatchingConfig::collinear_degenerate(const std::string& crystal,
                                                    MatchingType type,
                                                    double pump_wavelength_um,
                                                    double pump_axis_angle_rad,
                                                    double crystal_length_m) {
    MatchingConfig cfg;
    cfg.crystal = crystal;
    cfg.type = type;
    cfg.degenerate = true;
    cfg.pump_wavelength_um = pump_wavelength_um;
    cfg.signal_wavelength_um = 2.0 * pump_wavelength_um;
    cfg.idler_wavelength_um = 2.0 * pump_wavelength_um;
    cfg.pump_axis_angle_rad = pump_axis_angle_rad;
    cfg.crystal_length_m = crystal_length_m;
    cfg.validate();
    return cfg;
}

MatchingConfig MatchingConfig::collinear_nondegenerate(const std::string& crystal,
                                                       MatchingType type,
                                                       double pump_wavelength_um,
                                                       double signal_wavelength_um,
                                                       double pump_axis_angle_rad,
                                                       double crystal_length_m) {
    MatchingConfig cfg;
    cfg.crystal = crystal;
    cfg.type = type;
    cfg.pump_wavelength_um = pump_wavelength_um;
    cfg.signal_wavelength_um = signal_wavelength_um;
    const double wi = omega_from_wavelength_um(pump_wavelength_um) -
                      omega_from_wavelength_um(signal_wavelength_um);
    if (!(wi > 0.0))
        throw ValidationError("matching: signal center must lie below the pump frequency");
    cfg.idler_wavelength_um = wavelength_um_from_omega(wi);
    cfg.degenerate =
        std::abs(signal_wavelength_um - 2.0 * pump_wavelength_um) < 1e-12 * pump_wavelength_um;
    cfg.pump_axis_angle_rad = pump_axis_angle_rad;
    cfg.crystal_length_m = crystal_length_m;
    cfg.validate();
    return cfg;
}

PolarizationAssignment assign_polarizations(const CrystalRecord& crystal,
                                            const MatchingConfig& cfg) {
    const double theta = cfg.pump_axis_angle_rad;
    const bool negative = crystal.symmetry == CrystalSymmetry::uniaxial_negative;
    const Polarization fast = negative ? Polarization::extraordinary(theta)
                                       : Polarization::ordinary();
    const Polarization slow = negative ? Polarization::ordinary()
                                       : Polarization::extraordinary(theta);
    PolarizationAssignment out;
    out.pump = fast;
    if (cfg.type == MatchingType::type_1) {
        if (cfg.is_poled()) {
            // QPM runs all three waves on the pump axis.
            out.signal = fast;
            out.idler = fast;
            out.description = negative ? "e(s)+e(i)->e(p), qpm" : "o(s)+o(i)->o(p), qpm";
        } else {
            out.signal = slow;
            out.idler = slow;
            out.description = negative ? "o(s)+o(i)->e(p)" : "e(s)+e(i)->o(p)";
        }
    } else {
        out.signal = slow;
        out.idler = fast;
        out.description = negative ? "o(s)+e(i)->e(p)" : "e(s)+o(i)->o(p)";
    }
    return out;
}

double collinear_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                          double omega_detuning, double temperature_c,
                          double field_v_per_m) {
    const auto pol = assign_polarizations(crystal, cfg);
    const double kp = wavenumber(crystal, pol.pump, cfg.pump_omega(), temperature_c,
                                 field_v_per_m);
    const double ks = wavenumber(crystal, pol.signal, cfg.signal_omega() + omega_detuning,
                                 temperature_c, field_v_per_m);
    const double ki = wavenumber(crystal, pol.idler, cfg.idler_omega() - omega_detuning,
                                 temperature_c, field_v_per_m);
    return kp - ks - ki - cfg.grating_wavenumber(0.0);
}

double pump_detuned_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             double signal_detuning, double idler_detuning,
                             double temperature_c, double field_v_per_m) {
    const auto pol = assign_polarizations(crystal, cfg);
    const double pump_detuning = signal_detuning - idler_detuning;
    const double kp = wavenumber(crystal, pol.pump, cfg.pump_omega() + pump_detuning,
                                 temperature_c, field_v_per_m);
    const double ks = wavenumber(crystal, pol.signal, cfg.signal_omega() + signal_detuning,
                                 temperature_c, field_v_per_m);
    const double ki = wavenumber(crystal, pol.idler, cfg.idler_omega() - idler_detuning,
                                 temperature_c, field_v_per_m);
    return kp - ks - ki - cfg.grating_wavenumber(0.0);
}

double grating_free_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             double omega_detuning, double temperature_c,
                             double field_v_per_m) {
    MatchingConfig poled = cfg;
    if (!poled.is_poled()) poled.poling = UniformPoling{1.0};  // assignment only
    const auto pol = assign_polarizations(crystal, poled);
    const double kp = wavenumber(crystal, pol.pump, cfg.pump_omega(), temperature_c,
                                 field_v_per_m);
    const double ks = wavenumber(crystal, pol.signal, cfg.signal_omega() + omega_detuning,
                                 temperature_c, field_v_per_m);
    const double ki = wavenumber(crystal, pol.idler, cfg.idler_omega() - omega_detuning,
                                 temperature_c, field_v_per_m);
    return kp - ks - ki;
}

TaylorCoefficients taylor_coefficients(const CrystalRecord& crystal,
                                       const MatchingConfig& cfg, double temperature_c,
                                       double field_v_per_m) {
    const auto pol = assign_polarizations(crystal, cfg);
    const auto dp = wavenumber_derivatives(crystal, pol.pump, cfg.pump_omega(),
                                           temperature_c, field_v_per_m);
    const auto ds = wavenumber_derivatives(crystal, pol.signal, cfg.signal_omega(),
                                           temperature_c, field_v_per_m);
    const auto di = wavenumber_derivatives(crystal, pol.idler, cfg.idler_omega(),
                                           temperature_c, field_v_per_m);
    TaylorCoefficients out;
    out.d0 = dp.k - ds.k - di.k - cfg.grating_wavenumber(0.0);
    out.d1 = -(ds.k1 - di.k1);
    out.d2 = -0.5 * (ds.k2 + di.k2);
    out.d1_error = ds.k1_error + di.k1_error;
    out.d2_error = 0.5 * (ds.k2_error + di.k2_error);
    return out;
}

BroadbandConditions broadband_conditions_report(const CrystalRecord& crystal,
                                                const MatchingConfig& cfg,
                                                double temperature_c,
                                                double field_v_per_m,
                                                const BroadbandTolerances& tol) {
    const auto pol = assign_polarizations(crystal, cfg);
    const auto dp = wavenumber_derivatives(crystal, pol.pump, cfg.pump_omega(),
                                           temperature_c, field_v_per_m);
    const auto ds = wavenumber_derivatives(crystal, pol.signal, cfg.signal_omega(),
                                           temperature_c, field_v_per_m);
    const auto di = wavenumber_derivatives(crystal, pol.idler, cfg.idler_omega(),
                                           temperature_c, field_v_per_m);
    BroadbandConditions out;
    out.center_residual = dp.k - ds.k - di.k - cfg.grating_wavenumber(0.0);
    out.group_residual = ds.k1 - di.k1;
    out.dispersion_residual = ds.k2 + di.k2;
    out.center_ok = std::abs(out.center_residual) < tol.center;
    out.group_ok = std::abs(out.group_residual) < tol.group;
    out.dispersion_ok = std::abs(out.dispersion_residual) < tol.dispersion;
    return out;
}

double solve_pump_axis_angle(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             std::optional<double> temperature_c, double field_v_per_m) {
    if (cfg.is_poled())
        throw ConfigError("solve_pump_axis_angle: expects an unpoled configuration");
    const double temp = temperature_c.value_or(crystal.reference_temperature_c);
    auto residual = [&](double theta) {
        MatchingConfig trial = cfg;
        trial.pump_axis_angle_rad = theta;
        return collinear_mismatch(crystal, trial, 0.0, temp, field_v_per_m);
    };
    const double lo = 1e-6, hi = pi / 2.0;
    double blo = 0.0, bhi = 0.0;
    if (!scan_for_bracket(residual, lo, hi, 257, blo, bhi))
        throw NumericalError(
            "solve_pump_axis_angle: no sign change over (0, pi/2); matching impossible "
            "for this configuration");
    const RootResult root = bracketed_root(residual, blo, bhi, 1e-6, 0.0, 200);
    if (!root.converged)
        throw NumericalError("solve_pump_axis_angle: root refinement stalled, best residual " +
                             std::to_string(root.residual) + " rad/m");
    return root.x;
}

double solve_poling_period(const CrystalRecord& crystal, const MatchingConfig& cfg,
                           double temperature_c, double field_v_per_m) {
    const double mismatch =
        grating_free_mismatch(crystal, cfg, 0.0, temperature_c, field_v_per_m);
    if (!(mismatch > 0.0))
        throw ConfigError("solve_poling_period: residual mismatch " +
                          std::to_string(mismatch) +
                          " rad/m is not positive; first-order QPM impossible");
    return two_pi / mismatch * 1e6;
}

TiltedFrontDerivatives tilted_front_modified(double k, double k1, double k2,
                                             double tilt_angle_rad,
                                             double dispersion_angle_rad) {
    if (!(k > 0.0)) throw ValidationError("tilted_front_modified: k must be positive");
    if (std::abs(dispersion_angle_rad) >= pi / 2.0)
        throw ValidationError("tilted_front_modified: |dispersion angle| must be < pi/2");
    const double rho = std::tan(tilt_angle_rad);
    const double alpha = std::tan(dispersion_angle_rad) / speed_of_light;
    return {k1 + alpha * rho, k2 - alpha * alpha / k};
}

NoncollinearMismatch noncollinear_mismatch(const CrystalRecord& crystal,
                                           const MatchingConfig& cfg,
                                           double omega_detuning, double q_rad_per_m,
                                           double temperature_c, double field_v_per_m) {
    const auto pol = assign_polarizations(crystal, cfg);
    const double theta_s = cfg.noncollinear ? cfg.noncollinear->signal_angle_rad : 0.0;
    const double theta_i = cfg.noncollinear ? cfg.noncollinear->idler_angle_rad : 0.0;
    const double kp = wavenumber(crystal, pol.pump, cfg.pump_omega(), temperature_c,
                                 field_v_per_m);
    const double ks = wavenumber(crystal, pol.signal, cfg.signal_omega() + omega_detuning,
                                 temperature_c, field_v_per_m);
    const double ki = wavenumber(crystal, pol.idler, cfg.idler_omega() - omega_detuning,
                                 temperature_c, field_v_per_m);
    NoncollinearMismatch out;
    out.perp = q_rad_per_m + ks * std::sin(theta_s) - ki * std::sin(theta_i);
    out.parallel = kp - ks * std::cos(theta_s) - ki * std::cos(theta_i) -
                   cfg.grating_wavenumber(0.0);
    return out;
}

NoncollinearSeries noncollinear_series(const CrystalRecord& crystal,
                                       const MatchingConfig& cfg, double temperature_c,
                                       double field_v_per_m) {
    const auto pol = assign_polarizations(crystal, cfg);
    const double theta_s = cfg.noncollinear ? cfg.noncollinear->signal_angle_rad : 0.0;
    const double theta_i = cfg.noncollinear ? cfg.noncollinear->idler_angle_rad : 0.0;
    const auto dp = wavenumber_derivatives(crystal, pol.pump, cfg.pump_omega(),
                                           temperature_c, field_v_per_m);
    const auto ds = wavenumber_derivatives(crystal, pol.signal, cfg.signal_omega(),
                                           temperature_c, field_v_per_m);
    const auto di = wavenumber_derivatives(crystal, pol.idler, cfg.idler_omega(),
                                           temperature_c, field_v_per_m);
    const double ss = std::sin(theta_s), si = std::sin(theta_i);
    const double cs = std::cos(theta_s), ci = std::cos(theta_i);
    NoncollinearSeries out;
    out.perp0 = ds.k * ss - di.k * si;
    out.perp1 = ds.k1 * ss + di.k1 * si;
    out.perp2 = 0.5 * (ds.k2 * ss - di.k2 * si);
    out.par0 = dp.k - cfg.grating_wavenumber(0.0) - ds.k * cs - di.k * ci;
    out.par1 = -(ds.k1 * cs - di.k1 * ci);
    out.par2 = -0.5 * (ds.k2 * cs + di.k2 * ci);
    return out;
}

MatchedDetuningPair pump_bandwidth_matched_detunings(double gamma, double pump_detuning) {
    if (gamma == 0.0) return {pump_detuning / 2.0, pump_detuning / 2.0};
    if (gamma * pump_detuning < 0.0)
        throw NumericalError("pump_bandwidth_matched_detunings: gamma * Omega_p < 0 has no real roots");
    const double root = std::sqrt(gamma * pump_detuning);
    return {pump_detuning / 2.0 + root, pump_detuning / 2.0 - root};
}

AnalyticWidths width_limits(const CrystalRecord& crystal, const MatchingConfig& cfg,
                            double temperature_c, double field_v_per_m) {
    const auto taylor = taylor_coefficients(crystal, cfg, temperature_c, field_v_per_m);
    const double L = cfg.crystal_length_m;
    AnalyticWidths out;

    if (cfg.type == MatchingType::type_1) {
        const double floor = 3.0 * taylor.d2_error + 1e-40;
        if (std::abs(taylor.d2) > floor) {
            out.homogeneous = {std::sqrt(two_pi / (L * std::abs(taylor.d2))), true,
                               "homogeneous-quadratic"};
        } else {
            out.homogeneous = {0.0, false, "homogeneous-quadratic"};
        }
    } else {
        const double floor = 3.0 * taylor.d1_error + 1e-40;
        if (std::abs(taylor.d1) > floor) {
            out.homogeneous = {two_pi / (L * std::abs(taylor.d1)), true,
                               "homogeneous-linear"};
        } else {
            out.homogeneous = {0.0, false, "homogeneous-linear"};
        }
    }

    const auto pol = assign_polarizations(crystal, cfg);
    const auto ds = wavenumber_derivatives(crystal, pol.signal, cfg.signal_omega(),
                                           temperature_c, field_v_per_m);
    if (!cfg.is_collinear()) {
        const double theta0 = cfg.noncollinear->signal_angle_rad;
        if (cfg.pump_angular_width > 0.0) {
            const double s = std::sin(theta0);
            if (s > 0.0 && ds.k1 > 0.0)
                out.pump_angular_spread = {cfg.pump_angular_width / (2.0 * ds.k1 * s),
                                           true, "pump-angular-spread"};
            else
                out.pump_angular_spread = {0.0, false, "pump-angular-spread"};
        }
        const double c = std::cos(theta0);
        if (ds.k2 * c > 0.0)
            out.noncollinear_gvd = {std::sqrt(two_pi / (L * ds.k2 * c)), true,
                                    "noncollinear-gvd"};
        else
            out.noncollinear_gvd = {0.0, false, "noncollinear-gvd"};
    }

    if (cfg.pump_spectral_width > 0.0) {
        const auto dp = wavenumber_derivatives(crystal, pol.pump, cfg.pump_omega(),
                                               temperature_c, field_v_per_m);
        out.gamma = (dp.k1 - ds.k1) / ds.k2;
        if (out.gamma >= 0.0) {
            const auto roots =
                pump_bandwidth_matched_detunings(out.gamma, cfg.pump_spectral_width);
            out.bandwidth_root_plus = roots.plus;
            out.bandwidth_root_minus = roots.minus;
            // Swept range of the matched detuning as the pump covers its
            // bandwidth; reduces to dOmega_p/2 when gamma = 0.
            out.pump_bandwidth = {cfg.pump_spectral_width / 2.0 +
                                      std::sqrt(out.gamma * cfg.pump_spectral_width),
                                  true, "pump-bandwidth"};
        } else {
            out.pump_bandwidth = {0.0, false, "pump-bandwidth"};
        }
    }
    return out;
}

MismatchEvaluator::MismatchEvaluator(CrystalRecord crystal, MatchingConfig cfg,
                                     std::optional<LongitudinalProfile> profile,
                                     double temperature_c, double field_v_per_m,
                                     std::string label)
    : crystal_(std::move(crystal)),
      cfg_(std::move(cfg)),
      profile_(std::move(profile)),
      temperature_c_(temperature_c),
      field_v_per_m_(field_v_per_m),
      label_(std::move(label)) {
    if (profile_ && std::abs(profile_->length_m - cfg_.crystal_length_m) >
                        1e-12 * cfg_.crystal_length_m)
        throw ConfigError("mismatch evaluator: profile domain length (" +
                          std::to_string(profile_->length_m) +
                          " m) must equal the crystal length (" +
                          std::to_string(cfg_.crystal_length_m) + " m)");
}

MismatchEvaluator MismatchEvaluator::uniform(const CrystalRecord& crystal,
                                             const MatchingConfig& cfg,
                                             double temperature_c,
                                             double field_v_per_m) {
    const std::string label = cfg.is_poled() ? "uniform-qpm" : "uniform-crystal";
    return MismatchEvaluator(crystal, cfg, std::nullopt, temperature_c, field_v_per_m,
                             label);
}

MismatchEvaluator MismatchEvaluator::with_profile(const CrystalRecord& crystal,
                                                  const MatchingConfig& cfg,
                                                  const LongitudinalProfile& profile) {
    std::string label;
    switch (profile.quantity) {
        case ProfileQuantity::temperature: label = "temperature-modulated"; break;
        case ProfileQuantity::field: label = "field-modulated"; break;
        case ProfileQuantity::poling_wavenumber: label = "poling-modulated"; break;
    }
    return MismatchEvaluator(crystal, cfg, profile, crystal.reference_temperature_c, 0.0,
                             label);
}

MismatchEvaluator MismatchEvaluator::from_config(
    const CrystalRecord& crystal, const MatchingConfig& cfg,
    const std::optional<LongitudinalProfile>& profile, double temperature_c,
    double field_v_per_m) {
    if (profile) return with_profile(crystal, cfg, *profile);
    if (const auto* c = std::get_if<ChirpedPoling>(&cfg.poling)) {
        // Express the chirp as a linear poling-wavenumber profile so the
        // quadrature sees one standard form.
        auto synthesized = LongitudinalProfile::linear(
            ProfileQuantity::poling_wavenumber, cfg.crystal_length_m, c->k0_rad_per_um,
            c->alpha_rad_per_um2 * 1e6);
        MismatchEvaluator ev(crystal, cfg, synthesized, temperature_c, field_v_per_m,
                             "chirped-poling");
        return ev;
    }
    return uniform(crystal, cfg, temperature_c, field_v_per_m);
}

std::pair<double, double> MismatchEvaluator::affine_at(double omega_detuning) const {
    if (!profile_) {
        return {collinear_mismatch(crystal_, cfg_, omega_detuning, temperature_c_,
                                   field_v_per_m_),
                0.0};
    }
    switch (profile_->quantity) {
        case ProfileQuantity::temperature: {
            const double t0 = temperature_c_;
            const double b0 = collinear_mismatch(crystal_, cfg_, omega_detuning, t0,
                                                 field_v_per_m_);
            const double b1 = collinear_mismatch(crystal_, cfg_, omega_detuning, t0 + 1.0,
                                                 field_v_per_m_);
            const double slope = b1 - b0;  // exact: the index is linear in T
            return {b0 - slope * t0, slope};
        }
        case ProfileQuantity::field: {
            const double b0 =
                collinear_mismatch(crystal_, cfg_, omega_detuning, temperature_c_, 0.0);
            const double b1 =
                collinear_mismatch(crystal_, cfg_, omega_detuning, temperature_c_, 1.0);
            return {b0, b1 - b0};
        }
        case ProfileQuantity::poling_wavenumber: {
            const double base = grating_free_mismatch(crystal_, cfg_, omega_detuning,
                                                      temperature_c_, field_v_per_m_);
            return {base, -1e6};  // profile value in rad/um
        }
    }
    throw ConfigError("mismatch evaluator: unsupported profile quantity");
}

double MismatchEvaluator::profile_value(double z_m) const {
    if (!profile_) return 0.0;
    return profile_->evaluate(z_m);
}

double MismatchEvaluator::operator()(double omega_detuning, double z_m) const {
    const auto [base, slope] = affine_at(omega_detuning);
    if (!profile_) return base;
    return base + slope * profile_->evaluate(z_m);
}

double MismatchEvaluator::transparency_limited_span() const {
    const double margin = 1.005;
    const double omega_hi =
        omega_from_wavelength_um(crystal_.transparency_min_um * margin);
    const double omega_lo =
        omega_from_wavelength_um(crystal_.transparency_max_um / margin);
    const double ws = cfg_.signal_omega();
    const double wi = cfg_.idler_omega();
    const double plus = std::min(omega_hi - ws, wi - omega_lo);
    const double minus = std::min(ws - omega_lo, omega_hi - wi);
    return std::max(0.0, std::min(plus, minus));
}

RootResult solve_matched_frequency(const MismatchEvaluator& evaluator, double z_m,
                                   double bracket_lo, double bracket_hi, double f_tol,
                                   int max_iter) {
    auto f = [&](double omega) { return evaluator(omega, z_m); };
    return bracketed_root(f, bracket_lo, bracket_hi, f_tol, 0.0, max_iter);
}

}  // namespace biphoton
