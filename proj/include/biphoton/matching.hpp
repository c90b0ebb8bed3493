#ifndef BIPHOTON_MATCHING_HPP
#define BIPHOTON_MATCHING_HPP

#include <optional>
#include <string>
#include <variant>

#include "biphoton/crystal.hpp"
#include "biphoton/profiles.hpp"
#include "biphoton/rootfind.hpp"

namespace biphoton {

enum class MatchingType { type_1, type_2 };

struct NoncollinearGeometry {
    double signal_angle_rad = 0.0;  // internal angles to the pump axis
    double idler_angle_rad = 0.0;
};

struct UniformPoling {
    double period_um = 0.0;
};
struct ChirpedPoling {
    double k0_rad_per_um = 0.0;     // reciprocal vector at z = 0
    double alpha_rad_per_um2 = 0.0; // linear growth rate along z
};
using Poling = std::variant<std::monostate, UniformPoling, ChirpedPoling>;

// Geometry and center frequencies of one down-conversion configuration.
struct MatchingConfig {
    std::string crystal;
    MatchingType type = MatchingType::type_1;
    bool degenerate = true;
    double pump_wavelength_um = 0.0;
    double signal_wavelength_um = 0.0;  // centers; 1/lp = 1/ls + 1/li
    double idler_wavelength_um = 0.0;
    std::optional<NoncollinearGeometry> noncollinear;  // nullopt = collinear
    Poling poling;
    double pump_axis_angle_rad = 0.0;  // crystal cut, angle of k_p to optic axis
    double crystal_length_m = 0.0;
    double pump_angular_width = 0.0;   // Delta q, rad/m (0 = plane wave)
    double pump_spectral_width = 0.0;  // Delta Omega_p, rad/s (0 = monochromatic)

    double pump_omega() const;
    double signal_omega() const;
    double idler_omega() const;
    bool is_poled() const { return !std::holds_alternative<std::monostate>(poling); }
    bool is_collinear() const { return !noncollinear.has_value(); }
    // Reciprocal vector at position z (rad/m); 0 when unpoled.
    double grating_wavenumber(double z_m) const;

    void validate() const;

    static MatchingConfig collinear_degenerate(const std::string& crystal,
                                               MatchingType type,
                                               double pump_wavelength_um,
                                               double pump_axis_angle_rad,
                                               double crystal_length_m);
    static MatchingConfig collinear_nondegenerate(const std::string& crystal,
                                                  MatchingType type,
                                                  double pump_wavelength_um,
                                                  double signal_wavelength_um,
                                                  double pump_axis_angle_rad,
                                                  double crystal_length_m);
};

// Which wave is ordinary and which extraordinary. For a negative uniaxial
// crystal the birefringent conventions are
//   type-I :  o(s) + o(i) -> e(p)
//   type-II:  o(s) + e(i) -> e(p)
// and mirrored for positive uniaxial. Quasi-phase-matched type-I puts all
// three waves on the pump axis (the usual largest-tensor-element geometry),
// so poled type-I is e+e->e (negative) or o+o->o (positive).
struct PolarizationAssignment {
    Polarization pump, signal, idler;
    std::string description;  // e.g. "o(s)+o(i)->e(p)"
};
PolarizationAssignment assign_polarizations(const CrystalRecord& crystal,
                                            const MatchingConfig& cfg);

// Delta k(Omega) = k_p - k_s(omega_s0 + Omega) - k_i(omega_i0 - Omega) - k_g
// with full Sellmeier dispersion, in rad/m. Uniform T and E.
double collinear_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                          double omega_detuning, double temperature_c,
                          double field_v_per_m);

// Mismatch with independently detuned signal/idler and energy-conserving pump
// (omega_p = omega_p0 + Omega_s - Omega_i). Used by the joint spectral
// amplitude and the pump-bandwidth law.
double pump_detuned_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             double signal_detuning, double idler_detuning,
                             double temperature_c, double field_v_per_m);

// k_p - k_s - k_i with the grating term excluded but the QPM polarization
// assignment kept (all waves on the pump axis for type-I). This is the
// quantity a poling period or a poling profile compensates.
double grating_free_mismatch(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             double omega_detuning, double temperature_c,
                             double field_v_per_m);

// Quadratic model Delta k ~ D0 + D1 Omega + D2 Omega^2 about Omega = 0.
struct TaylorCoefficients {
    double d0 = 0.0;  // rad/m
    double d1 = 0.0;  // s/m
    double d2 = 0.0;  // s^2/m
    double d1_error = 0.0;
    double d2_error = 0.0;
};
TaylorCoefficients taylor_coefficients(const CrystalRecord& crystal,
                                       const MatchingConfig& cfg, double temperature_c,
                                       double field_v_per_m);

// Residuals of the three broadband-matching conditions: exact matching of the
// centers (grating-corrected when poled), group-velocity match, group-velocity
// dispersion cancellation.
struct BroadbandConditions {
    double center_residual = 0.0;      // rad/m
    double group_residual = 0.0;       // s/m
    double dispersion_residual = 0.0;  // s^2/m
    bool center_ok = false, group_ok = false, dispersion_ok = false;
};
struct BroadbandTolerances {
    double center = 1e-3;      // rad/m
    double group = 1e-13;      // s/m
    double dispersion = 1e-28; // s^2/m
};
BroadbandConditions broadband_conditions_report(const CrystalRecord& crystal,
                                                const MatchingConfig& cfg,
                                                double temperature_c,
                                                double field_v_per_m,
                                                const BroadbandTolerances& tol = {});

// Crystal cut angle solving Delta k(0) = 0 by bracketed bisection over
// (0, pi/2). Throws NumericalError when no orientation matches.
double solve_pump_axis_angle(const CrystalRecord& crystal, const MatchingConfig& cfg,
                             std::optional<double> temperature_c = std::nullopt,
                             double field_v_per_m = 0.0);

// First-order QPM period Lambda = 2 pi / (k_p - k_s0 - k_i0) in um.
// Requires a positive residual mismatch at the configured angle.
double solve_poling_period(const CrystalRecord& crystal, const MatchingConfig& cfg,
                           double temperature_c, double field_v_per_m);

// Group-delay modification from a tilted pulse front with angular dispersion:
// rho = tan(tilt), alpha = tan(dispersion)/c, k1 -> k1 + alpha rho,
// k2 -> k2 - alpha^2 / k.
struct TiltedFrontDerivatives {
    double k1 = 0.0;
    double k2 = 0.0;
};
TiltedFrontDerivatives tilted_front_modified(double k, double k1, double k2,
                                             double tilt_angle_rad,
                                             double dispersion_angle_rad);

// Transverse / longitudinal mismatch components for noncollinear geometry,
// exact dispersion at the detuned frequencies:
//   perp = q + k_s sin(theta_s) - k_i sin(theta_i)
//   par  = k_p - k_s cos(theta_s) - k_i cos(theta_i) - k_g
struct NoncollinearMismatch {
    double perp = 0.0;
    double parallel = 0.0;
};
NoncollinearMismatch noncollinear_mismatch(const CrystalRecord& crystal,
                                           const MatchingConfig& cfg,
                                           double omega_detuning, double q_rad_per_m,
                                           double temperature_c, double field_v_per_m);

// Diagnostic series coefficients of the two components in powers of Omega
// (q enters perp separately as an additive constant).
struct NoncollinearSeries {
    double perp0 = 0.0, perp1 = 0.0, perp2 = 0.0;
    double par0 = 0.0, par1 = 0.0, par2 = 0.0;
};
NoncollinearSeries noncollinear_series(const CrystalRecord& crystal,
                                       const MatchingConfig& cfg, double temperature_c,
                                       double field_v_per_m);

// Closed-form matched detunings at pump detuning Omega_p:
// Omega = Omega_p/2 +- sqrt(gamma Omega_p). gamma = 0 collapses both onto
// Omega_p/2 exactly.
struct MatchedDetuningPair {
    double plus = 0.0;
    double minus = 0.0;
};
MatchedDetuningPair pump_bandwidth_matched_detunings(double gamma, double pump_detuning);

// Analytic bandwidth estimates. Entries whose governing coefficient vanishes
// are reported unbounded instead of infinite.
struct WidthLimitEntry {
    double value = 0.0;  // rad/s
    bool bounded = false;
    std::string mechanism;
};
struct AnalyticWidths {
    WidthLimitEntry homogeneous;  // |Delta k| <= 2 pi / L on the quadratic model
    std::optional<WidthLimitEntry> pump_angular_spread;  // transverse matching bound
    std::optional<WidthLimitEntry> noncollinear_gvd;     // longitudinal bound
    std::optional<WidthLimitEntry> pump_bandwidth;       // sqrt(gamma dOmega_p) law
    double gamma = 0.0;          // (k1_p0 - k1_0) / k2_0, set with pump_bandwidth
    double bandwidth_root_plus = 0.0;   // matched detunings at Omega_p = dOmega_p
    double bandwidth_root_minus = 0.0;
};
AnalyticWidths width_limits(const CrystalRecord& crystal, const MatchingConfig& cfg,
                            double temperature_c, double field_v_per_m);

// Evaluable mismatch (Omega, z) -> rad/m closed over a configuration, a
// crystal and an optional longitudinal profile. The index corrections are
// linear in temperature and field, so Delta k is affine in the profile value;
// affine_at exposes that decomposition for fast quadrature.
class MismatchEvaluator {
public:
    // Uniform crystal held at (T, E).
    static MismatchEvaluator uniform(const CrystalRecord& crystal,
                                     const MatchingConfig& cfg, double temperature_c,
                                     double field_v_per_m);
    // Crystal modulated by the profile; the complementary quantity is held at
    // the reference temperature / zero field. A poling-wavenumber profile
    // replaces the configured grating.
    static MismatchEvaluator with_profile(const CrystalRecord& crystal,
                                          const MatchingConfig& cfg,
                                          const LongitudinalProfile& profile);
    // For a chirped-poling configuration without an explicit profile.
    static MismatchEvaluator from_config(const CrystalRecord& crystal,
                                         const MatchingConfig& cfg,
                                         const std::optional<LongitudinalProfile>& profile,
                                         double temperature_c, double field_v_per_m);

    double operator()(double omega_detuning, double z_m) const;
    // {base, slope}: Delta k = base + slope * profile_value.
    std::pair<double, double> affine_at(double omega_detuning) const;
    double profile_value(double z_m) const;
    bool has_profile() const { return profile_.has_value(); }
    double length() const { return cfg_.crystal_length_m; }
    const std::string& label() const { return label_; }
    const MatchingConfig& config() const { return cfg_; }
    const CrystalRecord& crystal() const { return crystal_; }

    // Largest |Omega| for which both detuned wavelengths stay transparent.
    double transparency_limited_span() const;

private:
    MismatchEvaluator(CrystalRecord crystal, MatchingConfig cfg,
                      std::optional<LongitudinalProfile> profile, double temperature_c,
                      double field_v_per_m, std::string label);

    CrystalRecord crystal_;
    MatchingConfig cfg_;
    std::optional<LongitudinalProfile> profile_;
    double temperature_c_ = 0.0;
    double field_v_per_m_ = 0.0;
    std::string label_;
};

// Root of Delta k(Omega, z) = 0 inside [bracket_lo, bracket_hi]; bracket
// endpoints must straddle a sign change. Non-convergence after the iteration
// cap returns the best iterate flagged converged = false.
RootResult solve_matched_frequency(const MismatchEvaluator& evaluator, double z_m,
                                   double bracket_lo, double bracket_hi,
                                   double f_tol = 1e-6, int max_iter = 200);

}  // namespace biphoton

#endif
