#ifndef BIPHOTON_SPECTRAL_HPP
#define BIPHOTON_SPECTRAL_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/matching.hpp"

namespace biphoton {

// Uniform detuning grid centered on zero; odd point count keeps Omega = 0 on
// a sample.
struct FrequencyGrid {
    double half_span = 0.0;  // rad/s
    int points = 0;          // odd, >= 129

    double spacing() const { return 2.0 * half_span / (points - 1); }
    // mirror-exact sampling: omega(points - 1 - i) == -omega(i)
    double omega(int i) const { return spacing() * (i - (points - 1) / 2); }
    int center_index() const { return (points - 1) / 2; }
    void validate() const;
};

struct QuadratureSpec {
    double tol = 1e-6;
    int initial_panels = 64;
    int max_panels = 1 << 20;
};

struct QuadratureConvergence {
    int panels = 0;
    double max_rel_change = 0.0;
    bool converged = true;
};

enum class PhaseMode { accumulated, paper_literal };

struct Provenance {
    std::string label;                  // producing mechanism
    double scale = 0.0;                 // pre-normalization peak |F|, in meters
    double center_wavelength_um = 0.0;  // signal center, for nm width conversions
    double length_m = 0.0;
    bool homogeneous_equivalent = false;
};

// Complex spectral amplitude on a detuning grid, peak magnitude normalized to 1.
struct SpectralAmplitude {
    FrequencyGrid grid;
    std::vector<std::complex<double>> values;
    Provenance provenance;
    std::optional<QuadratureConvergence> convergence;
};

// Real sampled intensity S = |F|^2, peak 1.
struct SampledIntensity {
    FrequencyGrid grid;
    std::vector<double> values;
    Provenance provenance;
};

// sin(x)/x with the small-|x| series for stability.
double sinc(double x);

// Closed-form amplitude of a uniform crystal:
// F = L exp(-i dk L / 2) sinc(dk L / 2), normalized to peak magnitude 1.
SpectralAmplitude amplitude_homogeneous(const CrystalRecord& crystal,
                                        const MatchingConfig& cfg,
                                        const FrequencyGrid& grid, double temperature_c,
                                        double field_v_per_m);

// Longitudinal-integral amplitude F ~ int_0^L exp(-i phi(Omega, z)) dz with
//   accumulated:   phi = int_0^z dk(Omega, z') dz'
//   paper_literal: phi = dk(Omega, z) z
// Composite Simpson with panel doubling until the max pointwise relative
// change drops below quad.tol; non-convergence at the cap is flagged, not
// thrown. Both modes coincide when dk is independent of z.
SpectralAmplitude amplitude_inhomogeneous(const CrystalRecord& crystal,
                                          const MatchingConfig& cfg,
                                          const LongitudinalProfile& profile,
                                          const FrequencyGrid& grid,
                                          PhaseMode phase_mode = PhaseMode::accumulated,
                                          const QuadratureSpec& quad = {});

// Same quadrature with the affine dispersion rows precomputed once, for
// callers that sweep many profiles over one configuration (inverse design).
class ProfileAmplitudeModel {
public:
    ProfileAmplitudeModel(const CrystalRecord& crystal, const MatchingConfig& cfg,
                          ProfileQuantity quantity, const FrequencyGrid& grid,
                          PhaseMode phase_mode, const QuadratureSpec& quad);

    SpectralAmplitude evaluate(const LongitudinalProfile& profile) const;
    const FrequencyGrid& grid() const { return grid_; }

private:
    FrequencyGrid grid_;
    PhaseMode phase_mode_;
    QuadratureSpec quad_;
    ProfileQuantity quantity_;
    double length_m_ = 0.0;
    double center_wavelength_um_ = 0.0;
    std::string label_;
    std::vector<double> base_, slope_;
};

SampledIntensity spectral_intensity(const SpectralAmplitude& amplitude);

struct WidthReport {
    double fwhm = 0.0;  // rad/s, outermost half-maximum crossings
    double fwhm_thz = 0.0;
    double fwhm_nm = 0.0;
    double range_width = 0.0;  // rad/s, outermost threshold crossings
    double range_width_thz = 0.0;
    double range_width_nm = 0.0;
    double threshold = 0.05;
    double rms_width = 0.0;  // standard deviation of S as a distribution
    int peak_count = 0;      // local maxima at prominence 0.1
};

WidthReport width_metrics(const SampledIntensity& intensity, double threshold = 0.05);

// Spectral width from the matched-frequency roots at the two crystal ends
// (profile end values). Degenerate configurations use the positive branch.
struct RootWidthEstimate {
    double width = 0.0;  // rad/s
    bool defined = false;
    double root_at_start = 0.0;
    double root_at_end = 0.0;
    std::string status;
};
RootWidthEstimate estimate_width_by_roots(const CrystalRecord& crystal,
                                          const MatchingConfig& cfg,
                                          const LongitudinalProfile& profile);

// Area under the un-normalized |F|^2 relative to a reference spectrum on the
// identical grid (the pre-normalization scales are taken from provenance).
double integral_intensity(const SpectralAmplitude& spectrum,
                          const SpectralAmplitude& reference);

// Angular intensity profile at fixed detuning: for every signal angle the
// transverse condition fixes the idler angle, and the longitudinal residual
// sets the weight sinc^2(dk_par L / 2). A positive pump angular width
// convolves over the Gaussian transverse-momentum distribution.
struct AngularSpectrum {
    std::vector<double> signal_angle_rad;
    std::vector<double> intensity;   // normalized peak 1 (when any point matched)
    std::vector<bool> matched;       // transverse root found
};
AngularSpectrum angular_spectrum(const CrystalRecord& crystal, const MatchingConfig& cfg,
                                 double omega_detuning,
                                 const std::vector<double>& signal_angles_rad,
                                 double pump_angular_width, double temperature_c,
                                 double field_v_per_m);

// Suggested half-span: 3x the largest of the analytic and root-based width
// estimates, clamped to the transparency-limited span.
double auto_half_span(const CrystalRecord& crystal, const MatchingConfig& cfg,
                      const std::optional<LongitudinalProfile>& profile,
                      double temperature_c, double field_v_per_m);

}  // namespace biphoton

#endif
