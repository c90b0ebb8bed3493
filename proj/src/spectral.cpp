#include "biphoton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

void FrequencyGrid::validate() const {
    if (points < 129 || points % 2 == 0)
        throw ValidationError("frequency grid: point count must be odd and >= 129");
    if (!(half_span > 0.0))
        throw ValidationError("frequency grid: half-span must be positive");
}

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

namespace {

// Normalizes in place to peak magnitude exactly 1; returns the peak.
double normalize_peak(std::vector<std::complex<double>>& values) {
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw NumericalError("spectral amplitude vanished everywhere");
    for (auto& v : values) v /= peak;
    return peak;
}

double center_wavelength_um(const MatchingConfig& cfg) { return cfg.signal_wavelength_um; }

}  // namespace

SpectralAmplitude amplitude_homogeneous(const CrystalRecord& crystal,
                                        const MatchingConfig& cfg,
                                        const FrequencyGrid& grid, double temperature_c,
                                        double field_v_per_m) {
    grid.validate();
    cfg.validate();
    const double L = cfg.crystal_length_m;
    SpectralAmplitude out;
    out.grid = grid;
    out.values.resize(grid.points);
    for (int i = 0; i < grid.points; ++i) {
        const double dk =
            collinear_mismatch(crystal, cfg, grid.omega(i), temperature_c, field_v_per_m);
        const double arg = 0.5 * dk * L;
        out.values[i] = L * sinc(arg) * std::polar(1.0, -arg);
    }
    out.provenance.label = cfg.is_poled() ? "uniform-qpm" : "uniform-crystal";
    out.provenance.scale = normalize_peak(out.values);
    out.provenance.center_wavelength_um = center_wavelength_um(cfg);
    out.provenance.length_m = L;
    out.provenance.homogeneous_equivalent = true;
    return out;
}

namespace {

// One Simpson pass at `panels` subdivisions. phi is the mismatch phase at the
// nodes; returns int_0^L exp(-i phi(z)) dz.
std::complex<double> integrate_exponential(const std::vector<double>& phi, double h) {
    const std::size_t n = phi.size() - 1;  // panels, even
    std::complex<double> sum = std::polar(1.0, -phi[0]) + std::polar(1.0, -phi[n]);
    for (std::size_t j = 1; j < n; j += 2) sum += 4.0 * std::polar(1.0, -phi[j]);
    for (std::size_t j = 2; j < n; j += 2) sum += 2.0 * std::polar(1.0, -phi[j]);
    return sum * (h / 3.0);
}

// Cumulative integral of dk over the uniform nodes (composite Simpson with
// the standard half-panel rule for odd nodes).
void cumulative_phase(const std::vector<double>& dk, double h, std::vector<double>& phi) {
    const std::size_t n = dk.size() - 1;
    phi.resize(dk.size());
    phi[0] = 0.0;
    for (std::size_t j = 2; j <= n; j += 2) {
        phi[j - 1] = phi[j - 2] + h / 12.0 * (5.0 * dk[j - 2] + 8.0 * dk[j - 1] - dk[j]);
        phi[j] = phi[j - 2] + h / 3.0 * (dk[j - 2] + 4.0 * dk[j - 1] + dk[j]);
    }
}

}  // namespace

namespace {

// Quadrature core shared by the one-shot and the cached-model paths.
SpectralAmplitude integrate_profile_amplitude(
    const std::vector<double>& base, const std::vector<double>& slope,
    const LongitudinalProfile& profile, const FrequencyGrid& grid, double length_m,
    PhaseMode phase_mode, const QuadratureSpec& quad) {
    auto compute = [&](int panels, std::vector<std::complex<double>>& result) {
        const double h = length_m / panels;
        std::vector<double> value(panels + 1);
        for (int j = 0; j <= panels; ++j) value[j] = profile.evaluate(j * h);
        std::vector<double> dk(panels + 1), phi(panels + 1);
        result.resize(grid.points);
        for (int i = 0; i < grid.points; ++i) {
            for (int j = 0; j <= panels; ++j) dk[j] = base[i] + slope[i] * value[j];
            if (phase_mode == PhaseMode::accumulated) {
                cumulative_phase(dk, h, phi);
            } else {
                for (int j = 0; j <= panels; ++j) phi[j] = dk[j] * (j * h);
            }
            result[i] = integrate_exponential(phi, h);
        }
    };

    int panels = std::max(2, quad.initial_panels);
    if (panels % 2) ++panels;
    std::vector<std::complex<double>> prev, current;
    compute(panels, prev);
    QuadratureConvergence convergence;
    convergence.panels = panels;
    convergence.converged = false;
    while (2 * panels <= quad.max_panels) {
        panels *= 2;
        compute(panels, current);
        double peak = 0.0;
        for (const auto& v : current) peak = std::max(peak, std::abs(v));
        double change = 0.0;
        for (int i = 0; i < grid.points; ++i)
            change = std::max(change, std::abs(current[i] - prev[i]));
        convergence.panels = panels;
        convergence.max_rel_change = peak > 0.0 ? change / peak : 0.0;
        prev.swap(current);
        if (convergence.max_rel_change < quad.tol) {
            convergence.converged = true;
            break;
        }
    }

    SpectralAmplitude out;
    out.grid = grid;
    out.values = std::move(prev);
    out.provenance.scale = normalize_peak(out.values);
    out.provenance.length_m = length_m;
    const auto* uniform = std::get_if<LongitudinalProfile::Uniform>(&profile.shape);
    out.provenance.homogeneous_equivalent = uniform != nullptr;
    out.convergence = convergence;
    return out;
}

}  // namespace

SpectralAmplitude amplitude_inhomogeneous(const CrystalRecord& crystal,
                                          const MatchingConfig& cfg,
                                          const LongitudinalProfile& profile,
                                          const FrequencyGrid& grid, PhaseMode phase_mode,
                                          const QuadratureSpec& quad) {
    grid.validate();
    cfg.validate();
    profile.validate();
    const auto evaluator = MismatchEvaluator::with_profile(crystal, cfg, profile);

    // Delta k is affine in the profile value, so the dispersion work is one
    // pass over the grid and the z-loop touches only the profile.
    std::vector<double> base(grid.points), slope(grid.points);
    for (int i = 0; i < grid.points; ++i) {
        const auto [b, s] = evaluator.affine_at(grid.omega(i));
        base[i] = b;
        slope[i] = s;
    }
    SpectralAmplitude out = integrate_profile_amplitude(
        base, slope, profile, grid, cfg.crystal_length_m, phase_mode, quad);
    out.provenance.label = evaluator.label();
    out.provenance.center_wavelength_um = center_wavelength_um(cfg);
    return out;
}

ProfileAmplitudeModel::ProfileAmplitudeModel(const CrystalRecord& crystal,
                                             const MatchingConfig& cfg,
                                             ProfileQuantity quantity,
                                             const FrequencyGrid& grid,
                                             PhaseMode phase_mode,
                                             const QuadratureSpec& quad)
    : grid_(grid),
      phase_mode_(phase_mode),
      quad_(quad),
      quantity_(quantity),
      length_m_(cfg.crystal_length_m),
      center_wavelength_um_(center_wavelength_um(cfg)) {
    grid_.validate();
    cfg.validate();
    // Probe profile of the right quantity; only its quantity matters for the
    // affine decomposition.
    const auto probe = LongitudinalProfile::uniform(quantity, cfg.crystal_length_m, 0.0);
    const auto evaluator = MismatchEvaluator::with_profile(crystal, cfg, probe);
    label_ = evaluator.label();
    base_.resize(grid_.points);
    slope_.resize(grid_.points);
    for (int i = 0; i < grid_.points; ++i) {
        const auto [b, s] = evaluator.affine_at(grid_.omega(i));
        base_[i] = b;
        slope_[i] = s;
    }
}

SpectralAmplitude ProfileAmplitudeModel::evaluate(const LongitudinalProfile& profile) const {
    if (profile.quantity != quantity_)
        throw ConfigError("profile amplitude model: profile quantity mismatch");
    if (std::abs(profile.length_m - length_m_) > 1e-12 * length_m_)
        throw ConfigError("profile amplitude model: profile length mismatch");
    profile.validate();
    SpectralAmplitude out = integrate_profile_amplitude(base_, slope_, profile, grid_,
                                                        length_m_, phase_mode_, quad_);
    out.provenance.label = label_;
    out.provenance.center_wavelength_um = center_wavelength_um_;
    return out;
}

SampledIntensity spectral_intensity(const SpectralAmplitude& amplitude) {
    SampledIntensity out;
    out.grid = amplitude.grid;
    out.provenance = amplitude.provenance;
    out.values.resize(amplitude.values.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < amplitude.values.size(); ++i) {
        out.values[i] = std::norm(amplitude.values[i]);
        peak = std::max(peak, out.values[i]);
    }
    if (peak > 0.0)
        for (auto& v : out.values) v /= peak;
    return out;
}

namespace {

// Outermost crossings of `level`, linear interpolation between samples.
// Returns false if the level is never reached.
bool outermost_crossings(const FrequencyGrid& grid, const std::vector<double>& s,
                         double level, double& left, double& right) {
    const int n = grid.points;
    int first = -1, last = -1;
    for (int i = 0; i < n; ++i) {
        if (s[i] >= level) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return false;
    if (first == 0) {
        left = grid.omega(0);
    } else {
        const double s0 = s[first - 1], s1 = s[first];
        left = grid.omega(first - 1) + (level - s0) / (s1 - s0) * grid.spacing();
    }
    if (last == n - 1) {
        right = grid.omega(n - 1);
    } else {
        const double s0 = s[last], s1 = s[last + 1];
        right = grid.omega(last) + (s0 - level) / (s0 - s1) * grid.spacing();
    }
    return true;
}

struct Peak {
    int left, right;  // plateau extent
    double height;
};

std::vector<Peak> find_peaks(const std::vector<double>& s) {
    std::vector<Peak> peaks;
    const int n = static_cast<int>(s.size());
    int i = 1;
    while (i < n - 1) {
        if (s[i] > s[i - 1]) {
            int j = i;
            while (j + 1 < n && s[j + 1] == s[i]) ++j;
            if (j + 1 < n && s[j + 1] < s[i]) peaks.push_back({i, j, s[i]});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return peaks;
}

double peak_prominence(const std::vector<double>& s, const Peak& p) {
    const int n = static_cast<int>(s.size());
    double left_base = p.height, right_base = p.height;
    for (int i = p.left - 1; i >= 0; --i) {
        if (s[i] > p.height) break;
        left_base = std::min(left_base, s[i]);
    }
    for (int i = p.right + 1; i < n; ++i) {
        if (s[i] > p.height) break;
        right_base = std::min(right_base, s[i]);
    }
    return p.height - std::max(left_base, right_base);
}

}  // namespace

WidthReport width_metrics(const SampledIntensity& intensity, double threshold) {
    const auto& s = intensity.values;
    const double peak = *std::max_element(s.begin(), s.end());
    if (!(peak > 0.0)) throw NumericalError("width_metrics: intensity is identically zero");
    std::vector<double> norm(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) norm[i] = s[i] / peak;

    WidthReport report;
    report.threshold = threshold;
    double l, r;
    if (outermost_crossings(intensity.grid, norm, 0.5, l, r)) report.fwhm = r - l;
    if (outermost_crossings(intensity.grid, norm, threshold, l, r))
        report.range_width = r - l;

    // Moments with trapezoid end weights.
    double w_sum = 0.0, mean = 0.0;
    for (int i = 0; i < intensity.grid.points; ++i) {
        const double w =
            (i == 0 || i == intensity.grid.points - 1) ? 0.5 * norm[i] : norm[i];
        w_sum += w;
        mean += w * intensity.grid.omega(i);
    }
    mean /= w_sum;
    double var = 0.0;
    for (int i = 0; i < intensity.grid.points; ++i) {
        const double w =
            (i == 0 || i == intensity.grid.points - 1) ? 0.5 * norm[i] : norm[i];
        const double d = intensity.grid.omega(i) - mean;
        var += w * d * d;
    }
    report.rms_width = std::sqrt(var / w_sum);

    for (const auto& p : find_peaks(norm))
        if (peak_prominence(norm, p) >= 0.1) ++report.peak_count;

    const double lam_um = intensity.provenance.center_wavelength_um;
    const double to_nm =
        lam_um > 0.0 ? (lam_um * 1e-6) * (lam_um * 1e-6) / (two_pi * speed_of_light) * 1e9
                     : 0.0;
    report.fwhm_thz = thz_from_omega(report.fwhm);
    report.range_width_thz = thz_from_omega(report.range_width);
    report.fwhm_nm = report.fwhm * to_nm;
    report.range_width_nm = report.range_width * to_nm;
    return report;
}

namespace {

// Matched frequency at one crystal end: positive branch for degenerate
// configurations, the sign change nearest the center for nondegenerate ones
// (the far mismatch root belongs to the mirrored band).
bool end_root(const MismatchEvaluator& evaluator, double z, bool degenerate,
              double& root) {
    const double span = evaluator.transparency_limited_span();
    auto f = [&](double omega) { return evaluator(omega, z); };
    if (std::abs(f(0.0)) <= 1e-6) {
        root = 0.0;
        return true;
    }
    double plo = 0.0, phi = 0.0;
    const bool pos = scan_for_bracket(f, 0.0, span, 2049, plo, phi);
    if (degenerate) {
        if (!pos) return false;
        root = solve_matched_frequency(evaluator, z, plo, phi).x;
        return true;
    }
    double nlo = 0.0, nhi = 0.0;
    const bool neg = scan_for_bracket(f, 0.0, -span, 2049, nlo, nhi);
    if (!pos && !neg) return false;
    const bool take_positive = pos && (!neg || std::abs(phi) <= std::abs(nhi));
    const RootResult r = take_positive ? solve_matched_frequency(evaluator, z, plo, phi)
                                       : solve_matched_frequency(evaluator, z, nhi, nlo);
    root = r.x;
    return true;
}

}  // namespace

RootWidthEstimate estimate_width_by_roots(const CrystalRecord& crystal,
                                          const MatchingConfig& cfg,
                                          const LongitudinalProfile& profile) {
    const auto evaluator = MismatchEvaluator::with_profile(crystal, cfg, profile);
    RootWidthEstimate out;
    double r0 = 0.0, rL = 0.0;
    const bool ok0 = end_root(evaluator, 0.0, cfg.degenerate, r0);
    const bool okL = end_root(evaluator, cfg.crystal_length_m, cfg.degenerate, rL);
    if (!ok0 || !okL) {
        out.defined = false;
        out.status = std::string("no matched frequency at the ") +
                     (!ok0 ? "z = 0" : "z = L") + " end";
        return out;
    }
    out.defined = true;
    out.root_at_start = r0;
    out.root_at_end = rL;
    out.width = std::abs(r0 - rL);
    out.status = "ok";
    return out;
}

double integral_intensity(const SpectralAmplitude& spectrum,
                          const SpectralAmplitude& reference) {
    if (!(reference.provenance.scale > 0.0) || !(spectrum.provenance.scale > 0.0))
        throw ConfigError("integral_intensity: missing pre-normalization reference scale");
    if (spectrum.grid.points != reference.grid.points ||
        std::abs(spectrum.grid.half_span - reference.grid.half_span) >
            1e-12 * reference.grid.half_span)
        throw ConfigError("integral_intensity: spectra must share one grid");
    auto area = [](const SpectralAmplitude& a) {
        double sum = 0.0;
        const int n = a.grid.points;
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            sum += w * std::norm(a.values[i]);
        }
        return sum * a.grid.spacing() * a.provenance.scale * a.provenance.scale;
    };
    return area(spectrum) / area(reference);
}

AngularSpectrum angular_spectrum(const CrystalRecord& crystal, const MatchingConfig& cfg,
                                 double omega_detuning,
                                 const std::vector<double>& signal_angles_rad,
                                 double pump_angular_width, double temperature_c,
                                 double field_v_per_m) {
    if (cfg.is_collinear())
        throw ConfigError("angular_spectrum: requires a noncollinear configuration");
    const auto pol = assign_polarizations(crystal, cfg);
    const double kp = wavenumber(crystal, pol.pump, cfg.pump_omega(), temperature_c,
                                 field_v_per_m);
    const double ks = wavenumber(crystal, pol.signal, cfg.signal_omega() + omega_detuning,
                                 temperature_c, field_v_per_m);
    const double ki = wavenumber(crystal, pol.idler, cfg.idler_omega() - omega_detuning,
                                 temperature_c, field_v_per_m);
    const double kg = cfg.grating_wavenumber(0.0);
    const double L = cfg.crystal_length_m;

    std::vector<double> q_nodes{0.0};
    std::vector<double> q_weights{1.0};
    if (pump_angular_width > 0.0) {
        q_nodes.clear();
        q_weights.clear();
        constexpr int nq = 41;
        for (int j = 0; j < nq; ++j) {
            const double q = -3.0 * pump_angular_width +
                             6.0 * pump_angular_width * j / (nq - 1);
            q_nodes.push_back(q);
            q_weights.push_back(std::exp(-q * q / (2.0 * pump_angular_width *
                                                   pump_angular_width)));
        }
    }
    const double weight_sum = std::accumulate(q_weights.begin(), q_weights.end(), 0.0);

    AngularSpectrum out;
    out.signal_angle_rad = signal_angles_rad;
    out.intensity.resize(signal_angles_rad.size(), 0.0);
    out.matched.resize(signal_angles_rad.size(), false);
    for (std::size_t a = 0; a < signal_angles_rad.size(); ++a) {
        const double theta_s = signal_angles_rad[a];
        double acc = 0.0;
        bool any = false;
        for (std::size_t j = 0; j < q_nodes.size(); ++j) {
            auto perp = [&](double theta_i) {
                return q_nodes[j] + ks * std::sin(theta_s) - ki * std::sin(theta_i);
            };
            double blo = 0.0, bhi = 0.0;
            if (!scan_for_bracket(perp, -pi / 3.0, pi / 3.0, 257, blo, bhi)) continue;
            const RootResult root = bracketed_root(perp, blo, bhi, 1e-9 * ki, 1e-15);
            const double theta_i = root.x;
            const double par =
                kp - ks * std::cos(theta_s) - ki * std::cos(theta_i) - kg;
            const double v = sinc(0.5 * par * L);
            acc += q_weights[j] * v * v;
            any = true;
        }
        out.intensity[a] = acc / weight_sum;
        out.matched[a] = any;
    }
    const double peak = *std::max_element(out.intensity.begin(), out.intensity.end());
    if (peak > 0.0)
        for (auto& v : out.intensity) v /= peak;
    return out;
}

double auto_half_span(const CrystalRecord& crystal, const MatchingConfig& cfg,
                      const std::optional<LongitudinalProfile>& profile,
                      double temperature_c, double field_v_per_m) {
    const auto evaluator = MismatchEvaluator::from_config(crystal, cfg, profile,
                                                          temperature_c, field_v_per_m);
    const double hard_limit = evaluator.transparency_limited_span();
    double best = 0.0;
    const auto limits = width_limits(crystal, cfg, temperature_c, field_v_per_m);
    if (limits.homogeneous.bounded) best = std::max(best, limits.homogeneous.value);
    if (limits.pump_bandwidth && limits.pump_bandwidth->bounded)
        best = std::max(best, limits.pump_bandwidth->value);
    if (profile) {
        // Root sweep across both ends; the roots are half-spans already.
        const auto est = estimate_width_by_roots(crystal, cfg, *profile);
        if (est.defined) {
            best = std::max(best, std::abs(est.root_at_start));
            best = std::max(best, std::abs(est.root_at_end));
        }
    }
    if (const auto* c = std::get_if<ChirpedPoling>(&cfg.poling)) {
        MatchingConfig unpoled = cfg;
        unpoled.poling = std::monostate{};
        auto chirp_profile = LongitudinalProfile::linear(
            ProfileQuantity::poling_wavenumber, cfg.crystal_length_m, c->k0_rad_per_um,
            c->alpha_rad_per_um2 * 1e6);
        const auto est = estimate_width_by_roots(crystal, unpoled, chirp_profile);
        if (est.defined) {
            best = std::max(best, std::abs(est.root_at_start));
            best = std::max(best, std::abs(est.root_at_end));
        }
    }
    if (!(best > 0.0)) return 0.25 * hard_limit;
    return std::min(3.0 * best, hard_limit);
}

}  // namespace biphoton
