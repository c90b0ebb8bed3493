#include "biphoton/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

void TimeGrid::validate() const {
    if (points < 3 || points % 2 == 0)
        throw ValidationError("time grid: point count must be odd and >= 3");
    if (!(half_span > 0.0)) throw ValidationError("time grid: half-span must be positive");
}

namespace {

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

CorrelationTrace g1(const SampledIntensity& intensity, const TimeGrid& grid) {
    grid.validate();
    const int nw = intensity.grid.points;
    bool positive = false;
    for (double v : intensity.values) {
        if (v < 0.0) throw ValidationError("g1: spectral intensity must be nonnegative");
        if (v > 0.0) positive = true;
    }
    if (!positive) throw ValidationError("g1: spectral intensity vanished");

    CorrelationTrace trace;
    trace.kind = TraceKind::g1;
    trace.grid = grid;
    trace.values.resize(grid.points);
    for (int j = 0; j < grid.points; ++j) {
        const double tau = grid.tau(j);
        double acc = 0.0;
        for (int i = 0; i < nw; ++i)
            acc += trapezoid_weight(i, nw) * intensity.values[i] *
                   std::cos(intensity.grid.omega(i) * tau);
        trace.values[j] = acc;
    }
    const double at_zero = trace.values[grid.center_index()];
    for (auto& v : trace.values) v /= at_zero;
    return trace;
}

TimeAmplitude time_amplitude(const SpectralAmplitude& amplitude, const TimeGrid& grid) {
    grid.validate();
    const int nw = amplitude.grid.points;
    TimeAmplitude out;
    out.grid = grid;
    out.values.resize(grid.points);
    for (int j = 0; j < grid.points; ++j) {
        const double tau = grid.tau(j);
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < nw; ++i)
            acc += trapezoid_weight(i, nw) * amplitude.values[i] *
                   std::polar(1.0, amplitude.grid.omega(i) * tau);
        out.values[j] = acc * amplitude.grid.spacing();
    }
    double time_energy = 0.0;
    for (int j = 0; j < grid.points; ++j)
        time_energy += trapezoid_weight(j, grid.points) * std::norm(out.values[j]);
    time_energy *= grid.spacing();
    double spectral_energy = 0.0;
    for (int i = 0; i < nw; ++i)
        spectral_energy += trapezoid_weight(i, nw) * std::norm(amplitude.values[i]);
    spectral_energy *= amplitude.grid.spacing();
    out.parseval_ratio = time_energy / (two_pi * spectral_energy);
    return out;
}

CorrelationTrace g2(const SpectralAmplitude& amplitude, const TimeGrid& grid,
                    G2Form form) {
    grid.validate();
    CorrelationTrace trace;
    trace.kind = TraceKind::g2;
    trace.grid = grid;
    trace.values.resize(grid.points);
    if (form == G2Form::complex_exponential) {
        const TimeAmplitude ta = time_amplitude(amplitude, grid);
        for (int j = 0; j < grid.points; ++j) trace.values[j] = std::norm(ta.values[j]);
    } else {
        const int nw = amplitude.grid.points;
        for (int j = 0; j < grid.points; ++j) {
            const double tau = grid.tau(j);
            std::complex<double> acc{0.0, 0.0};
            for (int i = 0; i < nw; ++i)
                acc += trapezoid_weight(i, nw) * amplitude.values[i] *
                       std::cos(amplitude.grid.omega(i) * tau);
            trace.values[j] = std::norm(acc);
        }
    }
    const double peak = *std::max_element(trace.values.begin(), trace.values.end());
    if (!(peak > 0.0)) throw NumericalError("g2: trace vanished");
    for (auto& v : trace.values) v /= peak;
    return trace;
}

namespace {

// Catmull-Rom interpolation on a uniform grid, clamped ends.
double cubic_interpolate(const CorrelationTrace& trace, double tau) {
    const TimeGrid& g = trace.grid;
    const double x = (tau + g.half_span) / g.spacing();
    const int n = g.points;
    if (x <= 0.0) return trace.values.front();
    if (x >= n - 1) return trace.values.back();
    const int j = std::min(static_cast<int>(x), n - 2);
    const double t = x - j;
    const double p0 = trace.values[std::max(j - 1, 0)];
    const double p1 = trace.values[j];
    const double p2 = trace.values[j + 1];
    const double p3 = trace.values[std::min(j + 2, n - 1)];
    return p1 + 0.5 * t *
                    (p2 - p0 +
                     t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

CorrelationTrace hom_dip(const CorrelationTrace& g1_trace, const TimeGrid& grid) {
    grid.validate();
    if (g1_trace.kind != TraceKind::g1)
        throw ValidationError("hom_dip: input trace must be a g1 trace");
    if (2.0 * grid.half_span > g1_trace.grid.half_span * (1.0 + 1e-12))
        throw ValidationError("hom_dip: g1 grid does not cover 2 tau");
    CorrelationTrace trace;
    trace.kind = TraceKind::hom;
    trace.grid = grid;
    trace.values.resize(grid.points);
    for (int j = 0; j < grid.points; ++j)
        trace.values[j] = 1.0 - cubic_interpolate(g1_trace, 2.0 * grid.tau(j));
    return trace;
}

double correlation_width(const CorrelationTrace& trace) {
    const int n = trace.grid.points;
    // HOM measures depth below the unit asymptote; g1/g2 measure height.
    std::vector<double> profile(trace.values);
    if (trace.kind == TraceKind::hom)
        for (auto& v : profile) v = 1.0 - v;
    const double peak = *std::max_element(profile.begin(), profile.end());
    if (!(peak > 0.0)) throw NumericalError("correlation_width: empty trace");
    const double level = 0.5 * peak;

    int first = -1, last = -1;
    for (int i = 0; i < n; ++i) {
        if (profile[i] >= level) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first <= 0 && last >= n - 1)
        throw NumericalError("correlation_width: no half-level crossing inside the grid");
    double left, right;
    if (first == 0) {
        left = trace.grid.tau(0);
    } else {
        const double a = profile[first - 1], b = profile[first];
        left = trace.grid.tau(first - 1) + (level - a) / (b - a) * trace.grid.spacing();
    }
    if (last == n - 1) {
        right = trace.grid.tau(n - 1);
    } else {
        const double a = profile[last], b = profile[last + 1];
        right = trace.grid.tau(last) + (a - level) / (a - b) * trace.grid.spacing();
    }
    return right - left;
}

double effective_wavelength(double photon_wavelength_nm) {
    if (!(photon_wavelength_nm > 0.0))
        throw ValidationError("effective_wavelength: wavelength must be positive");
    return photon_wavelength_nm / 2.0;
}

TomographyResolutions tomography_resolutions(double delta1_tau_s) {
    if (!(delta1_tau_s > 0.0))
        throw ValidationError("tomography_resolutions: correlation time must be positive");
    const double oct = speed_of_light * delta1_tau_s;
    return {oct, oct / 2.0};
}

}  // namespace biphoton
