#ifndef BIPHOTON_CORRELATIONS_HPP
#define BIPHOTON_CORRELATIONS_HPP

#include <complex>
#include <vector>

#include "biphoton/spectral.hpp"

namespace biphoton {

// Uniform symmetric delay grid; odd point count keeps tau = 0 on a sample.
struct TimeGrid {
    double half_span = 0.0;  // s
    int points = 0;

    double spacing() const { return 2.0 * half_span / (points - 1); }
    // mirror-exact sampling: tau(points - 1 - i) == -tau(i)
    double tau(int i) const { return spacing() * (i - (points - 1) / 2); }
    int center_index() const { return (points - 1) / 2; }
    void validate() const;
};

enum class TraceKind { g1, g2, hom };

// Real trace of delay. g1/g2 are normalized to 1 at their maximum (which sits
// at tau = 0 for these transforms); HOM is the coincidence rate with unit
// asymptote.
struct CorrelationTrace {
    TraceKind kind = TraceKind::g1;
    TimeGrid grid;
    std::vector<double> values;
};

// Wiener-Khinchin transform of the spectral intensity:
// g(tau) ~ int S(Omega) cos(Omega tau) dOmega, g(0) = 1. Even in tau.
CorrelationTrace g1(const SampledIntensity& intensity, const TimeGrid& grid);

// F~(tau) = int F(Omega) exp(i Omega tau) dOmega with the Parseval ratio
// int |F~|^2 dtau / (2 pi int |F|^2 dOmega) attached (1 when the delay grid
// covers the support).
struct TimeAmplitude {
    TimeGrid grid;
    std::vector<std::complex<double>> values;
    double parseval_ratio = 0.0;
};
TimeAmplitude time_amplitude(const SpectralAmplitude& amplitude, const TimeGrid& grid);

// Second-order correlation. complex_exponential: |F~(tau)|^2; cosine:
// |int F cos(Omega tau) dOmega|^2. The two coincide for F(-Omega) = F(Omega).
enum class G2Form { complex_exponential, cosine };
CorrelationTrace g2(const SpectralAmplitude& amplitude, const TimeGrid& grid,
                    G2Form form = G2Form::complex_exponential);

// Coincidence-rate dip R(tau) = 1 - g1(2 tau), cubic interpolation on the g1
// samples. Requires the g1 grid to cover 2 * |tau|.
CorrelationTrace hom_dip(const CorrelationTrace& g1_trace, const TimeGrid& grid);

// FWHM by outermost half crossings; for HOM, the dip full width at half depth.
double correlation_width(const CorrelationTrace& trace);

// Two photons behaving as one object at half the wavelength.
double effective_wavelength(double photon_wavelength_nm);

// Axial resolution lengths from the first-order correlation time:
// oct = c * tau, qoct = c * tau / 2.
struct TomographyResolutions {
    double oct_m = 0.0;
    double qoct_m = 0.0;
};
TomographyResolutions tomography_resolutions(double delta1_tau_s);

}  // namespace biphoton

#endif
