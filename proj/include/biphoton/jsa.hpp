#ifndef BIPHOTON_JSA_HPP
#define BIPHOTON_JSA_HPP

#include <complex>
#include <vector>

#include "biphoton/spectral.hpp"

namespace biphoton {

// Two-dimensional spectral amplitude over (signal, idler) detunings for a
// finite-bandwidth Gaussian pump, peak magnitude 1.
struct JointSpectralAmplitude {
    FrequencyGrid signal_grid;
    FrequencyGrid idler_grid;
    std::vector<std::complex<double>> values;  // row-major [s * idler.points + i]
    double pump_width = 0.0;                   // rad/s; 0 means delta pump
    bool delta_pump = false;
    double scale = 0.0;

    std::complex<double> at(int s, int i) const {
        return values[static_cast<std::size_t>(s) * idler_grid.points + i];
    }
};

// JSA(Os, Oi) = exp(-(Os - Oi)^2 / (2 dOp^2)) L sinc(dk L/2) exp(-i dk L/2)
// with dk evaluated at the independently detuned frequencies and the pump at
// its energy-conserving detuning Op = Os - Oi. pump_width = 0 collapses the
// envelope onto the grid diagonal (delta pump, flagged); pump_width = inf
// leaves only the phase-matching factor.
JointSpectralAmplitude joint_spectral_amplitude(const CrystalRecord& crystal,
                                                const MatchingConfig& cfg,
                                                const FrequencyGrid& signal_grid,
                                                const FrequencyGrid& idler_grid,
                                                double pump_width, double temperature_c,
                                                double field_v_per_m);

// Ratio of the signal-marginal FWHM to the conditional-slice (idler fixed at
// its center sample) FWHM. Throws NumericalError when the conditional slice
// is degenerate.
double fedorov_ratio(const JointSpectralAmplitude& jsa);

}  // namespace biphoton

#endif
