#ifndef BIPHOTON_SELLMEIER_HPP
#define BIPHOTON_SELLMEIER_HPP

#include <string>
#include <vector>

namespace biphoton {

struct SellmeierResonance {
    double b = 0.0;      // dimensionless oscillator strength
    double c_um2 = 0.0;  // pole location, um^2
};

// Dispersion formula  n^2(lambda) = A + sum_i B_i lambda^2/(lambda^2 - C_i) - D lambda^2
// with lambda in micrometers.
struct SellmeierForm {
    double a = 0.0;
    std::vector<SellmeierResonance> resonances;
    double d_per_um2 = 0.0;

    double n_squared(double wavelength_um) const;
    double index(double wavelength_um) const;  // sqrt(n_squared), throws if n^2 <= 1

    // Invariants: at least one resonance term, every pole outside
    // [lambda_min^2, lambda_max^2], n^2 > 1 sampled across the window.
    // `context` prefixes error messages (record name / axis).
    void validate(double lambda_min_um, double lambda_max_um,
                  const std::string& context) const;
};

}  // namespace biphoton

#endif
