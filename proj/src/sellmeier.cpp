#include "biphoton/sellmeier.hpp"

#include <cmath>
#include <string>

#include "biphoton/errors.hpp"

namespace biphoton {

double SellmeierForm::n_squared(double wavelength_um) const {
    const double l2 = wavelength_um * wavelength_um;
    double n2 = a - d_per_um2 * l2;
    for (const auto& r : resonances) n2 += r.b * l2 / (l2 - r.c_um2);
    return n2;
}

double SellmeierForm::index(double wavelength_um) const {
    const double n2 = n_squared(wavelength_um);
    if (!std::isfinite(n2) || n2 <= 1.0)
        throw ValidationError("sellmeier: n^2 = " + std::to_string(n2) +
                              " at lambda = " + std::to_string(wavelength_um) +
                              " um is not a physical index");
    return std::sqrt(n2);
}

void SellmeierForm::validate(double lambda_min_um, double lambda_max_um,
                             const std::string& context) const {
    if (resonances.empty())
        throw ValidationError(context + ": at least one resonance term required");
    const double lo2 = lambda_min_um * lambda_min_um;
    const double hi2 = lambda_max_um * lambda_max_um;
    for (const auto& r : resonances) {
        if (r.c_um2 >= lo2 && r.c_um2 <= hi2)
            throw ValidationError(context + ": pole at C = " + std::to_string(r.c_um2) +
                                  " um^2 lies inside the transparency window [" +
                                  std::to_string(lo2) + ", " + std::to_string(hi2) + "] um^2");
    }
    // Sample across the window, endpoints included.
    constexpr int samples = 257;
    for (int i = 0; i < samples; ++i) {
        const double lam =
            lambda_min_um + (lambda_max_um - lambda_min_um) * i / (samples - 1);
        const double n2 = n_squared(lam);
        if (!std::isfinite(n2) || n2 <= 1.0)
            throw ValidationError(context + ": n^2 = " + std::to_string(n2) +
                                  " at lambda = " + std::to_string(lam) +
                                  " um violates n > 1 inside transparency");
    }
}

}  // namespace biphoton
