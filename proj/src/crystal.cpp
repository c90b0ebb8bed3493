#include "biphoton/crystal.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

ThermoOpticCoefficient ThermoOpticCoefficient::constant(double eta_per_k) {
    ThermoOpticCoefficient c;
    c.table_ = {{0.0, eta_per_k}};
    return c;
}

ThermoOpticCoefficient ThermoOpticCoefficient::tabulated(
    std::vector<std::pair<double, double>> wavelength_um_eta) {
    ThermoOpticCoefficient c;
    c.table_ = std::move(wavelength_um_eta);
    return c;
}

double ThermoOpticCoefficient::at(double wavelength_um) const {
    if (table_.size() == 1) return table_.front().second;
    if (wavelength_um <= table_.front().first) return table_.front().second;
    if (wavelength_um >= table_.back().first) return table_.back().second;
    auto upper = std::upper_bound(
        table_.begin(), table_.end(), wavelength_um,
        [](double lam, const auto& row) { return lam < row.first; });
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = (wavelength_um - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

void ThermoOpticCoefficient::validate(const std::string& context) const {
    if (table_.empty())
        throw ValidationError(context + ": empty thermo-optic table");
    for (std::size_t i = 1; i < table_.size(); ++i) {
        if (!(table_[i].first > table_[i - 1].first))
            throw ValidationError(context +
                                  ": thermo-optic table wavelengths must increase strictly");
    }
}

void CrystalRecord::require_transparent(double wavelength_um) const {
    if (!in_transparency(wavelength_um))
        throw TransparencyError(name + ": lambda = " + std::to_string(wavelength_um) +
                                " um outside transparency [" +
                                std::to_string(transparency_min_um) + ", " +
                                std::to_string(transparency_max_um) + "] um");
}

void CrystalRecord::validate() const {
    if (name.empty()) throw ValidationError("crystal record without a name");
    if (!(transparency_min_um < transparency_max_um))
        throw ValidationError(name + ": transparency bounds must satisfy min < max");
    sellmeier_o.validate(transparency_min_um, transparency_max_um, name + "/ordinary");
    sellmeier_e.validate(transparency_min_um, transparency_max_um, name + "/extraordinary");
    thermo_optic_o.validate(name + "/ordinary");
    thermo_optic_e.validate(name + "/extraordinary");
}

double extraordinary_index_at_angle(double n_o, double n_e, double theta_rad) {
    if (!(n_o > 1.0) || !(n_e > 1.0))
        throw ValidationError("extraordinary_index_at_angle: indices must exceed 1");
    if (theta_rad < 0.0 || theta_rad > pi / 2.0)
        throw ValidationError("extraordinary_index_at_angle: theta outside [0, pi/2]");
    const double c = std::cos(theta_rad);
    const double s = std::sin(theta_rad);
    const double inv_n2 = c * c / (n_o * n_o) + s * s / (n_e * n_e);
    return 1.0 / std::sqrt(inv_n2);
}

double refractive_index(const CrystalRecord& crystal, const Polarization& pol,
                        double wavelength_um, double temperature_c,
                        double field_v_per_m) {
    crystal.require_transparent(wavelength_um);
    double base, eta, beta;
    if (pol.is_extraordinary()) {
        base = extraordinary_index_at_angle(crystal.sellmeier_o.index(wavelength_um),
                                            crystal.sellmeier_e.index(wavelength_um),
                                            pol.axis_angle_rad);
        eta = crystal.thermo_optic_e.at(wavelength_um);
        beta = crystal.electro_optic_e;
    } else {
        base = crystal.sellmeier_o.index(wavelength_um);
        eta = crystal.thermo_optic_o.at(wavelength_um);
        beta = crystal.electro_optic_o;
    }
    const double n = base + eta * (temperature_c - crystal.reference_temperature_c) +
                     beta * field_v_per_m;
    if (!(n > 1.0))
        throw ValidationError(crystal.name + ": corrected index " + std::to_string(n) +
                              " dropped below 1");
    return n;
}

double wavenumber(const CrystalRecord& crystal, const Polarization& pol,
                  double omega, double temperature_c, double field_v_per_m) {
    const double lam = wavelength_um_from_omega(omega);
    return refractive_index(crystal, pol, lam, temperature_c, field_v_per_m) * omega /
           speed_of_light;
}

WavenumberDerivatives wavenumber_derivatives(const CrystalRecord& crystal,
                                             const Polarization& pol, double omega,
                                             double temperature_c,
                                             double field_v_per_m) {
    // Widest stencil point must stay inside the transparency window.
    const double h2 = 1e-4 * omega;
    crystal.require_transparent(wavelength_um_from_omega(omega + 2.0 * h2));
    crystal.require_transparent(wavelength_um_from_omega(omega - 2.0 * h2));

    auto k_at = [&](double w) {
        return wavenumber(crystal, pol, w, temperature_c, field_v_per_m);
    };

    WavenumberDerivatives out;
    out.k = k_at(omega);

    // First derivative: relative step 1e-6 with one Richardson refinement.
    {
        const double h = 1e-6 * omega;
        const double d_h = (k_at(omega + h) - k_at(omega - h)) / (2.0 * h);
        const double d_h2 = (k_at(omega + 0.5 * h) - k_at(omega - 0.5 * h)) / h;
        out.k1 = (4.0 * d_h2 - d_h) / 3.0;
        const double roundoff = 4.0 * 1e-16 * out.k / h;
        out.k1_error = std::abs(d_h2 - d_h) / 3.0 + roundoff;
    }
    // Second derivative: the 1e-6 step loses too many digits to cancellation
    // (the second difference of k is ~1e-13 of k itself), so a 1e-4 relative
    // step is used here.
    {
        const double h = h2;
        auto second = [&](double step) {
            return (k_at(omega + step) - 2.0 * out.k + k_at(omega - step)) /
                   (step * step);
        };
        const double d_h = second(h);
        const double d_h2 = second(0.5 * h);
        out.k2 = (4.0 * d_h2 - d_h) / 3.0;
        const double roundoff = 16.0 * 1e-16 * out.k / (h * h);
        out.k2_error = std::abs(d_h2 - d_h) / 3.0 + roundoff;
    }
    return out;
}

}  // namespace biphoton
