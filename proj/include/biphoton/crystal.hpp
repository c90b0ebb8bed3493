#ifndef BIPHOTON_CRYSTAL_HPP
#define BIPHOTON_CRYSTAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "biphoton/sellmeier.hpp"

namespace biphoton {

struct Polarization {
    enum class Kind { ordinary, extraordinary };
    Kind kind = Kind::ordinary;
    double axis_angle_rad = 0.0;  // angle to the optic axis, extraordinary only

    static Polarization ordinary() { return {Kind::ordinary, 0.0}; }
    static Polarization extraordinary(double theta_rad) {
        return {Kind::extraordinary, theta_rad};
    }
    bool is_extraordinary() const { return kind == Kind::extraordinary; }
};

// Thermo-optic coefficient eta = dn/dT in 1/K, either a single constant or a
// wavelength table with linear interpolation (clamped beyond the end nodes).
class ThermoOpticCoefficient {
public:
    ThermoOpticCoefficient() : table_{{0.0, 0.0}} {}

    static ThermoOpticCoefficient constant(double eta_per_k);
    static ThermoOpticCoefficient tabulated(
        std::vector<std::pair<double, double>> wavelength_um_eta);

    double at(double wavelength_um) const;
    bool is_constant() const { return table_.size() == 1; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }

    void validate(const std::string& context) const;  // strictly sorted wavelengths

private:
    std::vector<std::pair<double, double>> table_;
};

enum class CrystalSymmetry { uniaxial_negative, uniaxial_positive };

// Named dispersion dataset: Sellmeier forms per polarization axis, linear
// thermo-optic and electro-optic corrections, transparency window.
struct CrystalRecord {
    std::string name;
    CrystalSymmetry symmetry = CrystalSymmetry::uniaxial_negative;
    SellmeierForm sellmeier_o;
    SellmeierForm sellmeier_e;
    ThermoOpticCoefficient thermo_optic_o;
    ThermoOpticCoefficient thermo_optic_e;
    double electro_optic_o = 0.0;  // m/V
    double electro_optic_e = 0.0;  // m/V
    double transparency_min_um = 0.0;
    double transparency_max_um = 0.0;
    double reference_temperature_c = 20.0;  // Sellmeier base values hold here

    bool in_transparency(double wavelength_um) const {
        return wavelength_um >= transparency_min_um &&
               wavelength_um <= transparency_max_um;
    }
    void require_transparent(double wavelength_um) const;
    void validate() const;
};

// Index of the extraordinary wave at angle theta to the optic axis:
// 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
double extraordinary_index_at_angle(double n_o, double n_e, double theta_rad);

// n(lambda, T, E) = n_base(lambda) + eta(lambda) (T - T_ref) + beta E.
// For an extraordinary polarization the base combines both axes through the
// angle formula; the corrections use the extraordinary-axis coefficients.
// Linear in T and in E by construction.
double refractive_index(const CrystalRecord& crystal, const Polarization& pol,
                        double wavelength_um, double temperature_c,
                        double field_v_per_m);

struct WavenumberDerivatives {
    double k = 0.0;         // rad/m
    double k1 = 0.0;        // dk/domega, s/m
    double k2 = 0.0;        // d2k/domega2, s^2/m
    double k1_error = 0.0;  // absolute estimates from the Richardson step
    double k2_error = 0.0;
};

// k = n(omega) omega / c plus first and second frequency derivatives by
// central differences with one Richardson refinement. Throws
// TransparencyError if the difference stencil leaves the transparency window.
WavenumberDerivatives wavenumber_derivatives(const CrystalRecord& crystal,
                                             const Polarization& pol, double omega,
                                             double temperature_c,
                                             double field_v_per_m);

// Plain wavenumber without derivatives (cheaper inner loop).
double wavenumber(const CrystalRecord& crystal, const Polarization& pol,
                  double omega, double temperature_c, double field_v_per_m);

}  // namespace biphoton

#endif
