#ifndef BIPHOTON_PROFILES_HPP
#define BIPHOTON_PROFILES_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace biphoton {

enum class ProfileQuantity { temperature, field, poling_wavenumber };

// Units per quantity: temperature degC, field V/m, poling wavenumber rad/um.
const char* profile_quantity_name(ProfileQuantity q);

// A scalar control quantity as a function of position z in [0, L].
struct LongitudinalProfile {
    struct Uniform {
        double value;
    };
    struct Linear {
        double start;           // value at z = 0
        double gradient_per_m;  // value(z) = start + gradient * z
    };
    enum class SectionInterp { step, midpoint_linear };
    struct Sectioned {
        // boundaries z_0 < ... < z_N inside [0, L]; values v_1 .. v_N.
        // step: half-open sections [z_{i-1}, z_i), so a boundary point takes
        // the right-hand section's value; midpoint_linear: values anchored at
        // section midpoints, linear between, clamped ends.
        std::vector<double> boundaries;
        std::vector<double> values;
        SectionInterp interp;
    };
    struct Tabulated {
        std::vector<std::pair<double, double>> samples;  // (z, value), z strictly increasing
    };

    ProfileQuantity quantity = ProfileQuantity::temperature;
    double length_m = 0.0;
    std::variant<Uniform, Linear, Sectioned, Tabulated> shape;

    double evaluate(double z_m) const;  // throws outside [0, L]
    void validate() const;

    static LongitudinalProfile uniform(ProfileQuantity q, double length_m, double value);
    static LongitudinalProfile linear(ProfileQuantity q, double length_m, double start,
                                      double gradient_per_m);
    static LongitudinalProfile sectioned(ProfileQuantity q, double length_m,
                                         std::vector<double> boundaries,
                                         std::vector<double> values,
                                         SectionInterp interp);
    static LongitudinalProfile tabulated(ProfileQuantity q, double length_m,
                                         std::vector<std::pair<double, double>> samples);

};

struct ProfileExtremes {
    double min_value = 0.0;
    double max_value = 0.0;
    double min_position = 0.0;
    double max_position = 0.0;
};

// Exact for uniform/linear kinds; 4096-point scan with local refinement for
// sectioned and tabulated kinds.
ProfileExtremes profile_extremes(const LongitudinalProfile& profile);

// Sectioned resistive heater on a water-cooled rod.
struct HeaterSpec {
    int n_sections = 5;
    double section_length_m = 0.0;
    std::vector<double> section_powers_w;    // one per section, >= 0
    double rod_conductance = 0.0;            // effective kappa, W m / K
    double cold_end_temperature_c = 0.0;     // Dirichlet value at z = 0
    double ambient_loss_coefficient = 0.0;   // h, W / (K m); ambient = cold end
};

// Steady 1-D heat balance -kappa T'' = p(z) - h (T - T_cold), Dirichlet cold
// end, zero-flux far end, tridiagonal finite differences. Returns a tabulated
// temperature profile over the rod.
LongitudinalProfile steady_state_temperature(const HeaterSpec& spec, int grid_points);

}  // namespace biphoton

#endif
