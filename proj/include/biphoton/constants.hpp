#ifndef BIPHOTON_CONSTANTS_HPP
#define BIPHOTON_CONSTANTS_HPP

#include <numbers>

namespace biphoton {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Angular frequency (rad/s) of vacuum wavelength given in micrometers.
inline constexpr double omega_from_wavelength_um(double wavelength_um) {
    return two_pi * speed_of_light / (wavelength_um * 1e-6);
}

// Vacuum wavelength in micrometers of an angular frequency (rad/s).
inline constexpr double wavelength_um_from_omega(double omega) {
    return two_pi * speed_of_light / omega * 1e6;
}

// Detuning conversions used in reports: ordinary frequency in THz.
inline constexpr double thz_from_omega(double omega) { return omega / two_pi / 1e12; }
inline constexpr double omega_from_thz(double nu_thz) { return nu_thz * two_pi * 1e12; }

}  // namespace biphoton

#endif
