#ifndef BIPHOTON_CONFIG_HPP
#define BIPHOTON_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "biphoton/catalog.hpp"
#include "biphoton/designer.hpp"
#include "biphoton/matching.hpp"
#include "biphoton/profiles.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

// When the angle is solved rather than given: at the reference temperature,
// or at the hottest point of the profile (the orientation that maximizes the
// spectral width of a heated crystal).
enum class AngleSolveMode { given, at_reference, at_profile_max };

// One simulation setup: crystal, geometry, control profile, numerics.
// CLI-boundary units: wavelengths nm, lengths mm, temperatures degC, fields
// kV/cm, angles deg; everything is converted on load.
struct SimulationConfig {
    std::filesystem::path catalog_path;
    std::string crystal_name;
    Catalog catalog;
    MatchingConfig matching;
    AngleSolveMode angle_mode = AngleSolveMode::given;
    std::optional<LongitudinalProfile> profile;
    double ambient_temperature_c = 0.0;
    double ambient_field_v_per_m = 0.0;
    int grid_points = 2049;
    std::optional<double> span_override_thz;  // half-span; absent = auto
    QuadratureSpec quadrature;
    PhaseMode phase_mode = PhaseMode::accumulated;

    const CrystalRecord& crystal() const { return catalog.find(crystal_name); }

    // Applies angle_mode (solves and stores the cut angle when requested).
    void resolve_angle();
    FrequencyGrid make_grid() const;
};

// Environment variable consulted when a config omits the catalog path.
inline constexpr const char* catalog_env_var = "BIPHOTON_CATALOG";

SimulationConfig load_simulation_config(const std::filesystem::path& path);

struct DesignDocument {
    SimulationConfig base;
    DesignProblem problem;
};
DesignDocument load_design_problem(const std::filesystem::path& path);

}  // namespace biphoton

#endif
