#ifndef BIPHOTON_TEST_SUPPORT_HPP
#define BIPHOTON_TEST_SUPPORT_HPP

#include <string>

#include "biphoton/catalog.hpp"
#include "biphoton/matching.hpp"

namespace biphoton::test {

inline const Catalog& shipped_catalog() {
    static const Catalog catalog =
        load_catalog(std::string(BIPHOTON_DATA_DIR) + "/crystals.json");
    return catalog;
}

inline const CrystalRecord& kdp() { return shipped_catalog().find("KDP"); }
inline const CrystalRecord& linbo3() { return shipped_catalog().find("LiNbO3"); }

// Dispersionless reference medium: constant index n0 everywhere, no thermo or
// electro response. The single resonance carries zero strength so the record
// still satisfies the at-least-one-term invariant.
inline CrystalRecord constant_index_record(double n0 = 1.5) {
    CrystalRecord rec;
    rec.name = "constant";
    rec.symmetry = CrystalSymmetry::uniaxial_negative;
    rec.sellmeier_o.a = n0 * n0;
    rec.sellmeier_o.resonances = {{0.0, 1e6}};
    rec.sellmeier_e = rec.sellmeier_o;
    rec.thermo_optic_o = ThermoOpticCoefficient::constant(0.0);
    rec.thermo_optic_e = ThermoOpticCoefficient::constant(0.0);
    rec.transparency_min_um = 0.2;
    rec.transparency_max_um = 5.0;
    rec.reference_temperature_c = 20.0;
    rec.validate();
    return rec;
}

// Isotropic but dispersive: both axes share one Sellmeier form, so angle
// tuning cannot change the mismatch.
inline CrystalRecord isotropic_dispersive_record() {
    CrystalRecord rec = constant_index_record();
    rec.name = "isotropic";
    rec.sellmeier_o.a = 2.1;
    rec.sellmeier_o.resonances = {{0.2, 0.03}};
    rec.sellmeier_e = rec.sellmeier_o;
    rec.transparency_min_um = 0.3;
    rec.transparency_max_um = 3.0;
    rec.validate();
    return rec;
}

// Collinear degenerate type-I KDP at the 351.1 nm pump with the cut angle
// solved so that dk(0) = 0 at the given temperature.
inline MatchingConfig kdp_degenerate_matched(double length_m = 0.02,
                                             double temperature_c = 24.0) {
    MatchingConfig cfg = MatchingConfig::collinear_degenerate(
        "KDP", MatchingType::type_1, 0.3511, 0.8, length_m);
    cfg.pump_axis_angle_rad = solve_pump_axis_angle(kdp(), cfg, temperature_c);
    return cfg;
}

}  // namespace biphoton::test

#endif
