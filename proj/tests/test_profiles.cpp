// Longitudinal control profiles and the sectioned-heater thermal model.

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/profiles.hpp"

using namespace biphoton;

TEST_CASE("uniform and linear profiles evaluate exactly") {
    const auto uniform =
        LongitudinalProfile::uniform(ProfileQuantity::temperature, 0.02, 100.0);
    for (double z : {0.0, 0.007, 0.02}) CHECK(uniform.evaluate(z) == 100.0);

    const auto linear =
        LongitudinalProfile::linear(ProfileQuantity::temperature, 0.02, 24.0, 7800.0);
    CHECK(linear.evaluate(0.02) == doctest::Approx(180.0).epsilon(1e-14));
    CHECK(linear.evaluate(0.0) == 24.0);

    CHECK_THROWS_AS(linear.evaluate(-1e-6), ValidationError);
    CHECK_THROWS_AS(linear.evaluate(0.02 + 1e-6), ValidationError);
}

TEST_CASE("sectioned step profiles take the right-hand section on a boundary") {
    const auto prof = LongitudinalProfile::sectioned(
        ProfileQuantity::temperature, 0.05, {0.0, 0.01, 0.02, 0.05}, {10.0, 20.0, 30.0},
        LongitudinalProfile::SectionInterp::step);
    CHECK(prof.evaluate(0.005) == 10.0);
    CHECK(prof.evaluate(0.01) == 20.0);  // boundary: right-hand section
    CHECK(prof.evaluate(0.02) == 30.0);
    CHECK(prof.evaluate(0.05) == 30.0);  // final boundary clamps to the last value
}

TEST_CASE("midpoint-linear sectioned profiles are continuous") {
    const auto prof = LongitudinalProfile::sectioned(
        ProfileQuantity::temperature, 0.04, {0.0, 0.01, 0.02, 0.03, 0.04},
        {40.0, 90.0, 20.0, 70.0}, LongitudinalProfile::SectionInterp::midpoint_linear);
    // clamped before the first midpoint and after the last
    CHECK(prof.evaluate(0.0) == 40.0);
    CHECK(prof.evaluate(0.04) == 70.0);
    // linear between adjacent midpoints
    CHECK(prof.evaluate(0.010) == doctest::Approx(0.5 * (40.0 + 90.0)));
    // continuity at a fine step
    const double dz = 1e-9 * 0.04;
    for (double z : {0.005, 0.015, 0.0299, 0.035}) {
        CHECK(std::abs(prof.evaluate(z + dz) - prof.evaluate(z)) < 1e-5);
    }
}

TEST_CASE("profile validation rejects malformed sections and tables") {
    CHECK_THROWS_AS(
        LongitudinalProfile::sectioned(ProfileQuantity::temperature, 0.02, {0.0, 0.01},
                                       {1.0, 2.0}, LongitudinalProfile::SectionInterp::step),
        ValidationError);
    CHECK_THROWS_AS(LongitudinalProfile::sectioned(
                        ProfileQuantity::temperature, 0.02, {0.0, 0.015, 0.01},
                        {1.0, 2.0}, LongitudinalProfile::SectionInterp::step),
                    ValidationError);
    CHECK_THROWS_AS(LongitudinalProfile::tabulated(ProfileQuantity::field, 0.02,
                                                   {{0.0, 1.0}, {0.0, 2.0}}),
                    ValidationError);
    CHECK_THROWS_AS(LongitudinalProfile::tabulated(ProfileQuantity::field, 0.02,
                                                   {{-0.01, 1.0}, {0.01, 2.0}}),
                    ValidationError);
}

TEST_CASE("profile extremes") {
    const auto linear =
        LongitudinalProfile::linear(ProfileQuantity::temperature, 0.02, 24.0, 7800.0);
    const auto ext = profile_extremes(linear);
    CHECK(ext.min_value == 24.0);
    CHECK(ext.max_value == doctest::Approx(180.0).epsilon(1e-14));
    CHECK(ext.min_position == 0.0);
    CHECK(ext.max_position == 0.02);

    const auto uniform =
        LongitudinalProfile::uniform(ProfileQuantity::temperature, 0.02, 55.0);
    const auto uext = profile_extremes(uniform);
    CHECK(uext.min_value == uext.max_value);

    // heater-style sectioned profile: scan result vs a brute-force sweep
    const auto prof = LongitudinalProfile::sectioned(
        ProfileQuantity::temperature, 0.05, {0.0, 0.01, 0.02, 0.03, 0.04, 0.05},
        {24.0, 60.0, 130.0, 95.0, 180.0},
        LongitudinalProfile::SectionInterp::midpoint_linear);
    const auto pext = profile_extremes(prof);
    double lo = 1e300, hi = -1e300;
    constexpr int n = 1000001;
    for (int i = 0; i < n; ++i) {
        const double v = prof.evaluate(0.05 * i / (n - 1));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(std::abs(pext.min_value - lo) < 0.01);
    CHECK(std::abs(pext.max_value - hi) < 0.01);

    // sandwich property at random positions
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(0.0, 0.05);
    for (int i = 0; i < 10000; ++i) {
        const double v = prof.evaluate(pos(rng));
        CHECK(v >= pext.min_value - 1e-12);
        CHECK(v <= pext.max_value + 1e-12);
    }
}

namespace {

// Analytic solution of -kappa T'' = p(z) on [0, L], T(0) = T_c, T'(L) = 0,
// for a uniform source density rho on [a, b] and zero elsewhere:
//   T(z) = T_c + (1/kappa) int_0^z [P_total - P_absorbed(0..s)] ds
double analytic_single_section(double z, double kappa, double t_c, double rho, double a,
                               double b) {
    const double p_total = rho * (b - a);
    auto integral = [&](double x) {
        if (x <= a) return p_total * x;
        if (x <= b) return p_total * x - 0.5 * rho * (x - a) * (x - a);
        return p_total * x - rho * (b - a) * (x - 0.5 * (a + b));
    };
    return t_c + integral(z) / kappa;
}

}  // namespace

TEST_CASE("heater: zero power gives the cold-end temperature everywhere") {
    HeaterSpec spec;
    spec.n_sections = 5;
    spec.section_length_m = 0.01;
    spec.section_powers_w = {0.0, 0.0, 0.0, 0.0, 0.0};
    spec.rod_conductance = 2.0;
    spec.cold_end_temperature_c = 24.0;
    spec.ambient_loss_coefficient = 0.0;
    const auto profile = steady_state_temperature(spec, 201);
    for (double z : {0.0, 0.013, 0.05})
        CHECK(profile.evaluate(z) == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("heater: single heated section matches the analytic Poisson solution") {
    HeaterSpec spec;
    spec.n_sections = 5;
    spec.section_length_m = 0.01;
    spec.section_powers_w = {0.0, 0.0, 3.0, 0.0, 0.0};
    spec.rod_conductance = 2.0;
    spec.cold_end_temperature_c = 24.0;
    spec.ambient_loss_coefficient = 0.0;
    const auto profile = steady_state_temperature(spec, 4001);

    const double rho = 3.0 / 0.01;  // W/m inside the third section
    double previous = profile.evaluate(0.0);
    for (int i = 0; i <= 100; ++i) {
        const double z = 0.05 * i / 100.0;
        const double expected = analytic_single_section(z, 2.0, 24.0, rho, 0.02, 0.03);
        CHECK(profile.evaluate(z) == doctest::Approx(expected).epsilon(5e-4));
        CHECK(profile.evaluate(z) >= previous - 1e-9);  // monotone from the cold end
        previous = profile.evaluate(z);
    }
}

TEST_CASE("heater: temperature rise is linear in the powers") {
    HeaterSpec spec;
    spec.n_sections = 3;
    spec.section_length_m = 0.01;
    spec.section_powers_w = {1.0, 0.5, 2.0};
    spec.rod_conductance = 1.5;
    spec.cold_end_temperature_c = 20.0;
    spec.ambient_loss_coefficient = 0.0;
    const auto base = steady_state_temperature(spec, 501);
    spec.section_powers_w = {2.0, 1.0, 4.0};
    const auto doubled = steady_state_temperature(spec, 501);
    for (double z : {0.0, 0.004, 0.011, 0.02, 0.03}) {
        const double rise = base.evaluate(z) - 20.0;
        const double rise2 = doubled.evaluate(z) - 20.0;
        CHECK(rise2 == doctest::Approx(2.0 * rise).epsilon(1e-9));
    }
}

TEST_CASE("heater: invalid specifications are rejected") {
    HeaterSpec spec;
    spec.n_sections = 2;
    spec.section_length_m = 0.01;
    spec.section_powers_w = {1.0, 1.0};
    spec.rod_conductance = 0.0;  // not allowed
    spec.cold_end_temperature_c = 20.0;
    CHECK_THROWS_AS(steady_state_temperature(spec, 100), ValidationError);
    spec.rod_conductance = 1.0;
    spec.section_powers_w = {1.0, -1.0};
    CHECK_THROWS_AS(steady_state_temperature(spec, 100), ValidationError);
    spec.section_powers_w = {1.0, 1.0};
    CHECK_THROWS_AS(steady_state_temperature(spec, 4), ValidationError);
}
