// Phase-mismatch construction, Taylor structure, matching solvers and the
// analytic bandwidth estimates.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/matching.hpp"
#include "test_support.hpp"

using namespace biphoton;

TEST_CASE("matching config invariants") {
    auto cfg = MatchingConfig::collinear_degenerate("KDP", MatchingType::type_1, 0.3511,
                                                    0.8, 0.02);
    CHECK(cfg.degenerate);
    CHECK(std::abs(cfg.signal_omega() + cfg.idler_omega() - cfg.pump_omega()) <
          1e-12 * cfg.pump_omega());

    auto nd = MatchingConfig::collinear_nondegenerate("KDP", MatchingType::type_1, 0.3511,
                                                      0.644, 0.8, 0.02);
    CHECK(!nd.degenerate);
    CHECK(std::abs(nd.signal_omega() + nd.idler_omega() - nd.pump_omega()) <
          1e-12 * nd.pump_omega());

    // inconsistent degenerate flag rejected
    nd.degenerate = true;
    CHECK_THROWS_AS(nd.validate(), ValidationError);
}

TEST_CASE("solved KDP cut angle reproduces the 50 degree cut") {
    auto cfg = MatchingConfig::collinear_degenerate("KDP", MatchingType::type_1, 0.3511,
                                                    0.8, 0.02);
    const double theta = solve_pump_axis_angle(test::kdp(), cfg);
    CHECK(theta * 180.0 / pi == doctest::Approx(50.0).epsilon(0.04));

    // round trip: the solved angle really zeroes the center mismatch
    cfg.pump_axis_angle_rad = theta;
    CHECK(std::abs(collinear_mismatch(test::kdp(), cfg, 0.0,
                                      test::kdp().reference_temperature_c, 0.0)) < 1e-6);
}

TEST_CASE("angle solving fails on an isotropic record") {
    const CrystalRecord iso = test::isotropic_dispersive_record();
    auto cfg = MatchingConfig::collinear_degenerate("isotropic", MatchingType::type_1,
                                                    0.62, 0.8, 0.02);
    CHECK_THROWS_AS(solve_pump_axis_angle(iso, cfg), NumericalError);
}

TEST_CASE("degenerate type-I mismatch is even in the detuning") {
    auto cfg = test::kdp_degenerate_matched();
    CHECK(std::abs(collinear_mismatch(test::kdp(), cfg, 0.0, 24.0, 0.0)) < 1e-6);
    for (double omega : {1e13, 5e13, 1.2e14}) {
        const double plus = collinear_mismatch(test::kdp(), cfg, omega, 24.0, 0.0);
        const double minus = collinear_mismatch(test::kdp(), cfg, -omega, 24.0, 0.0);
        CHECK(plus == doctest::Approx(minus).epsilon(1e-9));
    }
}

TEST_CASE("Taylor coefficients reproduce the exact mismatch near center") {
    auto cfg = test::kdp_degenerate_matched();
    const auto t = taylor_coefficients(test::kdp(), cfg, 24.0, 0.0);

    // d0 equals the exact mismatch at zero detuning
    const double dk0 = collinear_mismatch(test::kdp(), cfg, 0.0, 24.0, 0.0);
    CHECK(t.d0 == doctest::Approx(dk0).epsilon(1e-10));

    // degenerate type-I: group velocities match automatically
    CHECK(std::abs(t.d1) <= 3.0 * t.d1_error + 1e-18);

    // least-squares quadratic fit over a +-1% band as an independent oracle
    const double span = 0.01 * cfg.signal_omega();
    const int n = 41;
    double s2 = 0.0, s4 = 0.0, sy = 0.0, sy2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double omega = -span + 2.0 * span * i / (n - 1);
        const double dk = collinear_mismatch(test::kdp(), cfg, omega, 24.0, 0.0);
        s2 += omega * omega;
        s4 += omega * omega * omega * omega;
        sy += dk;
        sy2 += dk * omega * omega;
    }
    // fit dk ~ a + c omega^2 on the symmetric grid (odd powers vanish)
    const double denom = n * s4 - s2 * s2;
    const double c_fit = (n * sy2 - s2 * sy) / denom;
    CHECK(t.d2 == doctest::Approx(c_fit).epsilon(2e-3));

    // small-detuning agreement of the quadratic model with the exact curve
    for (double omega : {1e12, 5e12, 2e13}) {
        const double exact = collinear_mismatch(test::kdp(), cfg, omega, 24.0, 0.0);
        const double model = t.d0 + t.d1 * omega + t.d2 * omega * omega;
        CHECK(std::abs(exact - model) <= std::abs(t.d2) * omega * omega * 0.1);
    }
}

TEST_CASE("type-II carries group-velocity mismatch") {
    auto cfg = MatchingConfig::collinear_degenerate("KDP", MatchingType::type_2, 0.3511,
                                                    0.9, 0.02);
    const auto t = taylor_coefficients(test::kdp(), cfg, 24.0, 0.0);
    const auto pol = assign_polarizations(test::kdp(), cfg);
    CHECK(pol.signal.kind == Polarization::Kind::ordinary);
    CHECK(pol.idler.kind == Polarization::Kind::extraordinary);

    const auto ds = wavenumber_derivatives(test::kdp(), pol.signal, cfg.signal_omega(),
                                           24.0, 0.0);
    const auto di = wavenumber_derivatives(test::kdp(), pol.idler, cfg.idler_omega(),
                                           24.0, 0.0);
    CHECK(std::abs(t.d1) == doctest::Approx(std::abs(ds.k1 - di.k1)).epsilon(1e-9));
    CHECK(std::abs(t.d1) > 1e-12);
}

TEST_CASE("broadband condition residuals") {
    // solved degenerate type-I: centers match, group velocities match, GVD not
    auto cfg = test::kdp_degenerate_matched();
    const auto rep = broadband_conditions_report(test::kdp(), cfg, 24.0, 0.0);
    CHECK(std::abs(rep.center_residual) < 1e-3);
    CHECK(rep.center_ok);
    CHECK(rep.group_ok);
    CHECK(!rep.dispersion_ok);
    CHECK(rep.dispersion_residual > 0.0);  // normal dispersion: 2 k''_0 > 0

    // dispersionless record: everything vanishes
    const CrystalRecord flat = test::constant_index_record();
    auto flat_cfg = MatchingConfig::collinear_degenerate("constant", MatchingType::type_1,
                                                         0.62, 0.8, 0.02);
    const auto flat_rep = broadband_conditions_report(flat, flat_cfg, 20.0, 0.0);
    CHECK(std::abs(flat_rep.center_residual) < 1e-6);
    CHECK(flat_rep.group_ok);
    CHECK(flat_rep.dispersion_ok);

    // poled configuration solved by the period: grating-corrected center holds
    auto qpm = MatchingConfig::collinear_degenerate("LiNbO3", MatchingType::type_1, 0.9425,
                                                    pi / 2.0, 0.01);
    qpm.poling = UniformPoling{solve_poling_period(test::linbo3(), qpm, 25.0, 0.0)};
    const auto qpm_rep = broadband_conditions_report(test::linbo3(), qpm, 25.0, 0.0);
    CHECK(std::abs(qpm_rep.center_residual) < 1e-3);
}

TEST_CASE("QPM period for degenerate LiNbO3 at 1885 nm") {
    auto cfg = MatchingConfig::collinear_degenerate("LiNbO3", MatchingType::type_1, 0.9425,
                                                    pi / 2.0, 0.01);
    const double period = solve_poling_period(test::linbo3(), cfg, 25.0, 0.0);
    CHECK(std::abs(period - 27.4) / 27.4 < 0.15);

    // round trip: inserting the period zeroes the center mismatch
    cfg.poling = UniformPoling{period};
    CHECK(std::abs(collinear_mismatch(test::linbo3(), cfg, 0.0, 25.0, 0.0)) < 1e-9);

    // dispersionless medium has nothing to compensate
    const CrystalRecord flat = test::constant_index_record();
    auto flat_cfg = MatchingConfig::collinear_degenerate("constant", MatchingType::type_1,
                                                         0.62, 0.8, 0.02);
    CHECK_THROWS_AS(solve_poling_period(flat, flat_cfg, 20.0, 0.0), ConfigError);
}

TEST_CASE("matched-frequency root solving") {
    // synthetic affine mismatch dk = a - b omega
    const CrystalRecord flat = test::constant_index_record();
    auto cfg = MatchingConfig::collinear_degenerate("constant", MatchingType::type_1, 0.62,
                                                    0.8, 0.02);
    auto affine = MismatchEvaluator::uniform(flat, cfg, 20.0, 0.0);
    // affine evaluator built by hand through a lambda-style check of the root
    // solver itself:
    struct {
        double a = 10.0, b = 2.0;
    } line;
    auto root = bracketed_root([&](double omega) { return line.a - line.b * omega; }, 0.0,
                               100.0, 1e-12);
    CHECK(root.converged);
    CHECK(root.x == doctest::Approx(5.0).epsilon(1e-10));

    // degenerate matched KDP: the even mismatch never changes sign, so the
    // bracket touches the center sample where |dk| already sits inside tol
    auto kcfg = test::kdp_degenerate_matched();
    auto ev = MismatchEvaluator::uniform(test::kdp(), kcfg, 24.0, 0.0);
    const auto r = solve_matched_frequency(ev, 0.0, -1e13, 0.0);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(0.0));
    CHECK(std::abs(ev(r.x, 0.0)) < 1e-6);

    // no sign change reported as an error
    CHECK_THROWS_AS(solve_matched_frequency(ev, 0.0, 1e13, 2e13), NumericalError);
    (void)affine;
}

TEST_CASE("tilted-front modified derivatives") {
    // no angular dispersion: derivatives unchanged
    const auto same = tilted_front_modified(1e7, 5e-9, 1e-25, 0.3, 0.0);
    CHECK(same.k1 == doctest::Approx(5e-9).epsilon(1e-15));
    CHECK(same.k2 == doctest::Approx(1e-25).epsilon(1e-15));

    // zero tilt with dispersion: only the curvature drops
    const auto curv = tilted_front_modified(1e7, 5e-9, 1e-25, 0.0, 0.1);
    CHECK(curv.k1 == doctest::Approx(5e-9).epsilon(1e-15));
    CHECK(curv.k2 < 1e-25);

    // frozen hand evaluation at tan(tilt) = 0.2, tan(disp) = 0.1
    const double tilt = std::atan(0.2), disp = std::atan(0.1);
    const auto mod = tilted_front_modified(1e7, 5e-9, 1e-25, tilt, disp);
    const double alpha = 0.1 / speed_of_light;
    CHECK(mod.k1 == doctest::Approx(5e-9 + alpha * 0.2).epsilon(1e-12));
    CHECK(mod.k2 == doctest::Approx(1e-25 - alpha * alpha / 1e7).epsilon(1e-12));
    CHECK(mod.k2 == doctest::Approx(8.887349944e-26).epsilon(1e-9));
}

TEST_CASE("noncollinear mismatch reduces to collinear at zero angles") {
    auto cfg = test::kdp_degenerate_matched();
    cfg.noncollinear = NoncollinearGeometry{0.0, 0.0};
    for (double omega : {0.0, 3e13, -8e13}) {
        const auto nc = noncollinear_mismatch(test::kdp(), cfg, omega, 0.0, 24.0, 0.0);
        const double col = collinear_mismatch(test::kdp(), cfg, omega, 24.0, 0.0);
        CHECK(nc.perp == 0.0);
        CHECK(nc.parallel == doctest::Approx(col).epsilon(1e-12));
    }
}

TEST_CASE("degenerate symmetric geometry closes the transverse component") {
    auto cfg = test::kdp_degenerate_matched();
    cfg.noncollinear = NoncollinearGeometry{0.02, 0.02};
    const auto nc = noncollinear_mismatch(test::kdp(), cfg, 0.0, 0.0, 24.0, 0.0);
    CHECK(std::abs(nc.perp) < 1e-9);
}

TEST_CASE("transverse matching maps the pump angular spectrum onto frequency") {
    // theta_s = theta_i = 90 degrees: the matched detuning follows q/(2 k'ْ0)
    auto cfg = test::kdp_degenerate_matched();
    cfg.noncollinear = NoncollinearGeometry{pi / 2.0, pi / 2.0};
    const auto pol = assign_polarizations(test::kdp(), cfg);
    const auto ds =
        wavenumber_derivatives(test::kdp(), pol.signal, cfg.signal_omega(), 24.0, 0.0);
    for (double q : {2e3, 1e4, 5e4}) {
        auto perp = [&](double omega) {
            return noncollinear_mismatch(test::kdp(), cfg, omega, q, 24.0, 0.0).perp;
        };
        const auto root = bracketed_root(perp, -1e13, 1e13, 1e-4);
        CHECK(root.converged);
        CHECK(std::abs(std::abs(root.x) - q / (2.0 * ds.k1)) <
              0.05 * (q / (2.0 * ds.k1)));
    }
}

TEST_CASE("diagnostic series matches the exact components for small detuning") {
    auto cfg = test::kdp_degenerate_matched();
    cfg.noncollinear = NoncollinearGeometry{0.03, 0.02};
    const auto series = noncollinear_series(test::kdp(), cfg, 24.0, 0.0);
    for (double omega : {5e11, 2e12}) {
        const auto exact = noncollinear_mismatch(test::kdp(), cfg, omega, 0.0, 24.0, 0.0);
        const double perp_model =
            series.perp0 + series.perp1 * omega + series.perp2 * omega * omega;
        const double par_model =
            series.par0 + series.par1 * omega + series.par2 * omega * omega;
        CHECK(exact.perp == doctest::Approx(perp_model).epsilon(1e-6));
        CHECK(exact.parallel ==
              doctest::Approx(par_model).epsilon(1e-4).scale(std::abs(series.par0) + 1.0));
    }
}

TEST_CASE("analytic width limits") {
    auto cfg = test::kdp_degenerate_matched();
    const auto t = taylor_coefficients(test::kdp(), cfg, 24.0, 0.0);

    // homogeneous type-I entry: sqrt(2 pi / (L |D2|)), scaling L -> 4L halves it
    const auto limits = width_limits(test::kdp(), cfg, 24.0, 0.0);
    REQUIRE(limits.homogeneous.bounded);
    CHECK(limits.homogeneous.value ==
          doctest::Approx(std::sqrt(two_pi / (0.02 * std::abs(t.d2)))).epsilon(1e-6));
    auto cfg4 = cfg;
    cfg4.crystal_length_m = 0.08;
    const auto limits4 = width_limits(test::kdp(), cfg4, 24.0, 0.0);
    CHECK(limits4.homogeneous.value ==
          doctest::Approx(0.5 * limits.homogeneous.value).epsilon(1e-6));

    // type-II entry scales as 1/L
    auto cfg2 = MatchingConfig::collinear_degenerate("KDP", MatchingType::type_2, 0.3511,
                                                     0.9, 0.02);
    const auto lim2 = width_limits(test::kdp(), cfg2, 24.0, 0.0);
    auto cfg2b = cfg2;
    cfg2b.crystal_length_m = 0.04;
    const auto lim2b = width_limits(test::kdp(), cfg2b, 24.0, 0.0);
    REQUIRE(lim2.homogeneous.bounded);
    CHECK(lim2b.homogeneous.value == doctest::Approx(0.5 * lim2.homogeneous.value)
                                         .epsilon(1e-9));

    // dispersionless record: quadratic coefficient vanishes -> unbounded entry
    const CrystalRecord flat = test::constant_index_record();
    auto flat_cfg = MatchingConfig::collinear_degenerate("constant", MatchingType::type_1,
                                                         0.62, 0.8, 0.02);
    const auto flat_limits = width_limits(flat, flat_cfg, 20.0, 0.0);
    CHECK(!flat_limits.homogeneous.bounded);

    // focused-pump entries appear for noncollinear geometry
    auto nc = cfg;
    nc.noncollinear = NoncollinearGeometry{0.0323, 0.0323};
    nc.pump_angular_width = 1e4;
    const auto nc_limits = width_limits(test::kdp(), nc, 24.0, 0.0);
    REQUIRE(nc_limits.pump_angular_spread.has_value());
    REQUIRE(nc_limits.noncollinear_gvd.has_value());
    const auto pol = assign_polarizations(test::kdp(), nc);
    const auto ds =
        wavenumber_derivatives(test::kdp(), pol.signal, nc.signal_omega(), 24.0, 0.0);
    CHECK(nc_limits.pump_angular_spread->value ==
          doctest::Approx(1e4 / (2.0 * ds.k1 * std::sin(0.0323))).epsilon(1e-9));
    CHECK(nc_limits.noncollinear_gvd->value ==
          doctest::Approx(std::sqrt(two_pi / (0.02 * ds.k2 * std::cos(0.0323))))
              .epsilon(1e-6));
}

TEST_CASE("pump-bandwidth matched detunings") {
    // gamma = 0 collapses both branches onto Omega_p / 2 exactly
    const auto collapsed = pump_bandwidth_matched_detunings(0.0, 8e11);
    CHECK(collapsed.plus == 4e11);
    CHECK(collapsed.minus == 4e11);

    // reported width reduces to dOmega_p / 2 in the same limit
    const CrystalRecord flat = test::constant_index_record();
    auto cfg = MatchingConfig::collinear_degenerate("constant", MatchingType::type_1, 0.62,
                                                    0.8, 0.02);
    cfg.pump_spectral_width = 1e12;
    const auto limits = width_limits(flat, cfg, 20.0, 0.0);
    REQUIRE(limits.pump_bandwidth.has_value());
    CHECK(std::abs(limits.gamma) < 1e-3);  // dispersionless: group velocities equal
    CHECK(limits.pump_bandwidth->value ==
          doctest::Approx(0.5e12).epsilon(1e-3));

    // KDP degenerate: exact mismatch root vs the closed form, small pump detuning
    auto kcfg = test::kdp_degenerate_matched();
    const auto pol = assign_polarizations(test::kdp(), kcfg);
    const auto dp = wavenumber_derivatives(test::kdp(), pol.pump, kcfg.pump_omega(), 24.0,
                                           0.0);
    const auto ds = wavenumber_derivatives(test::kdp(), pol.signal, kcfg.signal_omega(),
                                           24.0, 0.0);
    const double gamma = (dp.k1 - ds.k1) / ds.k2;
    CHECK(gamma > 0.0);
    for (double omega_p : {1e11, 1e12, 5e12}) {
        const double predicted =
            pump_bandwidth_matched_detunings(gamma, omega_p).plus;
        auto f = [&](double omega_s) {
            // idler detuning chosen so the pump sits at omega_p0 + omega_p
            return pump_detuned_mismatch(test::kdp(), kcfg, omega_s,
                                         omega_s - omega_p, 24.0, 0.0);
        };
        const auto root = bracketed_root(f, 0.3 * predicted, 3.0 * predicted, 1e-9);
        CHECK(root.converged);
        CHECK(std::abs(root.x - predicted) / predicted < 0.03);
    }
}

TEST_CASE("polarization assignment conventions") {
    // negative uniaxial, unpoled type-I: ordinary pair, extraordinary pump
    auto cfg = MatchingConfig::collinear_degenerate("KDP", MatchingType::type_1, 0.3511,
                                                    0.8, 0.02);
    auto a = assign_polarizations(test::kdp(), cfg);
    CHECK(a.pump.kind == Polarization::Kind::extraordinary);
    CHECK(a.signal.kind == Polarization::Kind::ordinary);
    CHECK(a.idler.kind == Polarization::Kind::ordinary);

    // poled type-I rides the pump axis
    cfg.poling = UniformPoling{27.4};
    a = assign_polarizations(test::kdp(), cfg);
    CHECK(a.signal.kind == Polarization::Kind::extraordinary);
    CHECK(a.idler.kind == Polarization::Kind::extraordinary);
}
