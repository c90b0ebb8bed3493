// Correlation functions of delay: Wiener-Khinchin transform, time amplitude,
// second-order correlation, coincidence dip and the derived metrics.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/correlations.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/rootfind.hpp"
#include "biphoton/spectral.hpp"

using namespace biphoton;

namespace {

FrequencyGrid fgrid(double half_span, int points) { return {half_span, points}; }
TimeGrid tgrid(double half_span, int points) { return {half_span, points}; }

SampledIntensity rectangle_spectrum(double half_width, double half_span, int points) {
    SampledIntensity s;
    s.grid = fgrid(half_span, points);
    s.values.resize(points, 0.0);
    for (int i = 0; i < points; ++i)
        if (std::abs(s.grid.omega(i)) <= half_width) s.values[i] = 1.0;
    return s;
}

SampledIntensity gaussian_spectrum(double sigma, double half_span, int points) {
    SampledIntensity s;
    s.grid = fgrid(half_span, points);
    s.values.resize(points);
    for (int i = 0; i < points; ++i) {
        const double o = s.grid.omega(i);
        s.values[i] = std::exp(-o * o / (2.0 * sigma * sigma));
    }
    return s;
}

SpectralAmplitude gaussian_amplitude(double sigma, double half_span, int points) {
    SpectralAmplitude f;
    f.grid = fgrid(half_span, points);
    f.values.resize(points);
    for (int i = 0; i < points; ++i) {
        const double o = f.grid.omega(i);
        f.values[i] = std::exp(-o * o / (4.0 * sigma * sigma));  // |F|^2 Gaussian sigma
    }
    f.provenance.scale = 1.0;
    return f;
}

}  // namespace

TEST_CASE("g1 of a rectangular spectrum is a sinc with the reciprocal zero") {
    const double a = 5e13;  // half-width; full width dOmega = 1e14
    const auto s = rectangle_spectrum(a, 4.0 * a, 2049);
    const double tau_zero = two_pi / (2.0 * a);
    const auto trace = g1(s, tgrid(3.0 * tau_zero, 4097));

    CHECK(trace.values[trace.grid.center_index()] == doctest::Approx(1.0));
    for (int i = 0; i < trace.grid.points; i += 37) {
        const double tau = trace.grid.tau(i);
        CHECK(trace.values[i] ==
              doctest::Approx(sinc(a * tau)).epsilon(5e-3).scale(1.0));
        CHECK(std::abs(trace.values[i]) <= 1.0 + 1e-12);
        // even in tau by construction
        CHECK(trace.values[i] == trace.values[trace.grid.points - 1 - i]);
    }
    // first zero at 2 pi / dOmega
    auto interp = [&](double tau) {
        const double x = (tau + trace.grid.half_span) / trace.grid.spacing();
        const int j = static_cast<int>(x);
        const double t = x - j;
        return (1.0 - t) * trace.values[j] + t * trace.values[j + 1];
    };
    const auto zero = bracketed_root(interp, 0.7 * tau_zero, 1.3 * tau_zero, 1e-9);
    CHECK(zero.converged);
    CHECK(zero.x == doctest::Approx(tau_zero).epsilon(0.01));
}

TEST_CASE("g1 of a Gaussian spectrum meets the time-bandwidth product") {
    const double sigma = 2e13;
    const auto s = gaussian_spectrum(sigma, 8.0 * sigma, 1025);
    const auto trace = g1(s, tgrid(6.0 / sigma, 2049));
    const double product = correlation_width(trace) * width_metrics(s).fwhm;
    CHECK(product == doctest::Approx(8.0 * std::log(2.0)).epsilon(0.01));
}

TEST_CASE("broadening the spectrum rescales g1 delays reciprocally") {
    const double sigma = 1e13;
    const auto s1 = gaussian_spectrum(sigma, 6.0 * sigma, 1025);
    SampledIntensity s2 = s1;  // same samples on a doubled grid = 2x broader
    s2.grid.half_span *= 2.0;
    const auto t1 = g1(s1, tgrid(4.0 / sigma, 1025));
    const auto t2 = g1(s2, tgrid(2.0 / sigma, 1025));  // half the delay span
    for (int i = 0; i < 1025; ++i)
        CHECK(std::abs(t2.values[i] - t1.values[i]) < 1e-6);
    CHECK(correlation_width(t1) ==
          doctest::Approx(2.0 * correlation_width(t2)).epsilon(1e-3));
}

TEST_CASE("time amplitude of a real symmetric Gaussian stays real") {
    const double sigma = 1.5e13;
    const auto f = gaussian_amplitude(sigma, 8.0 * sigma, 1025);
    const auto ta = time_amplitude(f, tgrid(5.0 / sigma, 2049));
    double worst_imag = 0.0, peak = 0.0;
    for (const auto& v : ta.values) {
        worst_imag = std::max(worst_imag, std::abs(v.imag()));
        peak = std::max(peak, std::abs(v));
    }
    CHECK(worst_imag / peak < 1e-9);
    CHECK(ta.parseval_ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("linear spectral phase shifts the time amplitude without reshaping") {
    const double sigma = 1.5e13;
    const double tau0 = 500.0 * (2.0 * (5.0 / sigma) / 4096.0);  // exact grid multiple
    auto f = gaussian_amplitude(sigma, 8.0 * sigma, 1025);
    auto shifted = f;
    for (int i = 0; i < f.grid.points; ++i)
        shifted.values[i] *= std::polar(1.0, f.grid.omega(i) * tau0);
    const auto grid = tgrid(5.0 / sigma, 4097);
    const auto base = time_amplitude(f, grid);
    const auto moved = time_amplitude(shifted, grid);

    auto argmax = [&](const TimeAmplitude& t) {
        int best = 0;
        for (int i = 1; i < t.grid.points; ++i)
            if (std::abs(t.values[i]) > std::abs(t.values[best])) best = i;
        return best;
    };
    const int i_base = argmax(base);
    const int i_moved = argmax(moved);
    CHECK(std::abs(grid.tau(i_moved) - (grid.tau(i_base) - tau0)) <=
          2.0 * grid.spacing());
    // magnitude profile preserved under the shift
    const int offset = i_base - i_moved;
    for (int i = 1000; i < 3000; i += 17) {
        CHECK(std::abs(moved.values[i]) ==
              doctest::Approx(std::abs(base.values[i + offset])).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("the two g2 forms coincide for a symmetric real amplitude") {
    const double sigma = 1.5e13;
    const auto f = gaussian_amplitude(sigma, 8.0 * sigma, 1025);
    const auto grid = tgrid(5.0 / sigma, 1025);
    const auto a = g2(f, grid, G2Form::complex_exponential);
    const auto b = g2(f, grid, G2Form::cosine);
    for (int i = 0; i < grid.points; ++i)
        CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
}

TEST_CASE("g2 of a zero-phase Gaussian saturates the Fourier limit") {
    // |F|^2 = exp(-w^2/2s^2) has FWHM 2 s sqrt(2 ln 2); the amplitude
    // transform gives |F~|^2 = exp(-2 s^2 t^2) with FWHM sqrt(2 ln 2)/s,
    // so the Gaussian Fourier-limit product is 4 ln 2.
    const double sigma = 1.5e13;
    const auto f = gaussian_amplitude(sigma, 8.0 * sigma, 1025);
    const auto grid = tgrid(5.0 / sigma, 2049);
    const auto trace = g2(f, grid, G2Form::complex_exponential);
    const double fwhm_w = width_metrics(spectral_intensity(f)).fwhm;
    CHECK(correlation_width(trace) * fwhm_w ==
          doctest::Approx(4.0 * std::log(2.0)).epsilon(0.02));
}

TEST_CASE("spectral phase broadens g2 but never sharpens it") {
    const double sigma = 1.5e13;
    const auto flat = gaussian_amplitude(sigma, 8.0 * sigma, 513);
    const auto grid = tgrid(8.0 / sigma, 1025);
    const double width_flat = correlation_width(g2(flat, grid));

    // a strong quadratic chirp visibly broadens the correlation
    auto chirped = flat;
    for (int i = 0; i < flat.grid.points; ++i) {
        const double x = flat.grid.omega(i) / sigma;
        chirped.values[i] *= std::polar(1.0, 2.5 * x * x);
    }
    CHECK(correlation_width(g2(chirped, grid)) > 1.5 * width_flat);

    // randomized smooth phases: the flat-phase width is the floor
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double c2 = coeff(rng), c3 = coeff(rng), ca = coeff(rng), cb = coeff(rng);
        auto perturbed = flat;
        for (int i = 0; i < flat.grid.points; ++i) {
            const double x = flat.grid.omega(i) / sigma;
            perturbed.values[i] *=
                std::polar(1.0, c2 * x * x + c3 * x * x * x + ca * std::sin(3.0 * x + cb));
        }
        CHECK(correlation_width(g2(perturbed, grid)) >= width_flat * (1.0 - 1e-9));
    }
}

TEST_CASE("coincidence dip follows 1 - g1(2 tau)") {
    // analytic sinc-shaped g1 trace
    const double a = 5e13;
    CorrelationTrace base;
    base.kind = TraceKind::g1;
    base.grid = tgrid(2e-13, 4097);
    base.values.resize(base.grid.points);
    for (int i = 0; i < base.grid.points; ++i)
        base.values[i] = sinc(a * base.grid.tau(i));

    const auto dip = hom_dip(base, tgrid(1e-13, 4097));
    CHECK(dip.values[dip.grid.center_index()] == doctest::Approx(0.0).epsilon(1e-12));
    // commensurate grids: the dip samples land on g1 nodes exactly
    for (int i = 0; i < dip.grid.points; i += 13) {
        const double expected = 1.0 - sinc(a * 2.0 * dip.grid.tau(i));
        CHECK(std::abs(dip.values[i] - expected) < 1e-9);
    }

    // independent recomputation at 100 random delays
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> delay(-9e-14, 9e-14);
    const auto s = rectangle_spectrum(a, 4.0 * a, 2049);
    const auto smooth_g1 = g1(s, tgrid(2e-13, 4097));
    const auto smooth_dip = hom_dip(smooth_g1, tgrid(1e-13, 4097));
    double norm = 0.0;
    for (int i = 0; i < s.grid.points; ++i)
        norm += ((i == 0 || i == s.grid.points - 1) ? 0.5 : 1.0) * s.values[i];
    for (int trial = 0; trial < 100; ++trial) {
        const double tau = delay(rng);
        const int j = static_cast<int>(std::lround(
            (tau + smooth_dip.grid.half_span) / smooth_dip.grid.spacing()));
        const double tau_j = smooth_dip.grid.tau(j);
        double acc = 0.0;
        for (int i = 0; i < s.grid.points; ++i) {
            const double w = (i == 0 || i == s.grid.points - 1) ? 0.5 : 1.0;
            acc += w * s.values[i] * std::cos(s.grid.omega(i) * 2.0 * tau_j);
        }
        CHECK(std::abs(smooth_dip.values[j] - (1.0 - acc / norm)) < 1e-6);
    }
}

TEST_CASE("dip width is half the g1 width") {
    const double sigma = 2e13;
    const auto s = gaussian_spectrum(sigma, 8.0 * sigma, 1025);
    const auto base = g1(s, tgrid(6.0 / sigma, 4097));
    const auto dip = hom_dip(base, tgrid(3.0 / sigma, 4097));
    CHECK(correlation_width(dip) ==
          doctest::Approx(0.5 * correlation_width(base)).epsilon(0.01));

    // requesting delays beyond the g1 domain is an error
    CHECK_THROWS_AS(hom_dip(base, tgrid(4.0 / sigma, 129)), ValidationError);
}

TEST_CASE("correlation width conventions") {
    // rectangular spectrum: g1 = sinc, half level at x ~ 1.8955, so
    // dtau = 4 x_half / dOmega with dOmega the full rectangle width
    const double a = 5e13;
    const auto s = rectangle_spectrum(a, 4.0 * a, 2049);
    const auto trace = g1(s, tgrid(2.4e-13, 8193));
    const auto half =
        bracketed_root([](double x) { return sinc(x) - 0.5; }, 1.0, 2.4, 1e-12);
    REQUIRE(half.converged);
    CHECK(half.x == doctest::Approx(1.8954942670).epsilon(1e-8));
    CHECK(correlation_width(trace) == doctest::Approx(2.0 * half.x / a).epsilon(0.01));

    // Gaussian closed form
    const double sigma = 2e13;
    const auto gs = gaussian_spectrum(sigma, 8.0 * sigma, 1025);
    const auto gt = g1(gs, tgrid(6.0 / sigma, 4097));
    CHECK(correlation_width(gt) ==
          doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) / sigma).epsilon(0.005));

    // a flat trace has no interior half crossing
    CorrelationTrace monotone;
    monotone.kind = TraceKind::g1;
    monotone.grid = tgrid(1e-13, 129);
    monotone.values.assign(129, 1.0);
    CHECK_THROWS_AS(correlation_width(monotone), NumericalError);
}

TEST_CASE("effective wavelength halves") {
    CHECK(effective_wavelength(702.2) == doctest::Approx(351.1));
    CHECK(effective_wavelength(1000.0) == doctest::Approx(500.0));
    CHECK(effective_wavelength(effective_wavelength(1000.0)) == doctest::Approx(250.0));
    CHECK_THROWS_AS(effective_wavelength(0.0), ValidationError);
}

TEST_CASE("tomography resolutions") {
    const auto res = tomography_resolutions(10e-15);
    CHECK(res.oct_m == doctest::Approx(2.99792458e-6).epsilon(1e-12));
    CHECK(res.qoct_m == doctest::Approx(res.oct_m / 2.0).epsilon(1e-15));
    const auto doubled = tomography_resolutions(20e-15);
    CHECK(doubled.oct_m == doctest::Approx(2.0 * res.oct_m));
    CHECK(doubled.qoct_m == doctest::Approx(2.0 * res.qoct_m));
}
