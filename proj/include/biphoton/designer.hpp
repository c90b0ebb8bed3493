#ifndef BIPHOTON_DESIGNER_HPP
#define BIPHOTON_DESIGNER_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "biphoton/spectral.hpp"

namespace biphoton {

enum class LossNorm { l2, l1 };

// Root-mean-square (l2) or mean-absolute (l1) distance between two sampled
// shapes on the same grid.
double loss(std::span<const double> achieved, std::span<const double> target,
            LossNorm norm);

struct SimplexSpec {
    std::uint64_t seed = 1;
    int restarts = 8;
    int max_evaluations = 2000;  // per restart
    double tolerance = 1e-10;    // convergence on the simplex loss spread
};

// How the free parameters map onto a longitudinal profile.
struct SectionedTemperatureParam {
    int sections = 5;
    double lower_c = 0.0, upper_c = 0.0;
};
struct LinearGradientParam {
    double start_value = 0.0;  // profile value at z = 0 (fixed)
    double lower_gradient = 0.0, upper_gradient = 0.0;  // K/m
};
struct SectionedFieldParam {
    int sections = 5;
    double lower_v_per_m = 0.0, upper_v_per_m = 0.0;
};
struct PolingChirpParam {
    double k0_rad_per_um = 0.0;  // fixed reciprocal vector at z = 0
    double lower_alpha = 0.0, upper_alpha = 0.0;  // rad/um^2
};
using Parameterization = std::variant<SectionedTemperatureParam, LinearGradientParam,
                                      SectionedFieldParam, PolingChirpParam>;

struct DesignProblem {
    CrystalRecord crystal;
    MatchingConfig cfg;
    Parameterization parameterization;
    FrequencyGrid target_grid;
    std::vector<double> target;  // nonnegative, peak 1
    LossNorm norm = LossNorm::l2;
    SimplexSpec optimizer;
    PhaseMode phase_mode = PhaseMode::accumulated;
    // Coarser than the spectrum default: the target is produced by the same
    // discretization, so the search is self-consistent at any panel count.
    QuadratureSpec quadrature{1e-4, 1024, 1 << 14};

    int parameter_count() const;
    void bounds(std::vector<double>& lower, std::vector<double>& upper) const;
    LongitudinalProfile make_profile(std::span<const double> parameters) const;
    void validate() const;
};

struct DesignResult {
    std::vector<double> parameters;
    SpectralAmplitude spectrum;
    double loss_value = 0.0;
    std::vector<double> loss_trace;  // one entry per forward evaluation
    int evaluations = 0;
    bool converged = false;
    int best_restart = -1;
};

// Bounded derivative-free simplex search with seeded restarts. Box bounds are
// mapped through a sigmoid so the simplex itself runs unconstrained. Fully
// deterministic for a fixed seed; failed forward evaluations score +inf.
DesignResult design_profile(const DesignProblem& problem);

}  // namespace biphoton

#endif
