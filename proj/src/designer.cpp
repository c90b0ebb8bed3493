#include "biphoton/designer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "biphoton/errors.hpp"

namespace biphoton {

double loss(std::span<const double> achieved, std::span<const double> target,
            LossNorm norm) {
    if (achieved.size() != target.size())
        throw ValidationError("loss: sample counts differ");
    if (achieved.empty()) throw ValidationError("loss: empty samples");
    double acc = 0.0;
    for (std::size_t i = 0; i < achieved.size(); ++i) {
        const double d = achieved[i] - target[i];
        acc += norm == LossNorm::l2 ? d * d : std::abs(d);
    }
    acc /= static_cast<double>(achieved.size());
    return norm == LossNorm::l2 ? std::sqrt(acc) : acc;
}

int DesignProblem::parameter_count() const {
    if (const auto* s = std::get_if<SectionedTemperatureParam>(&parameterization))
        return s->sections;
    if (const auto* f = std::get_if<SectionedFieldParam>(&parameterization))
        return f->sections;
    return 1;
}

void DesignProblem::bounds(std::vector<double>& lower, std::vector<double>& upper) const {
    lower.clear();
    upper.clear();
    if (const auto* s = std::get_if<SectionedTemperatureParam>(&parameterization)) {
        lower.assign(s->sections, s->lower_c);
        upper.assign(s->sections, s->upper_c);
    } else if (const auto* g = std::get_if<LinearGradientParam>(&parameterization)) {
        lower.assign(1, g->lower_gradient);
        upper.assign(1, g->upper_gradient);
    } else if (const auto* f = std::get_if<SectionedFieldParam>(&parameterization)) {
        lower.assign(f->sections, f->lower_v_per_m);
        upper.assign(f->sections, f->upper_v_per_m);
    } else {
        const auto& c = std::get<PolingChirpParam>(parameterization);
        lower.assign(1, c.lower_alpha);
        upper.assign(1, c.upper_alpha);
    }
}

namespace {

std::vector<double> uniform_boundaries(int sections, double length) {
    std::vector<double> b(sections + 1);
    for (int i = 0; i <= sections; ++i)
        b[i] = length * static_cast<double>(i) / sections;
    return b;
}

}  // namespace

LongitudinalProfile DesignProblem::make_profile(std::span<const double> parameters) const {
    const double L = cfg.crystal_length_m;
    if (const auto* s = std::get_if<SectionedTemperatureParam>(&parameterization)) {
        return LongitudinalProfile::sectioned(
            ProfileQuantity::temperature, L, uniform_boundaries(s->sections, L),
            {parameters.begin(), parameters.end()},
            LongitudinalProfile::SectionInterp::midpoint_linear);
    }
    if (const auto* g = std::get_if<LinearGradientParam>(&parameterization)) {
        return LongitudinalProfile::linear(ProfileQuantity::temperature, L,
                                           g->start_value, parameters[0]);
    }
    if (const auto* f = std::get_if<SectionedFieldParam>(&parameterization)) {
        return LongitudinalProfile::sectioned(
            ProfileQuantity::field, L, uniform_boundaries(f->sections, L),
            {parameters.begin(), parameters.end()},
            LongitudinalProfile::SectionInterp::midpoint_linear);
    }
    const auto& c = std::get<PolingChirpParam>(parameterization);
    return LongitudinalProfile::linear(ProfileQuantity::poling_wavenumber, L,
                                       c.k0_rad_per_um, parameters[0] * 1e6);
}

void DesignProblem::validate() const {
    cfg.validate();
    target_grid.validate();
    if (static_cast<int>(target.size()) != target_grid.points)
        throw ValidationError("design: target sample count must match its grid");
    double peak = 0.0;
    for (double v : target) {
        if (v < 0.0) throw ValidationError("design: target must be nonnegative");
        peak = std::max(peak, v);
    }
    if (std::abs(peak - 1.0) > 1e-9)
        throw ValidationError("design: target must be peak-normalized");
    std::vector<double> lo, hi;
    bounds(lo, hi);
    if (lo.empty()) throw ValidationError("design: at least one free parameter required");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i])
            throw ValidationError("design: bounds must be finite and ordered");
    }
    if (optimizer.restarts < 1 || optimizer.max_evaluations < 1)
        throw ValidationError("design: optimizer needs restarts and evaluations >= 1");
}

namespace {

// Catmull-Rom on the achieved spectrum's uniform grid, clamped ends.
double cubic_sample(const FrequencyGrid& grid, const std::vector<double>& y,
                    double omega) {
    const double x = (omega + grid.half_span) / grid.spacing();
    const int n = grid.points;
    if (x <= 0.0) return y.front();
    if (x >= n - 1) return y.back();
    const int j = std::min(static_cast<int>(x), n - 2);
    const double t = x - j;
    const double p0 = y[std::max(j - 1, 0)];
    const double p1 = y[j];
    const double p2 = y[j + 1];
    const double p3 = y[std::min(j + 2, n - 1)];
    return p1 + 0.5 * t *
                    (p2 - p0 +
                     t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                          t * (3.0 * (p1 - p2) + p3 - p0)));
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Forward {
    const DesignProblem& problem;
    const ProfileAmplitudeModel& model;
    std::vector<double>* trace;
    int* evaluations;

    // Parameters in physical units -> loss against the target.
    double operator()(std::span<const double> params) const {
        ++*evaluations;
        double value = std::numeric_limits<double>::infinity();
        try {
            const LongitudinalProfile profile = problem.make_profile(params);
            const SampledIntensity s = spectral_intensity(model.evaluate(profile));
            std::vector<double> resampled(problem.target.size());
            for (int i = 0; i < problem.target_grid.points; ++i)
                resampled[i] =
                    cubic_sample(s.grid, s.values, problem.target_grid.omega(i));
            const double peak = *std::max_element(resampled.begin(), resampled.end());
            if (peak > 0.0)
                for (auto& v : resampled) v /= peak;
            value = loss(resampled, problem.target, problem.norm);
        } catch (const std::exception&) {
            // candidate outside the physical domain: assign +inf and move on
        }
        trace->push_back(value);
        return value;
    }
};

ProfileQuantity parameterization_quantity(const Parameterization& p) {
    if (std::holds_alternative<SectionedFieldParam>(p)) return ProfileQuantity::field;
    if (std::holds_alternative<PolingChirpParam>(p))
        return ProfileQuantity::poling_wavenumber;
    return ProfileQuantity::temperature;
}

}  // namespace

DesignResult design_profile(const DesignProblem& problem) {
    problem.validate();
    std::vector<double> lo, hi;
    problem.bounds(lo, hi);
    const int dim = static_cast<int>(lo.size());

    // Dimensions with collapsed bounds are pinned, not searched.
    std::vector<int> free_dims;
    for (int d = 0; d < dim; ++d)
        if (hi[d] > lo[d]) free_dims.push_back(d);
    const int nfree = static_cast<int>(free_dims.size());

    DesignResult result;
    int evaluations = 0;
    const ProfileAmplitudeModel model(problem.crystal, problem.cfg,
                                      parameterization_quantity(problem.parameterization),
                                      problem.target_grid, problem.phase_mode,
                                      problem.quadrature);
    Forward forward{problem, model, &result.loss_trace, &evaluations};

    auto to_physical = [&](std::span<const double> u) {
        std::vector<double> p(lo);
        for (int f = 0; f < nfree; ++f) {
            const int d = free_dims[f];
            p[d] = lo[d] + (hi[d] - lo[d]) * sigmoid(u[f]);
        }
        return p;
    };

    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    bool best_converged = false;
    int best_restart = -1;

    for (int restart = 0; restart < problem.optimizer.restarts; ++restart) {
        std::mt19937_64 rng(problem.optimizer.seed ^
                            (0x9E3779B97F4A7C15ull * (restart + 1)));
        std::uniform_real_distribution<double> interior(0.10, 0.90);

        if (nfree == 0) {
            const auto p = to_physical({});
            const double f = forward(p);
            if (f < best_loss) {
                best_loss = f;
                best_params = p;
                best_converged = true;
                best_restart = restart;
            }
            continue;
        }

        // Simplex in the unconstrained coordinates.
        std::vector<std::vector<double>> verts(nfree + 1,
                                               std::vector<double>(nfree, 0.0));
        for (int f = 0; f < nfree; ++f) verts[0][f] = logit(interior(rng));
        for (int v = 1; v <= nfree; ++v) {
            verts[v] = verts[0];
            verts[v][v - 1] += 0.5;
        }
        std::vector<double> fvals(nfree + 1);
        int used = 0;
        for (int v = 0; v <= nfree; ++v) {
            fvals[v] = forward(to_physical(verts[v]));
            ++used;
        }

        bool converged = false;
        while (used < problem.optimizer.max_evaluations) {
            std::vector<int> order(nfree + 1);
            for (int v = 0; v <= nfree; ++v) order[v] = v;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return fvals[a] < fvals[b]; });
            const int vb = order[0], vw = order[nfree], vs = order[nfree - 1];
            if (std::isfinite(fvals[vb]) &&
                fvals[vw] - fvals[vb] < problem.optimizer.tolerance) {
                converged = true;
                break;
            }

            std::vector<double> centroid(nfree, 0.0);
            for (int v = 0; v <= nfree; ++v) {
                if (v == vw) continue;
                for (int f = 0; f < nfree; ++f) centroid[f] += verts[v][f];
            }
            for (auto& c : centroid) c /= nfree;

            auto blend = [&](double coeff) {
                std::vector<double> x(nfree);
                for (int f = 0; f < nfree; ++f)
                    x[f] = centroid[f] + coeff * (centroid[f] - verts[vw][f]);
                return x;
            };

            auto reflected = blend(1.0);
            const double fr = forward(to_physical(reflected));
            ++used;
            if (fr < fvals[vb]) {
                auto expanded = blend(2.0);
                const double fe = forward(to_physical(expanded));
                ++used;
                if (fe < fr) {
                    verts[vw] = expanded;
                    fvals[vw] = fe;
                } else {
                    verts[vw] = reflected;
                    fvals[vw] = fr;
                }
            } else if (fr < fvals[vs]) {
                verts[vw] = reflected;
                fvals[vw] = fr;
            } else {
                auto contracted = blend(fr < fvals[vw] ? 0.5 : -0.5);
                const double fc = forward(to_physical(contracted));
                ++used;
                if (fc < std::min(fr, fvals[vw])) {
                    verts[vw] = contracted;
                    fvals[vw] = fc;
                } else {
                    // shrink toward the best vertex
                    for (int v = 0; v <= nfree; ++v) {
                        if (v == vb) continue;
                        for (int f = 0; f < nfree; ++f)
                            verts[v][f] = verts[vb][f] + 0.5 * (verts[v][f] - verts[vb][f]);
                        fvals[v] = forward(to_physical(verts[v]));
                        ++used;
                    }
                }
            }
        }

        int vbest = 0;
        for (int v = 1; v <= nfree; ++v)
            if (fvals[v] < fvals[vbest]) vbest = v;
        if (fvals[vbest] < best_loss) {
            best_loss = fvals[vbest];
            best_params = to_physical(verts[vbest]);
            best_converged = converged;
            best_restart = restart;
        }
    }

    if (!std::isfinite(best_loss))
        throw NumericalError("design_profile: every candidate failed the forward model");

    result.parameters = best_params;
    result.loss_value = best_loss;
    result.evaluations = evaluations;
    result.converged = best_converged;
    result.best_restart = best_restart;
    result.spectrum = model.evaluate(problem.make_profile(result.parameters));
    return result;
}

}  // namespace biphoton
