#include "biphoton/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/errors.hpp"

namespace biphoton {

const char* profile_quantity_name(ProfileQuantity q) {
    switch (q) {
        case ProfileQuantity::temperature: return "temperature";
        case ProfileQuantity::field: return "field";
        case ProfileQuantity::poling_wavenumber: return "poling_wavenumber";
    }
    return "?";
}

namespace {

double interp_clamped(const std::vector<std::pair<double, double>>& nodes, double x) {
    if (x <= nodes.front().first) return nodes.front().second;
    if (x >= nodes.back().first) return nodes.back().second;
    auto upper = std::upper_bound(nodes.begin(), nodes.end(), x,
                                  [](double v, const auto& n) { return v < n.first; });
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

}  // namespace

double LongitudinalProfile::evaluate(double z_m) const {
    if (z_m < 0.0 || z_m > length_m)
        throw ValidationError("profile: z = " + std::to_string(z_m) +
                              " outside [0, " + std::to_string(length_m) + "]");
    if (const auto* u = std::get_if<Uniform>(&shape)) return u->value;
    if (const auto* l = std::get_if<Linear>(&shape))
        return l->start + l->gradient_per_m * z_m;
    if (const auto* s = std::get_if<Sectioned>(&shape)) {
        const auto& zb = s->boundaries;
        if (s->interp == SectionInterp::step) {
            if (z_m < zb.front()) return s->values.front();
            if (z_m >= zb.back()) return s->values.back();
            // half-open [z_{i-1}, z_i): a boundary belongs to the section on its right
            auto it = std::upper_bound(zb.begin(), zb.end(), z_m);
            const std::size_t idx = static_cast<std::size_t>(it - zb.begin());
            return s->values[std::min(idx - 1, s->values.size() - 1)];
        }
        std::vector<std::pair<double, double>> midpoints;
        midpoints.reserve(s->values.size());
        for (std::size_t i = 0; i < s->values.size(); ++i)
            midpoints.emplace_back(0.5 * (zb[i] + zb[i + 1]), s->values[i]);
        return interp_clamped(midpoints, z_m);
    }
    const auto& t = std::get<Tabulated>(shape);
    return interp_clamped(t.samples, z_m);
}

void LongitudinalProfile::validate() const {
    if (!(length_m > 0.0)) throw ValidationError("profile: domain length must be positive");
    if (const auto* s = std::get_if<Sectioned>(&shape)) {
        if (s->values.empty()) throw ValidationError("profile: sectioned kind needs values");
        if (s->boundaries.size() != s->values.size() + 1)
            throw ValidationError("profile: sectioned kind needs N+1 boundaries for N values");
        for (std::size_t i = 0; i < s->boundaries.size(); ++i) {
            if (s->boundaries[i] < 0.0 || s->boundaries[i] > length_m)
                throw ValidationError("profile: section boundary outside [0, L]");
            if (i > 0 && !(s->boundaries[i] > s->boundaries[i - 1]))
                throw ValidationError("profile: section boundaries must increase strictly");
        }
    } else if (const auto* t = std::get_if<Tabulated>(&shape)) {
        if (t->samples.empty()) throw ValidationError("profile: empty table");
        for (std::size_t i = 0; i < t->samples.size(); ++i) {
            if (t->samples[i].first < 0.0 || t->samples[i].first > length_m)
                throw ValidationError("profile: table node outside [0, L]");
            if (i > 0 && !(t->samples[i].first > t->samples[i - 1].first))
                throw ValidationError("profile: table positions must increase strictly");
        }
    }
}

LongitudinalProfile LongitudinalProfile::uniform(ProfileQuantity q, double length_m,
                                                 double value) {
    LongitudinalProfile p;
    p.quantity = q;
    p.length_m = length_m;
    p.shape = Uniform{value};
    p.validate();
    return p;
}

LongitudinalProfile LongitudinalProfile::linear(ProfileQuantity q, double length_m,
                                                double start, double gradient_per_m) {
    LongitudinalProfile p;
    p.quantity = q;
    p.length_m = length_m;
    p.shape = Linear{start, gradient_per_m};
    p.validate();
    return p;
}

LongitudinalProfile LongitudinalProfile::sectioned(ProfileQuantity q, double length_m,
                                                   std::vector<double> boundaries,
                                                   std::vector<double> values,
                                                   SectionInterp interp) {
    LongitudinalProfile p;
    p.quantity = q;
    p.length_m = length_m;
    p.shape = Sectioned{std::move(boundaries), std::move(values), interp};
    p.validate();
    return p;
}

LongitudinalProfile LongitudinalProfile::tabulated(
    ProfileQuantity q, double length_m, std::vector<std::pair<double, double>> samples) {
    LongitudinalProfile p;
    p.quantity = q;
    p.length_m = length_m;
    p.shape = Tabulated{std::move(samples)};
    p.validate();
    return p;
}

ProfileExtremes profile_extremes(const LongitudinalProfile& profile) {
    const double L = profile.length_m;
    if (const auto* u = std::get_if<LongitudinalProfile::Uniform>(&profile.shape))
        return {u->value, u->value, 0.0, 0.0};
    if (const auto* l = std::get_if<LongitudinalProfile::Linear>(&profile.shape)) {
        const double end = l->start + l->gradient_per_m * L;
        if (l->gradient_per_m >= 0.0) return {l->start, end, 0.0, L};
        return {end, l->start, L, 0.0};
    }

    // Grid scan at 4096 cells, then refine inside the best cells.
    constexpr int n = 4097;
    ProfileExtremes ext;
    ext.min_value = ext.max_value = profile.evaluate(0.0);
    int min_i = 0, max_i = 0;
    for (int i = 1; i < n; ++i) {
        const double z = L * i / (n - 1);
        const double v = profile.evaluate(z);
        if (v < ext.min_value) { ext.min_value = v; ext.min_position = z; min_i = i; }
        if (v > ext.max_value) { ext.max_value = v; ext.max_position = z; max_i = i; }
    }
    auto refine = [&](int center_i, bool want_max, double& value, double& position) {
        const double cell = L / (n - 1);
        const double lo = std::max(0.0, (center_i - 1) * cell);
        const double hi = std::min(L, (center_i + 1) * cell);
        constexpr int m = 257;
        for (int j = 0; j < m; ++j) {
            const double z = lo + (hi - lo) * j / (m - 1);
            const double v = profile.evaluate(z);
            if ((want_max && v > value) || (!want_max && v < value)) {
                value = v;
                position = z;
            }
        }
    };
    refine(min_i, false, ext.min_value, ext.min_position);
    refine(max_i, true, ext.max_value, ext.max_position);
    return ext;
}

LongitudinalProfile steady_state_temperature(const HeaterSpec& spec, int grid_points) {
    if (spec.n_sections < 1) throw ValidationError("heater: n_sections must be >= 1");
    if (!(spec.section_length_m > 0.0))
        throw ValidationError("heater: section length must be positive");
    if (static_cast<int>(spec.section_powers_w.size()) != spec.n_sections)
        throw ValidationError("heater: one power per section required");
    for (double p : spec.section_powers_w)
        if (p < 0.0) throw ValidationError("heater: powers must be nonnegative");
    if (!(spec.rod_conductance > 0.0))
        throw ValidationError("heater: conductance must be positive");
    if (spec.ambient_loss_coefficient < 0.0)
        throw ValidationError("heater: loss coefficient must be nonnegative");
    if (grid_points < 8) throw ValidationError("heater: need at least 8 grid points");

    const double L = spec.n_sections * spec.section_length_m;
    const int n = grid_points;
    const double dz = L / (n - 1);
    const double kappa = spec.rod_conductance;
    const double h = spec.ambient_loss_coefficient;
    const double t_amb = spec.cold_end_temperature_c;

    // Volumetric source, W/m, sampled at nodes (node on a boundary belongs to
    // the right-hand section).
    auto source = [&](double z) {
        int idx = static_cast<int>(z / spec.section_length_m);
        idx = std::clamp(idx, 0, spec.n_sections - 1);
        return spec.section_powers_w[idx] / spec.section_length_m;
    };

    // -kappa (T_{j-1} - 2 T_j + T_{j+1})/dz^2 + h T_j = p_j + h T_amb
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    diag[0] = 1.0;
    rhs[0] = spec.cold_end_temperature_c;
    const double a = kappa / (dz * dz);
    for (int j = 1; j < n - 1; ++j) {
        lower[j] = -a;
        diag[j] = 2.0 * a + h;
        upper[j] = -a;
        rhs[j] = source(j * dz) + h * t_amb;
    }
    // zero-flux far end via the ghost-node reflection T_{n} = T_{n-2}
    lower[n - 1] = -2.0 * a;
    diag[n - 1] = 2.0 * a + h;
    rhs[n - 1] = source(L) + h * t_amb;

    // Thomas solve
    for (int j = 1; j < n; ++j) {
        const double w = lower[j] / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
        if (!std::isfinite(diag[j]) || diag[j] == 0.0)
            throw ConfigError("heater: singular thermal system");
    }
    std::vector<double> temp(n, 0.0);
    temp[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int j = n - 2; j >= 0; --j)
        temp[j] = (rhs[j] - upper[j] * temp[j + 1]) / diag[j];

    std::vector<std::pair<double, double>> samples(n);
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(temp[j]))
            throw ConfigError("heater: thermal solve produced a non-finite temperature");
        samples[j] = {j * dz, temp[j]};
    }
    return LongitudinalProfile::tabulated(ProfileQuantity::temperature, L,
                                          std::move(samples));
}

}  // namespace biphoton
