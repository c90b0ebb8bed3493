#include "biphoton/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/io_util.hpp"

namespace biphoton {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& err) {
        throw ParseError(path.string() + ": " + err.what());
    }
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    if (!obj.at(key).is_number())
        throw ParseError(where + ": field '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<double>();
}

constexpr double deg = pi / 180.0;
constexpr double kv_per_cm_to_v_per_m = 1e5;

MatchingConfig parse_matching(const json& m, const std::string& crystal_name,
                              AngleSolveMode& angle_mode, const std::string& where) {
    MatchingConfig cfg;
    cfg.crystal = crystal_name;

    const std::string type = m.value("type", "type-I");
    if (type == "type-I")
        cfg.type = MatchingType::type_1;
    else if (type == "type-II")
        cfg.type = MatchingType::type_2;
    else
        throw ParseError(where + ": type must be type-I or type-II");

    cfg.pump_wavelength_um = number_at(m, "pump_wavelength_nm", where) * 1e-3;
    if (m.contains("signal_wavelength_nm")) {
        cfg.signal_wavelength_um = m.at("signal_wavelength_nm").get<double>() * 1e-3;
        const double wi = omega_from_wavelength_um(cfg.pump_wavelength_um) -
                          omega_from_wavelength_um(cfg.signal_wavelength_um);
        if (!(wi > 0.0))
            throw ParseError(where + ": signal frequency must lie below the pump");
        cfg.idler_wavelength_um = wavelength_um_from_omega(wi);
        cfg.degenerate = std::abs(cfg.signal_wavelength_um - 2.0 * cfg.pump_wavelength_um) <
                         1e-12 * cfg.pump_wavelength_um;
    } else {
        cfg.degenerate = true;
        cfg.signal_wavelength_um = 2.0 * cfg.pump_wavelength_um;
        cfg.idler_wavelength_um = 2.0 * cfg.pump_wavelength_um;
    }

    if (m.contains("geometry")) {
        const auto& g = m.at("geometry");
        if (g.is_string() && g == "collinear") {
            // default
        } else if (g.is_object()) {
            NoncollinearGeometry nc;
            nc.signal_angle_rad = number_at(g, "signal_angle_deg", where) * deg;
            nc.idler_angle_rad = number_at(g, "idler_angle_deg", where) * deg;
            cfg.noncollinear = nc;
        } else {
            throw ParseError(where + ": geometry must be \"collinear\" or an angle object");
        }
    }

    if (m.contains("poling")) {
        const auto& p = m.at("poling");
        if (p.is_string() && p == "none") {
            // default
        } else if (p.is_object() && p.contains("period_um")) {
            cfg.poling = UniformPoling{number_at(p, "period_um", where)};
        } else if (p.is_object() && p.contains("k0_rad_per_um")) {
            cfg.poling = ChirpedPoling{number_at(p, "k0_rad_per_um", where),
                                       number_at(p, "alpha_rad_per_um2", where)};
        } else {
            throw ParseError(where +
                             ": poling must be \"none\", {period_um} or "
                             "{k0_rad_per_um, alpha_rad_per_um2}");
        }
    }

    angle_mode = AngleSolveMode::given;
    if (m.contains("pump_axis_angle_deg")) {
        const auto& a = m.at("pump_axis_angle_deg");
        if (a.is_string()) {
            if (a == "auto")
                angle_mode = AngleSolveMode::at_reference;
            else if (a == "auto-profile-max")
                angle_mode = AngleSolveMode::at_profile_max;
            else
                throw ParseError(where +
                                 ": pump_axis_angle_deg must be a number, \"auto\" or "
                                 "\"auto-profile-max\"");
        } else {
            cfg.pump_axis_angle_rad = a.get<double>() * deg;
        }
    }

    cfg.crystal_length_m = number_at(m, "crystal_length_mm", where) * 1e-3;
    cfg.pump_angular_width = number_or(m, "pump_angular_width_rad_per_m", 0.0);
    cfg.pump_spectral_width = number_or(m, "pump_spectral_width_thz", 0.0) * two_pi * 1e12;
    return cfg;
}

LongitudinalProfile parse_profile(const json& p, double length_m,
                                  const std::filesystem::path& base_dir,
                                  const std::string& where) {
    const std::string quantity_name = p.value("quantity", "temperature");
    ProfileQuantity quantity;
    double unit = 1.0;
    if (quantity_name == "temperature") {
        quantity = ProfileQuantity::temperature;
    } else if (quantity_name == "field") {
        quantity = ProfileQuantity::field;
        unit = kv_per_cm_to_v_per_m;  // CLI boundary carries kV/cm
    } else if (quantity_name == "poling_wavenumber") {
        quantity = ProfileQuantity::poling_wavenumber;
    } else {
        throw ParseError(where + ": unknown profile quantity '" + quantity_name + "'");
    }

    const std::string kind = p.value("kind", "");
    if (kind == "uniform")
        return LongitudinalProfile::uniform(quantity, length_m,
                                            number_at(p, "value", where) * unit);
    if (kind == "linear")
        return LongitudinalProfile::linear(quantity, length_m,
                                           number_at(p, "start", where) * unit,
                                           number_at(p, "gradient_per_m", where) * unit);
    if (kind == "sectioned") {
        if (!p.contains("values") || !p.at("values").is_array())
            throw ParseError(where + ": sectioned profile needs a values array");
        std::vector<double> values;
        for (const auto& v : p.at("values")) values.push_back(v.get<double>() * unit);
        std::vector<double> boundaries;
        if (p.contains("boundaries_mm")) {
            for (const auto& b : p.at("boundaries_mm"))
                boundaries.push_back(b.get<double>() * 1e-3);
        } else {
            for (std::size_t i = 0; i <= values.size(); ++i)
                boundaries.push_back(length_m * static_cast<double>(i) / values.size());
        }
        const std::string interp = p.value("interpolation", "midpoint-linear");
        auto mode = LongitudinalProfile::SectionInterp::midpoint_linear;
        if (interp == "step")
            mode = LongitudinalProfile::SectionInterp::step;
        else if (interp != "midpoint-linear")
            throw ParseError(where + ": interpolation must be step or midpoint-linear");
        return LongitudinalProfile::sectioned(quantity, length_m, std::move(boundaries),
                                              std::move(values), mode);
    }
    if (kind == "tabulated") {
        if (p.contains("csv")) {
            auto rows = read_two_column_csv(base_dir / p.at("csv").get<std::string>());
            for (auto& [z, v] : rows) v *= unit;
            return LongitudinalProfile::tabulated(quantity, length_m, std::move(rows));
        }
        if (!p.contains("samples") || !p.at("samples").is_array())
            throw ParseError(where + ": tabulated profile needs samples or a csv path");
        std::vector<std::pair<double, double>> rows;
        for (const auto& s : p.at("samples"))
            rows.emplace_back(s[0].get<double>(), s[1].get<double>() * unit);
        return LongitudinalProfile::tabulated(quantity, length_m, std::move(rows));
    }
    throw ParseError(where + ": profile kind must be uniform, linear, sectioned or tabulated");
}

}  // namespace

void SimulationConfig::resolve_angle() {
    if (angle_mode == AngleSolveMode::given) return;
    std::optional<double> solve_temperature;
    if (angle_mode == AngleSolveMode::at_profile_max) {
        if (!profile || profile->quantity != ProfileQuantity::temperature)
            throw ConfigError(
                "pump_axis_angle_deg = auto-profile-max requires a temperature profile");
        solve_temperature = profile_extremes(*profile).max_value;
    }
    matching.pump_axis_angle_rad = solve_pump_axis_angle(
        crystal(), matching, solve_temperature, ambient_field_v_per_m);
    angle_mode = AngleSolveMode::given;
}

FrequencyGrid SimulationConfig::make_grid() const {
    FrequencyGrid grid;
    grid.points = grid_points;
    if (span_override_thz) {
        grid.half_span = omega_from_thz(*span_override_thz);
    } else {
        grid.half_span = auto_half_span(crystal(), matching, profile,
                                        ambient_temperature_c, ambient_field_v_per_m);
    }
    grid.validate();
    return grid;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
    const json doc = load_json(path);
    const std::string where = path.string();
    if (doc.value("schema_version", 0) != 1)
        throw ParseError(where + ": schema_version must be 1");

    SimulationConfig config;
    const std::filesystem::path base_dir = path.parent_path();
    if (doc.contains("catalog")) {
        std::filesystem::path cat = doc.at("catalog").get<std::string>();
        config.catalog_path = cat.is_absolute() ? cat : base_dir / cat;
    } else if (const char* env = std::getenv(catalog_env_var)) {
        config.catalog_path = env;
    } else {
        throw ParseError(where + ": no catalog path and " + std::string(catalog_env_var) +
                         " unset");
    }
    config.catalog = load_catalog(config.catalog_path);

    if (!doc.contains("crystal"))
        throw ParseError(where + ": missing field 'crystal'");
    config.crystal_name = doc.at("crystal").get<std::string>();
    config.catalog.find(config.crystal_name);  // must exist

    if (!doc.contains("matching"))
        throw ParseError(where + ": missing 'matching' object");
    config.matching = parse_matching(doc.at("matching"), config.crystal_name,
                                     config.angle_mode, where + "/matching");

    config.ambient_temperature_c =
        doc.value("temperature_c", config.crystal().reference_temperature_c);
    config.ambient_field_v_per_m =
        doc.value("field_kv_per_cm", 0.0) * kv_per_cm_to_v_per_m;

    if (doc.contains("profile"))
        config.profile = parse_profile(doc.at("profile"), config.matching.crystal_length_m,
                                       base_dir, where + "/profile");

    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        config.grid_points = static_cast<int>(g.value("points", 2049));
        if (g.contains("span_thz"))
            config.span_override_thz = g.at("span_thz").get<double>();
    }
    if (doc.contains("quadrature")) {
        const auto& q = doc.at("quadrature");
        config.quadrature.tol = q.value("tol", 1e-6);
        config.quadrature.initial_panels = static_cast<int>(q.value("initial_panels", 64));
        config.quadrature.max_panels = static_cast<int>(q.value("max_panels", 1 << 20));
    }
    const std::string mode = doc.value("phase_mode", "accumulated");
    if (mode == "accumulated")
        config.phase_mode = PhaseMode::accumulated;
    else if (mode == "paper-literal")
        config.phase_mode = PhaseMode::paper_literal;
    else
        throw ParseError(where + ": phase_mode must be accumulated or paper-literal");

    config.matching.validate();
    return config;
}

DesignDocument load_design_problem(const std::filesystem::path& path) {
    const json doc = load_json(path);
    const std::string where = path.string();
    DesignDocument out;
    out.base = load_simulation_config(path);
    out.base.resolve_angle();

    DesignProblem& problem = out.problem;
    problem.crystal = out.base.crystal();
    problem.cfg = out.base.matching;
    problem.phase_mode = out.base.phase_mode;

    if (!doc.contains("parameterization"))
        throw ParseError(where + ": missing 'parameterization'");
    const auto& par = doc.at("parameterization");
    const std::string kind = par.value("kind", "");
    if (kind == "sectioned-temperature") {
        SectionedTemperatureParam s;
        s.sections = static_cast<int>(number_at(par, "sections", where));
        s.lower_c = par.at("bounds_c")[0].get<double>();
        s.upper_c = par.at("bounds_c")[1].get<double>();
        problem.parameterization = s;
    } else if (kind == "linear-gradient") {
        LinearGradientParam g;
        g.start_value = number_at(par, "start_c", where);
        g.lower_gradient = par.at("bounds_k_per_m")[0].get<double>();
        g.upper_gradient = par.at("bounds_k_per_m")[1].get<double>();
        problem.parameterization = g;
    } else if (kind == "sectioned-field") {
        SectionedFieldParam f;
        f.sections = static_cast<int>(number_at(par, "sections", where));
        f.lower_v_per_m = par.at("bounds_kv_per_cm")[0].get<double>() * kv_per_cm_to_v_per_m;
        f.upper_v_per_m = par.at("bounds_kv_per_cm")[1].get<double>() * kv_per_cm_to_v_per_m;
        problem.parameterization = f;
    } else if (kind == "poling-chirp") {
        PolingChirpParam c;
        c.k0_rad_per_um = number_at(par, "k0_rad_per_um", where);
        c.lower_alpha = par.at("bounds_rad_per_um2")[0].get<double>();
        c.upper_alpha = par.at("bounds_rad_per_um2")[1].get<double>();
        problem.parameterization = c;
    } else {
        throw ParseError(where + ": unknown parameterization kind '" + kind + "'");
    }

    if (!doc.contains("target")) throw ParseError(where + ": missing 'target'");
    const auto& tgt = doc.at("target");
    if (tgt.contains("csv")) {
        const auto rows =
            read_two_column_csv(path.parent_path() / tgt.at("csv").get<std::string>());
        const int n = static_cast<int>(rows.size());
        if (n < 129 || n % 2 == 0)
            throw ParseError(where + ": target CSV needs an odd row count >= 129");
        problem.target_grid.points = n;
        problem.target_grid.half_span = (rows.back().first - rows.front().first) / 2.0;
        problem.target.reserve(n);
        for (const auto& [omega, value] : rows) problem.target.push_back(value);
    } else {
        problem.target_grid.points = static_cast<int>(number_at(tgt, "points", where));
        problem.target_grid.half_span = omega_from_thz(number_at(tgt, "span_thz", where));
        if (!tgt.contains("values") || !tgt.at("values").is_array())
            throw ParseError(where + ": target needs a values array or a csv path");
        for (const auto& v : tgt.at("values")) problem.target.push_back(v.get<double>());
    }

    const std::string norm = doc.value("loss", "L2");
    if (norm == "L2")
        problem.norm = LossNorm::l2;
    else if (norm == "L1")
        problem.norm = LossNorm::l1;
    else
        throw ParseError(where + ": loss must be L2 or L1");

    if (doc.contains("optimizer")) {
        const auto& opt = doc.at("optimizer");
        problem.optimizer.seed = opt.value("seed", 1ull);
        problem.optimizer.restarts = static_cast<int>(opt.value("restarts", 8));
        problem.optimizer.max_evaluations =
            static_cast<int>(opt.value("max_evaluations", 2000));
        problem.optimizer.tolerance = opt.value("tolerance", 1e-10);
    }
    // The designer default quadrature is coarser than the spectrum default;
    // only an explicit block overrides it.
    if (doc.contains("quadrature")) problem.quadrature = out.base.quadrature;
    problem.validate();
    return out;
}

}  // namespace biphoton
