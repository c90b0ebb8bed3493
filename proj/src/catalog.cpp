#include "biphoton/catalog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "biphoton/errors.hpp"

namespace biphoton {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& obj, const std::set<std::string>& known,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ParseError(where + ": unknown field '" + it.key() + "'");
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    if (!obj.at(key).is_number())
        throw ParseError(where + ": field '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

SellmeierForm parse_sellmeier(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": must be an object");
    reject_unknown_fields(obj, {"form_id", "A", "resonances", "D"}, where);
    if (!obj.contains("form_id") || obj.at("form_id") != "standard")
        throw ParseError(where + ": form_id must be \"standard\"");
    SellmeierForm form;
    form.a = require_number(obj, "A", where);
    form.d_per_um2 = require_number(obj, "D", where);
    if (!obj.contains("resonances") || !obj.at("resonances").is_array())
        throw ParseError(where + ": missing resonance array");
    for (const auto& term : obj.at("resonances")) {
        reject_unknown_fields(term, {"B", "C"}, where + "/resonances");
        form.resonances.push_back({require_number(term, "B", where + "/resonances"),
                                   require_number(term, "C", where + "/resonances")});
    }
    return form;
}

ThermoOpticCoefficient parse_thermo(const json& val, const std::string& where) {
    if (val.is_number()) return ThermoOpticCoefficient::constant(val.get<double>());
    if (val.is_array()) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& row : val) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
                !row[1].is_number())
                throw ParseError(where + ": table rows must be [wavelength_um, eta] pairs");
            rows.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        if (rows.empty()) throw ParseError(where + ": empty thermo-optic table");
        return ThermoOpticCoefficient::tabulated(std::move(rows));
    }
    throw ParseError(where + ": expected a number or a table of pairs");
}

CrystalRecord parse_record(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": record must be an object");
    reject_unknown_fields(obj,
                          {"name", "symmetry", "sellmeier_o", "sellmeier_e",
                           "thermo_optic_o", "thermo_optic_e", "electro_optic_o",
                           "electro_optic_e", "transparency", "reference_temperature"},
                          where);
    CrystalRecord rec;
    if (!obj.contains("name") || !obj.at("name").is_string())
        throw ParseError(where + ": missing string field 'name'");
    rec.name = obj.at("name").get<std::string>();
    const std::string ctx = where + " (" + rec.name + ")";

    if (!obj.contains("symmetry")) throw ParseError(ctx + ": missing field 'symmetry'");
    const std::string sym = obj.at("symmetry").get<std::string>();
    if (sym == "uniaxial-negative")
        rec.symmetry = CrystalSymmetry::uniaxial_negative;
    else if (sym == "uniaxial-positive")
        rec.symmetry = CrystalSymmetry::uniaxial_positive;
    else
        throw ParseError(ctx + ": symmetry must be uniaxial-negative or uniaxial-positive");

    if (!obj.contains("sellmeier_o") || !obj.contains("sellmeier_e"))
        throw ParseError(ctx + ": both sellmeier_o and sellmeier_e required");
    rec.sellmeier_o = parse_sellmeier(obj.at("sellmeier_o"), ctx + "/sellmeier_o");
    rec.sellmeier_e = parse_sellmeier(obj.at("sellmeier_e"), ctx + "/sellmeier_e");

    if (!obj.contains("thermo_optic_o") || !obj.contains("thermo_optic_e"))
        throw ParseError(ctx + ": both thermo_optic_o and thermo_optic_e required");
    rec.thermo_optic_o = parse_thermo(obj.at("thermo_optic_o"), ctx + "/thermo_optic_o");
    rec.thermo_optic_e = parse_thermo(obj.at("thermo_optic_e"), ctx + "/thermo_optic_e");

    rec.electro_optic_o = require_number(obj, "electro_optic_o", ctx);
    rec.electro_optic_e = require_number(obj, "electro_optic_e", ctx);

    if (!obj.contains("transparency") || !obj.at("transparency").is_array() ||
        obj.at("transparency").size() != 2)
        throw ParseError(ctx + ": transparency must be [lambda_min_um, lambda_max_um]");
    rec.transparency_min_um = obj.at("transparency")[0].get<double>();
    rec.transparency_max_um = obj.at("transparency")[1].get<double>();
    rec.reference_temperature_c = require_number(obj, "reference_temperature", ctx);
    return rec;
}

json sellmeier_to_json(const SellmeierForm& form) {
    json obj;
    obj["form_id"] = "standard";
    obj["A"] = form.a;
    json terms = json::array();
    for (const auto& r : form.resonances) terms.push_back({{"B", r.b}, {"C", r.c_um2}});
    obj["resonances"] = terms;
    obj["D"] = form.d_per_um2;
    return obj;
}

json thermo_to_json(const ThermoOpticCoefficient& eta) {
    if (eta.is_constant()) return eta.table().front().second;
    json rows = json::array();
    for (const auto& [lam, val] : eta.table()) rows.push_back({lam, val});
    return rows;
}

}  // namespace

const CrystalRecord& Catalog::find(const std::string& name) const {
    if (const CrystalRecord* rec = try_find(name)) return *rec;
    throw ConfigError("catalog: no crystal named '" + name + "'");
}

const CrystalRecord* Catalog::try_find(const std::string& name) const {
    for (const auto& rec : records)
        if (rec.name == name) return &rec;
    return nullptr;
}

Catalog parse_catalog(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ParseError(origin + ": " + err.what());
    }
    if (!doc.is_array())
        throw ParseError(origin + ": catalog must be a top-level JSON array of records");

    Catalog catalog;
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = origin + ": record " + std::to_string(i);
        CrystalRecord rec = parse_record(doc[i], where);
        if (!names.insert(rec.name).second)
            throw ValidationError(where + ": duplicate crystal name '" + rec.name + "'");
        rec.validate();
        catalog.records.push_back(std::move(rec));
    }
    return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_catalog(buffer.str(), path.string());
}

std::string serialize_catalog(const Catalog& catalog) {
    json doc = json::array();
    for (const auto& rec : catalog.records) {
        json obj;
        obj["name"] = rec.name;
        obj["symmetry"] = rec.symmetry == CrystalSymmetry::uniaxial_negative
                              ? "uniaxial-negative"
                              : "uniaxial-positive";
        obj["sellmeier_o"] = sellmeier_to_json(rec.sellmeier_o);
        obj["sellmeier_e"] = sellmeier_to_json(rec.sellmeier_e);
        obj["thermo_optic_o"] = thermo_to_json(rec.thermo_optic_o);
        obj["thermo_optic_e"] = thermo_to_json(rec.thermo_optic_e);
        obj["electro_optic_o"] = rec.electro_optic_o;
        obj["electro_optic_e"] = rec.electro_optic_e;
        obj["transparency"] = {rec.transparency_min_um, rec.transparency_max_um};
        obj["reference_temperature"] = rec.reference_temperature_c;
        doc.push_back(obj);
    }
    return doc.dump(2) + "\n";
}

}  // namespace biphoton
