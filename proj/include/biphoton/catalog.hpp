#ifndef BIPHOTON_CATALOG_HPP
#define BIPHOTON_CATALOG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "biphoton/crystal.hpp"

namespace biphoton {

struct Catalog {
    std::vector<CrystalRecord> records;

    const CrystalRecord& find(const std::string& name) const;
    const CrystalRecord* try_find(const std::string& name) const;
};

// Catalog file format: a JSON array of records with field names matching
// CrystalRecord. Wavelengths in um, eta in 1/K, beta in m/V, temperatures in
// degrees C. Unknown fields are rejected; every record must pass validate();
// duplicate names are rejected.
Catalog parse_catalog(const std::string& json_text,
                      const std::string& origin = "<memory>");
Catalog load_catalog(const std::filesystem::path& path);
std::string serialize_catalog(const Catalog& catalog);

}  // namespace biphoton

#endif
