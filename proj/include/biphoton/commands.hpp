#ifndef BIPHOTON_COMMANDS_HPP
#define BIPHOTON_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace biphoton {

// Exit codes shared by every command:
//   0 ok, 2 config/parse, 3 validation, 4 numerical, 5 non-convergence
// under --strict.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_validation = 3;
inline constexpr int exit_numerical = 4;
inline constexpr int exit_unconverged = 5;

struct CommandOptions {
    std::filesystem::path config;
    std::filesystem::path output_prefix = "out";
    bool strict = false;
    bool gnuplot = false;
    std::string sweep_parameter;
    std::vector<double> sweep_values;
};

int cmd_catalog_validate(const std::filesystem::path& catalog_path, std::ostream& out);
int cmd_spectrum(const CommandOptions& options, std::ostream& out);
int cmd_sweep(const CommandOptions& options, std::ostream& out);
int cmd_correlations(const CommandOptions& options, std::ostream& out);
int cmd_design(const CommandOptions& options, std::ostream& out);
int cmd_phase_match(const CommandOptions& options, std::ostream& out);

}  // namespace biphoton

#endif
