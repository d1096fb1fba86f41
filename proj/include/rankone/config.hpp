#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankone/certificate.hpp"
#include "rankone/space.hpp"

namespace rankone {

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(const std::string& msg, std::string fld)
        : std::runtime_error(msg + " (field: " + fld + ")"), field(std::move(fld)) {}
};

/// One scenario: a space, an exponent pair, a multiplier, grids/tolerances.
struct ScenarioConfig {
    SpaceParams space;
    std::string space_label = "H3";
    double p = 1.5;
    std::vector<double> q_list = {2.0};
    std::string multiplier_expr = "heat(1)";
    std::map<std::string, double> multiplier_params;
    std::string variant = "main";
    uint64_t seed = 0;
    std::string out_dir = ".";

    double kernel_epsilon = 1e-4;
    double kernel_t_max = 16.0;
    int kernel_n_points = 4096;
    double spherical_crossover = 0.5;
    int spherical_max_terms = 60;
    std::optional<double> tol_override;

    CertificateOptions certificate_options() const;
};

/// Parses and validates the JSON scenario file; throws ConfigError with the
/// offending field on schema violations (q outside [p, p'], bad preset, ...).
ScenarioConfig load_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

// --- artifact emission ---------------------------------------------------------

/// Serializes the report with a fixed key order; byte-stable for fixed inputs.
std::string certificate_to_json(const CertificateReport& rep);
std::string certificate_to_markdown(const CertificateReport& rep);
/// CSV companion: quantity, refinement level, value.
std::string certificate_to_csv(const CertificateReport& rep);

struct EmittedFiles {
    std::vector<std::string> paths;
};

/// Writes certificate artifacts (certificate.json, certificate.csv,
/// certificate.md) under out_dir.
EmittedFiles emit_report(const CertificateReport& rep, const std::string& out_dir,
                         const std::vector<std::string>& formats = {"json", "csv", "markdown"});

/// Writes a CSV table (header + rows of doubles) with stable formatting.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// Exit-code contract shared by the CLI: 0 ok, 2 config, 3 hypothesis gate,
/// 4 numerical divergence.
int exit_code_for(const CertificateReport& rep);

} // namespace rankone
