#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bmscrew/fixate.hpp"
#include "bmscrew/insertion.hpp"
#include "bmscrew/model.hpp"
#include "bmscrew/plan.hpp"

namespace bmscrew::io {

using json = nlohmann::json;  // std::map-backed: keys serialize sorted

/// Scenario parse/validation failure; maps to CLI exit code 2.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct AnalysisRequest {
    std::string type;  // section | shape-check | torque-check | plan | insert | fixate
    double station = 0.0;        // section
    double delta = 40.0;         // shape/torque-check tunnel tip offset, mm
    double length = 35.0;        // shape/torque-check tunnel length, mm
    bool solid_control = false;  // shape-check: bend the unnotched annulus
    double head_torque = 150.0;  // torque-check, N*mm
    double friction_coefficient = -1.0;  // torque-check override; <0 = bone value
    double cutting_density = 0.0;        // torque-check, N*mm per mm
    double cutting_begin = 0.0;
    double cutting_end = 0.0;
    double tension = 25.0;       // plan / insert / fixate, N
    double load_offset = 15.0;   // fixate, mm
    double cut_width = 2.0;      // fixate, mm
    bool with_screw = true;      // fixate
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;  // sorted ascending at parse time
};

struct Scenario {
    int schema_version = 1;
    std::string name;
    model::ScrewSpec screw;  // notches filled with the default pattern if omitted
    insertion::BoneSpec bone;
    plan::DrillParams drill;
    std::vector<std::pair<double, double>> calibration{{5.0, 5.3}, {25.0, 10.0}};
    double conformity_beta = rod::kDefaultConformity;
    double torque_budget = 150.0;     // N*mm
    double baseline_capacity = 10.0;  // N, calibrated unfixed fixture
    std::vector<AnalysisRequest> analyses;
    std::vector<SweepAxis> sweep_axes;
};

Scenario parse_scenario(const json& j, const std::string& name);
Scenario load_scenario(const std::filesystem::path& path);

/// Round-half-even to 9 significant digits; all report numbers pass through
/// this so serialization is canonical.
double canon(double v);

uint64_t fnv1a(std::string_view bytes);

std::string canonical_dump(const json& j);

/// All defaults materialized back into a document (no silent defaults).
json resolved_inputs(const Scenario& sc);

struct CsvFile {
    std::string name;
    std::string content;
};

struct RunResult {
    json report;
    int exit_code = 0;  // 0 all PASS, 1 any FAIL (2 is the CLI's input-error code)
    std::vector<CsvFile> csv_files;
};

RunResult run_scenario(const Scenario& sc);
RunResult run_sweep(const Scenario& sc, int jobs = 1);

}  // namespace bmscrew::io
