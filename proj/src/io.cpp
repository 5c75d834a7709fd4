#include "bmscrew/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bmscrew/version.hpp"

namespace bmscrew::io {

namespace {

// InvalidGeometry/InvalidMaterial messages already start with "field: ";
// drop that so ScenarioError does not repeat it.
std::string strip_field(const std::string& field, std::string msg) {
    std::string prefix = field + ": ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    return msg;
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j.at(field).is_number())
        throw ScenarioError(field, "missing or non-numeric value");
    return j.at(field).get<double>();
}

double number_or(const json& j, const std::string& field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number()) throw ScenarioError(field, "must be a number");
    return j.at(field).get<double>();
}

int int_or(const json& j, const std::string& field, int fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number_integer()) throw ScenarioError(field, "must be an integer");
    return j.at(field).get<int>();
}

bool bool_or(const json& j, const std::string& field, bool fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_boolean()) throw ScenarioError(field, "must be a boolean");
    return j.at(field).get<bool>();
}

std::string string_or(const json& j, const std::string& field, const std::string& fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_string()) throw ScenarioError(field, "must be a string");
    return j.at(field).get<std::string>();
}

model::MaterialSpec parse_material(const json& j, const model::MaterialSpec& base,
                                   const std::string& prefix) {
    model::MaterialSpec m = base;
    m.youngs_modulus = number_or(j, "youngs_modulus_mpa", m.youngs_modulus);
    m.poisson_ratio = number_or(j, "poisson_ratio", m.poisson_ratio);
    m.yield_strength = number_or(j, "yield_strength_mpa", m.yield_strength);
    m.ultimate_strength = number_or(j, "ultimate_strength_mpa", m.ultimate_strength);
    m.recoverable_strain = number_or(j, "recoverable_strain", m.recoverable_strain);
    m.shear_strength = number_or(j, "shear_strength_mpa", m.shear_strength);
    m.friction_coefficient = number_or(j, "friction_coefficient", m.friction_coefficient);
    try {
        m.validate();
    } catch (const InvalidMaterial& e) {
        throw ScenarioError(prefix + "." + e.field(), strip_field(e.field(), e.what()));
    }
    return m;
}

json material_json(const model::MaterialSpec& m) {
    return json{{"youngs_modulus_mpa", canon(m.youngs_modulus)},
                {"poisson_ratio", canon(m.poisson_ratio)},
                {"yield_strength_mpa", canon(m.yield_strength)},
                {"ultimate_strength_mpa", canon(m.ultimate_strength)},
                {"recoverable_strain", canon(m.recoverable_strain)},
                {"shear_strength_mpa", canon(m.shear_strength)},
                {"friction_coefficient", canon(m.friction_coefficient)}};
}

const std::set<std::string> kAnalysisTypes = {"section", "shape-check", "torque-check",
                                              "plan",    "insert",      "fixate"};
const std::set<std::string> kAxisNames = {"tension",       "notch_depth", "notch_width",
                                          "notch_pitch",   "head_torque", "load_offset",
                                          "torque_budget", "delta",       "bone_shear_strength"};

}  // namespace

double canon(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

uint64_t fnv1a(std::string_view bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

Scenario parse_scenario(const json& j, const std::string& name) {
    if (!j.is_object()) throw ScenarioError("$", "scenario document must be a JSON object");
    Scenario sc;
    sc.name = name;
    sc.schema_version = int_or(j, "schema_version", kSchemaVersion);
    if (sc.schema_version != kSchemaVersion)
        throw ScenarioError("schema_version", "unrecognized schema version");

    // Screw block; every omitted field falls back to the paper geometry.
    sc.screw = model::reference_screw();
    json screw_j = j.value("screw", json::object());
    sc.screw.core_diameter = number_or(screw_j, "core_diameter_mm", sc.screw.core_diameter);
    sc.screw.outer_diameter = number_or(screw_j, "outer_diameter_mm", sc.screw.outer_diameter);
    sc.screw.cannula_diameter =
        number_or(screw_j, "cannula_diameter_mm", sc.screw.cannula_diameter);
    sc.screw.overall_length = number_or(screw_j, "overall_length_mm", sc.screw.overall_length);
    sc.screw.thread_count = int_or(screw_j, "thread_count", sc.screw.thread_count);
    sc.screw.thread_pitch = number_or(screw_j, "thread_pitch_mm", sc.screw.thread_pitch);
    sc.screw.thread_form = string_or(screw_j, "thread_form", sc.screw.thread_form);
    sc.screw.tapping_thread_count =
        int_or(screw_j, "tapping_thread_count", sc.screw.tapping_thread_count);
    sc.screw.head_tip_radius = number_or(screw_j, "head_tip_radius_mm", sc.screw.head_tip_radius);

    model::NotchPattern pattern = model::default_notch_pattern(sc.screw);
    if (screw_j.contains("notches")) {
        const json& nj = screw_j.at("notches");
        if (!nj.is_object()) throw ScenarioError("screw.notches", "must be an object");
        pattern.depth = number_or(nj, "depth_mm", pattern.depth);
        pattern.width = number_or(nj, "width_mm", pattern.width);
        pattern.pitch = number_or(nj, "pitch_mm", pattern.pitch);
        std::string plane = string_or(nj, "start_plane", "a");
        if (plane != "a" && plane != "b")
            throw ScenarioError("screw.notches.start_plane", "must be \"a\" or \"b\"");
        pattern.start_plane = plane == "a" ? model::NotchPlane::A : model::NotchPlane::B;
    }
    sc.screw.notches = pattern;
    if (screw_j.contains("material"))
        sc.screw.material = parse_material(screw_j.at("material"), model::nitinol(),
                                           "screw.material");

    sc.bone.material = model::foam_15pcf();
    if (j.contains("bone")) {
        const json& bj = j.at("bone");
        if (!bj.is_object()) throw ScenarioError("bone", "must be an object");
        sc.bone.descriptor = string_or(bj, "descriptor", sc.bone.descriptor);
        if (bj.contains("block_dimensions_mm")) {
            const json& dims = bj.at("block_dimensions_mm");
            if (!dims.is_array() || dims.size() != 3)
                throw ScenarioError("bone.block_dimensions_mm", "must be an array of 3 numbers");
            for (int i = 0; i < 3; ++i) sc.bone.block_dimensions[i] = dims[i].get<double>();
        }
        if (bj.contains("material"))
            sc.bone.material =
                parse_material(bj.at("material"), model::foam_15pcf(), "bone.material");
    }

    if (j.contains("drill")) {
        const json& dj = j.at("drill");
        sc.drill.feed_rate = number_or(dj, "feed_rate_mm_s", sc.drill.feed_rate);
        sc.drill.spindle_speed = number_or(dj, "spindle_speed_rpm", sc.drill.spindle_speed);
        sc.drill.drill_diameter = number_or(dj, "drill_diameter_mm", sc.drill.drill_diameter);
        sc.drill.manipulator_length =
            number_or(dj, "manipulator_length_mm", sc.drill.manipulator_length);
        sc.drill.manipulator_od = number_or(dj, "manipulator_od_mm", sc.drill.manipulator_od);
        sc.drill.manipulator_id = number_or(dj, "manipulator_id_mm", sc.drill.manipulator_id);
    }

    if (j.contains("calibration")) {
        const json& cj = j.at("calibration");
        if (!cj.is_array() || cj.empty())
            throw ScenarioError("calibration", "must be a non-empty array of [tension, deflection]");
        sc.calibration.clear();
        for (const auto& p : cj) {
            if (!p.is_array() || p.size() != 2)
                throw ScenarioError("calibration", "each anchor must be [tension, deflection]");
            sc.calibration.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    }

    json fixtures = j.value("fixtures", json::object());
    sc.conformity_beta = number_or(fixtures, "conformity_beta", sc.conformity_beta);
    sc.torque_budget = number_or(fixtures, "torque_budget_nmm", sc.torque_budget);
    sc.baseline_capacity = number_or(fixtures, "baseline_capacity_n", sc.baseline_capacity);

    if (j.contains("analyses")) {
        const json& aj = j.at("analyses");
        if (!aj.is_array()) throw ScenarioError("analyses", "must be an array");
        for (std::size_t i = 0; i < aj.size(); ++i) {
            const json& a = aj[i];
            std::string where = "analyses[" + std::to_string(i) + "]";
            if (!a.is_object()) throw ScenarioError(where, "must be an object");
            AnalysisRequest req;
            req.type = string_or(a, "type", "");
            if (!kAnalysisTypes.count(req.type))
                throw ScenarioError(where + ".type", "unknown analysis type '" + req.type + "'");
            req.station = number_or(a, "station_mm", req.station);
            req.delta = number_or(a, "delta_mm", req.delta);
            req.length = number_or(a, "length_mm", req.length);
            req.solid_control = bool_or(a, "solid_control", req.solid_control);
            req.head_torque = number_or(a, "head_torque_nmm", req.head_torque);
            req.friction_coefficient =
                number_or(a, "friction_coefficient", req.friction_coefficient);
            req.cutting_density = number_or(a, "cutting_density_nmm_per_mm", req.cutting_density);
            req.cutting_begin = number_or(a, "cutting_begin_mm", req.cutting_begin);
            req.cutting_end = number_or(a, "cutting_end_mm", req.cutting_end);
            req.tension = number_or(a, "tension_n", req.tension);
            req.load_offset = number_or(a, "load_offset_mm", req.load_offset);
            req.cut_width = number_or(a, "cut_width_mm", req.cut_width);
            req.with_screw = bool_or(a, "with_screw", req.with_screw);
            sc.analyses.push_back(std::move(req));
        }
    }

    if (j.contains("sweep")) {
        const json& sj = j.at("sweep");
        if (!sj.is_object() || !sj.contains("axes") || !sj.at("axes").is_array())
            throw ScenarioError("sweep.axes", "sweep requires an axes array");
        for (std::size_t i = 0; i < sj.at("axes").size(); ++i) {
            const json& ax = sj.at("axes")[i];
            std::string where = "sweep.axes[" + std::to_string(i) + "]";
            SweepAxis axis;
            axis.name = string_or(ax, "name", "");
            if (!kAxisNames.count(axis.name))
                throw ScenarioError(where + ".name", "unknown sweep parameter '" + axis.name + "'");
            if (ax.contains("values")) {
                for (const auto& v : ax.at("values")) axis.values.push_back(v.get<double>());
            } else {
                double from = require_number(ax, "from");
                double to = require_number(ax, "to");
                int count = int_or(ax, "count", 0);
                if (count < 2) throw ScenarioError(where + ".count", "sweep counts must be >= 2");
                for (int k = 0; k < count; ++k)
                    axis.values.push_back(from + (to - from) * k / (count - 1));
            }
            if (axis.values.size() < 2)
                throw ScenarioError(where + ".values", "sweep counts must be >= 2");
            std::sort(axis.values.begin(), axis.values.end());
            sc.sweep_axes.push_back(std::move(axis));
        }
    }

    try {
        sc.drill.validate();
        sc.bone.validate();
        model::validate_screw_spec(sc.screw);
        plan::calibrate(sc.calibration);
    } catch (const InvalidGeometry& e) {
        throw ScenarioError(e.field(), strip_field(e.field(), e.what()));
    } catch (const InvalidMaterial& e) {
        throw ScenarioError(e.field(), strip_field(e.field(), e.what()));
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("scenario", e.what());
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path.string(), "cannot open scenario file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path.string(), e.what());
    }
    return parse_scenario(j, path.stem().string());
}

json resolved_inputs(const Scenario& sc) {
    const model::ScrewSpec& s = sc.screw;
    json screw{{"core_diameter_mm", canon(s.core_diameter)},
               {"outer_diameter_mm", canon(s.outer_diameter)},
               {"cannula_diameter_mm", canon(s.cannula_diameter)},
               {"overall_length_mm", canon(s.overall_length)},
               {"thread_count", s.thread_count},
               {"thread_pitch_mm", canon(s.thread_pitch)},
               {"thread_form", s.thread_form},
               {"tapping_thread_count", s.tapping_thread_count},
               {"head_tip_radius_mm", canon(s.head_tip_radius)},
               {"material", material_json(s.material)}};
    if (s.notches) {
        screw["notches"] = json{{"depth_mm", canon(s.notches->depth)},
                                {"width_mm", canon(s.notches->width)},
                                {"pitch_mm", canon(s.notches->pitch)},
                                {"start_plane", model::to_string(s.notches->start_plane)}};
    }
    json calibration = json::array();
    for (const auto& [t, d] : sc.calibration)
        calibration.push_back(json::array({canon(t), canon(d)}));
    return json{
        {"schema_version", sc.schema_version},
        {"screw", screw},
        {"bone",
         {{"descriptor", sc.bone.descriptor},
          {"block_dimensions_mm",
           json::array({canon(sc.bone.block_dimensions[0]), canon(sc.bone.block_dimensions[1]),
                        canon(sc.bone.block_dimensions[2])})},
          {"material", material_json(sc.bone.material)}}},
        {"drill",
         {{"feed_rate_mm_s", canon(sc.drill.feed_rate)},
          {"spindle_speed_rpm", canon(sc.drill.spindle_speed)},
          {"drill_diameter_mm", canon(sc.drill.drill_diameter)},
          {"manipulator_length_mm", canon(sc.drill.manipulator_length)},
          {"manipulator_od_mm", canon(sc.drill.manipulator_od)},
          {"manipulator_id_mm", canon(sc.drill.manipulator_id)}}},
        {"calibration", calibration},
        {"fixtures",
         {{"conformity_beta", canon(sc.conformity_beta)},
          {"torque_budget_nmm", canon(sc.torque_budget)},
          {"baseline_capacity_n", canon(sc.baseline_capacity)}}}};
}

namespace {

std::string verdict_str(rod::Verdict v) { return v == rod::Verdict::Pass ? "PASS" : "FAIL"; }

json sf_json(double sf) {
    if (std::isinf(sf)) return json{{"unbounded", true}};
    return json{{"unbounded", false}, {"value", canon(sf)}};
}

json array_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(canon(x));
    return a;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", canon(v));
    return buf;
}

struct AnalysisOutcome {
    json result;
    bool pass = true;
    std::vector<CsvFile> csv;
};

AnalysisOutcome run_analysis(const Scenario& sc, const AnalysisRequest& req, int index) {
    AnalysisOutcome out;
    auto screw = model::validate_screw_spec(sc.screw);
    auto calibration = plan::calibrate(sc.calibration);
    std::string csv_stem = sc.name + "." + std::to_string(index) + "_" + req.type;

    if (req.type == "section") {
        auto p = model::section_properties(screw, req.station);
        out.result = json{{"type", "section"},
                          {"station_mm", canon(p.station)},
                          {"area_mm2", canon(p.area)},
                          {"second_moment_plane_a_mm4", canon(p.second_moment_plane_a)},
                          {"second_moment_plane_b_mm4", canon(p.second_moment_plane_b)},
                          {"torsion_constant_mm4", canon(p.torsion_constant)},
                          {"extreme_fiber_distance_a_mm", canon(p.extreme_fiber_distance_a)},
                          {"extreme_fiber_distance_b_mm", canon(p.extreme_fiber_distance_b)},
                          {"notched", p.notched}};
    } else if (req.type == "shape-check") {
        model::ScrewSpec spec = sc.screw;
        if (req.solid_control) spec.notches.reset();
        auto checked = model::validate_screw_spec(spec);
        rod::Centerline c(req.delta, req.length);
        rod::ArcInterval engaged{0.0, std::min(checked.threaded_length(), c.total_arc_length())};
        auto field = rod::prescribed_shape_stress(checked, c, engaged);
        out.pass = field.verdict == rod::Verdict::Pass;
        out.result = json{{"type", "shape-check"},
                          {"delta_mm", canon(req.delta)},
                          {"length_mm", canon(req.length)},
                          {"solid_control", req.solid_control},
                          {"verdict", verdict_str(field.verdict)},
                          {"max_utilization", canon(field.max_utilization)},
                          {"max_utilization_station_mm", canon(field.max_utilization_station)},
                          {"safety_factor", sf_json(safety_factor(field, spec.material))},
                          {"stations",
                           {{"s_mm", array_json(field.station)},
                            {"kappa_per_mm", array_json(field.curvature)},
                            {"strain", array_json(field.strain)},
                            {"stress_mpa", array_json(field.stress)}}}};
        std::ostringstream csv;
        csv << "s_mm,kappa_per_mm,strain,stress_MPa\n";
        for (std::size_t i = 0; i < field.station.size(); ++i)
            csv << csv_number(field.station[i]) << ',' << csv_number(field.curvature[i]) << ','
                << csv_number(field.strain[i]) << ',' << csv_number(field.stress[i]) << '\n';
        out.csv.push_back({csv_stem + ".csv", csv.str()});
    } else if (req.type == "torque-check") {
        rod::Centerline c(req.delta, req.length);
        model::MaterialSpec contact = sc.bone.material;
        if (req.friction_coefficient >= 0.0) contact.friction_coefficient = req.friction_coefficient;
        rod::CuttingResistance cutting{req.cutting_density, {req.cutting_begin, req.cutting_end}};
        auto field = rod::torque_transmission(screw, c, req.head_torque, contact, cutting,
                                              std::nullopt, sc.conformity_beta);
        out.pass = field.verdict == rod::Verdict::Pass;
        out.result =
            json{{"type", "torque-check"},
                 {"delta_mm", canon(req.delta)},
                 {"length_mm", canon(req.length)},
                 {"head_torque_nmm", canon(req.head_torque)},
                 {"head_torque_required_nmm", canon(field.head_torque_required)},
                 {"torque_exhausted", field.torque_exhausted},
                 {"verdict", verdict_str(field.verdict)},
                 {"min_torsional_safety_factor", sf_json(field.min_torsional_safety_factor)},
                 {"stations",
                  {{"s_mm", array_json(field.station)},
                   {"torque_nmm", array_json(field.torque)},
                   {"shear_stress_mpa", array_json(field.shear_stress)}}}};
        std::ostringstream csv;
        csv << "s_mm,kappa_per_mm,stress_MPa,torque_Nmm\n";
        for (std::size_t i = 0; i < field.station.size(); ++i)
            csv << csv_number(field.station[i]) << ',' << csv_number(c.curvature_at_s(field.station[i]))
                << ',' << csv_number(field.shear_stress[i]) << ',' << csv_number(field.torque[i])
                << '\n';
        out.csv.push_back({csv_stem + ".csv", csv.str()});
    } else if (req.type == "plan") {
        double deflection = calibration.deflection(req.tension);
        auto tunnel = plan::generate_tunnel(req.tension, calibration, sc.drill);
        auto shape = plan::snake_shape(req.tension, calibration, sc.drill);
        auto interf = plan::interference(screw, tunnel);
        out.pass = interf.feasible;
        out.result = json{
            {"type", "plan"},
            {"tension_n", canon(req.tension)},
            {"tip_deflection_mm", canon(deflection)},
            {"tunnel",
             {{"delta_mm", canon(tunnel.centerline.tip_offset())},
              {"length_mm", canon(tunnel.centerline.drillable_length())},
              {"arc_length_mm", canon(tunnel.centerline.total_arc_length())},
              {"diameter_mm", canon(tunnel.diameter)}}},
            {"snake",
             {{"curvature_per_mm", canon(shape.curvature)},
              {"arc_length_mm", canon(shape.arc_length)},
              {"tip_angle_rad", canon(shape.tip_angle)}}},
            {"drill_time_s", canon(plan::drill_time(tunnel, sc.drill))},
            {"interference",
             {{"core_clearance_mm", canon(interf.core_clearance)},
              {"thread_bite_mm", canon(interf.thread_bite)},
              {"feasible", interf.feasible}}},
            {"verdict", interf.feasible ? "PASS" : "FAIL"}};
    } else if (req.type == "insert") {
        auto tunnel = plan::generate_tunnel(req.tension, calibration, sc.drill);
        insertion::InsertionLimits limits{sc.torque_budget};
        auto report = insertion::simulate_insertion(screw, tunnel, sc.bone, limits,
                                                    sc.conformity_beta);
        out.pass = report.verdict == rod::Verdict::Pass;
        json steps = json::array();
        for (const auto& st : report.steps) {
            steps.push_back(json{{"depth_mm", canon(st.depth)},
                                 {"engaged_threads", st.engaged_threads},
                                 {"max_bending_utilization", canon(st.max_bending_utilization)},
                                 {"head_torque_required_nmm", canon(st.head_torque_required)},
                                 {"torsional_safety_factor", sf_json(st.torsional_safety_factor)},
                                 {"pass", st.pass},
                                 {"limiting_factor", st.limiting_factor}});
        }
        out.result = json{{"type", "insert"},
                          {"tension_n", canon(req.tension)},
                          {"torque_budget_nmm", canon(sc.torque_budget)},
                          {"steps", steps},
                          {"limiting_step", report.limiting_step},
                          {"verdict", verdict_str(report.verdict)}};
    } else if (req.type == "fixate") {
        auto tunnel = plan::generate_tunnel(req.tension, calibration, sc.drill);
        fixate::FractureScenario fs{tunnel,          std::nullopt,   sc.bone,
                                    req.cut_width,   req.load_offset, sc.baseline_capacity};
        auto unfixed = fixate::fixation_capacity(fs);
        json result{{"type", "fixate"},
                    {"tension_n", canon(req.tension)},
                    {"load_offset_mm", canon(req.load_offset)},
                    {"cut_width_mm", canon(req.cut_width)},
                    {"unfixed",
                     {{"capacity_n", canon(unfixed.capacity)},
                      {"governing_mode", to_string(unfixed.governing_mode)}}},
                    // Informational comparison only; the experimental loads are
                    // not a model target.
                    {"reference_experiment",
                     {{"fixed_capacity_n", 155.0}, {"unfixed_capacity_n", 10.0}}}};
        if (req.with_screw) {
            fs.screw = screw;
            auto fixed = fixate::fixation_capacity(fs);
            result["fixed"] = json{{"capacity_n", canon(fixed.capacity)},
                                   {"governing_mode", to_string(fixed.governing_mode)},
                                   {"pullout_limited_n", canon(fixed.pullout_limited)},
                                   {"bearing_limited_n", canon(fixed.bearing_limited)},
                                   {"bending_limited_n", canon(fixed.bending_limited)},
                                   {"lever_arm_mm", canon(fixed.lever_arm)},
                                   {"far_side_engaged_mm", canon(fixed.far_side_engaged)}};
            result["fixed_over_unfixed"] = canon(fixed.capacity / unfixed.capacity);
            out.pass = fixed.capacity >= unfixed.capacity;
        }
        result["verdict"] = out.pass ? "PASS" : "FAIL";
        out.result = std::move(result);
    }
    return out;
}

json scenario_stamp(const Scenario& sc) {
    json resolved = resolved_inputs(sc);
    return json{{"tool_version", kVersion},
                {"scenario_digest", fnv1a(canonical_dump(resolved))},
                {"resolved", resolved}};
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
    RunResult rr;
    json analyses = json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < sc.analyses.size(); ++i) {
        auto out = run_analysis(sc, sc.analyses[i], static_cast<int>(i));
        all_pass = all_pass && out.pass;
        analyses.push_back(std::move(out.result));
        for (auto& f : out.csv) rr.csv_files.push_back(std::move(f));
    }
    json stamp = scenario_stamp(sc);
    rr.exit_code = all_pass ? 0 : 1;
    rr.report = json{{"schema_version", sc.schema_version},
                     {"tool_version", stamp["tool_version"]},
                     {"scenario", sc.name},
                     {"scenario_digest", stamp["scenario_digest"]},
                     {"resolved", stamp["resolved"]},
                     {"analyses", analyses},
                     {"overall_verdict", all_pass ? "PASS" : "FAIL"},
                     {"exit_code", rr.exit_code}};
    return rr;
}

namespace {

Scenario apply_axis(Scenario sc, const std::string& name, double value) {
    if (name == "tension") {
        for (auto& a : sc.analyses) a.tension = value;
    } else if (name == "notch_depth") {
        sc.screw.notches->depth = value;
    } else if (name == "notch_width") {
        sc.screw.notches->width = value;
    } else if (name == "notch_pitch") {
        sc.screw.notches->pitch = value;
    } else if (name == "head_torque") {
        for (auto& a : sc.analyses) a.head_torque = value;
    } else if (name == "load_offset") {
        for (auto& a : sc.analyses) a.load_offset = value;
    } else if (name == "torque_budget") {
        sc.torque_budget = value;
    } else if (name == "delta") {
        for (auto& a : sc.analyses) a.delta = value;
    } else if (name == "bone_shear_strength") {
        sc.bone.material.shear_strength = value;
    }
    return sc;
}

double margin_of(const json& result) {
    const std::string type = result.at("type").get<std::string>();
    if (type == "shape-check") return result.at("max_utilization").get<double>();
    if (type == "torque-check") {
        const json& sf = result.at("min_torsional_safety_factor");
        return sf.at("unbounded").get<bool>() ? std::numeric_limits<double>::infinity()
                                              : sf.at("value").get<double>();
    }
    if (type == "insert") {
        double worst = 0.0;
        for (const auto& st : result.at("steps"))
            worst = std::max(worst, st.at("head_torque_required_nmm").get<double>());
        return worst;
    }
    if (type == "fixate") {
        if (result.contains("fixed")) return result.at("fixed").at("capacity_n").get<double>();
        return result.at("unfixed").at("capacity_n").get<double>();
    }
    if (type == "plan") return result.at("tip_deflection_mm").get<double>();
    return 0.0;
}

}  // namespace

RunResult run_sweep(const Scenario& sc, int jobs) {
    if (sc.sweep_axes.empty()) throw ScenarioError("sweep", "no sweep axes declared");
    if (sc.analyses.empty()) throw ScenarioError("analyses", "sweep requires analyses to run");
    if (jobs < 1) jobs = 1;

    // Cartesian product in lexicographic order of the (ascending) axis values.
    std::size_t total = 1;
    for (const auto& ax : sc.sweep_axes) total *= ax.values.size();

    auto point_values = [&](std::size_t idx) {
        std::vector<double> vals(sc.sweep_axes.size());
        for (std::size_t a = sc.sweep_axes.size(); a-- > 0;) {
            const auto& values = sc.sweep_axes[a].values;
            vals[a] = values[idx % values.size()];
            idx /= values.size();
        }
        return vals;
    };

    std::vector<json> rows(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            try {
                std::vector<double> vals = point_values(i);
                Scenario point = sc;
                point.sweep_axes.clear();
                for (std::size_t a = 0; a < sc.sweep_axes.size(); ++a)
                    point = apply_axis(std::move(point), sc.sweep_axes[a].name, vals[a]);
                json results = json::array();
                bool pass = true;
                for (std::size_t k = 0; k < point.analyses.size(); ++k) {
                    auto out = run_analysis(point, point.analyses[k], static_cast<int>(k));
                    pass = pass && out.pass;
                    results.push_back(json{{"type", out.result.at("type")},
                                           {"verdict", out.result.value("verdict", "PASS")},
                                           {"margin", canon(margin_of(out.result))}});
                }
                json vals_json = json::array();
                for (double v : vals) vals_json.push_back(canon(v));
                rows[i] = json{{"values", vals_json},
                               {"results", results},
                               {"verdict", pass ? "PASS" : "FAIL"}};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
                failed = true;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed) throw ScenarioError("sweep", first_error);

    bool all_pass = true;
    json rows_json = json::array();
    for (auto& row : rows) {
        all_pass = all_pass && row.at("verdict") == "PASS";
        rows_json.push_back(std::move(row));
    }

    json axes = json::array();
    for (const auto& ax : sc.sweep_axes) {
        json vals = json::array();
        for (double v : ax.values) vals.push_back(canon(v));
        axes.push_back(json{{"name", ax.name}, {"values", vals}});
    }

    RunResult rr;
    json stamp = scenario_stamp(sc);
    rr.exit_code = all_pass ? 0 : 1;
    rr.report = json{{"schema_version", sc.schema_version},
                     {"tool_version", stamp["tool_version"]},
                     {"scenario", sc.name},
                     {"scenario_digest", stamp["scenario_digest"]},
                     {"resolved", stamp["resolved"]},
                     {"sweep", {{"axes", axes}, {"rows", rows_json}}},
                     {"overall_verdict", all_pass ? "PASS" : "FAIL"},
                     {"exit_code", rr.exit_code}};
    return rr;
}

}  // namespace bmscrew::io
