#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmscrew/fixate.hpp"
#include "bmscrew/io.hpp"
#include "bmscrew/version.hpp"

namespace py = pybind11;
using namespace bmscrew;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bendable medical screw planning and verification core";
    m.attr("__version__") = kVersion;
    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    py::register_exception<InvalidGeometry>(m, "InvalidGeometry");
    py::register_exception<InvalidMaterial>(m, "InvalidMaterial");
    py::register_exception<OutOfRange>(m, "OutOfRangeError");
    py::register_exception<NoSolution>(m, "NoSolution");
    py::register_exception<NonMonotoneData>(m, "NonMonotoneData");
    py::register_exception<NegativeTension>(m, "NegativeTension");
    py::register_exception<InfeasibleInterference>(m, "InfeasibleInterference");
    py::register_exception<NoEngagementAcrossFracture>(m, "NoEngagementAcrossFracture");
    py::register_exception<io::ScenarioError>(m, "ScenarioError");

    py::class_<model::MaterialSpec>(m, "MaterialSpec")
        .def(py::init<>())
        .def_readwrite("youngs_modulus", &model::MaterialSpec::youngs_modulus)
        .def_readwrite("poisson_ratio", &model::MaterialSpec::poisson_ratio)
        .def_readwrite("yield_strength", &model::MaterialSpec::yield_strength)
        .def_readwrite("ultimate_strength", &model::MaterialSpec::ultimate_strength)
        .def_readwrite("recoverable_strain", &model::MaterialSpec::recoverable_strain)
        .def_readwrite("shear_strength", &model::MaterialSpec::shear_strength)
        .def_readwrite("friction_coefficient", &model::MaterialSpec::friction_coefficient)
        .def("yield_strain", &model::MaterialSpec::yield_strain)
        .def("validate", &model::MaterialSpec::validate);

    py::enum_<model::NotchPlane>(m, "NotchPlane")
        .value("A", model::NotchPlane::A)
        .value("B", model::NotchPlane::B);

    py::class_<model::NotchPattern>(m, "NotchPattern")
        .def(py::init<>())
        .def_readwrite("depth", &model::NotchPattern::depth)
        .def_readwrite("width", &model::NotchPattern::width)
        .def_readwrite("pitch", &model::NotchPattern::pitch)
        .def_readwrite("start_plane", &model::NotchPattern::start_plane);

    py::class_<model::ScrewSpec>(m, "ScrewSpec")
        .def(py::init<>())
        .def_readwrite("core_diameter", &model::ScrewSpec::core_diameter)
        .def_readwrite("outer_diameter", &model::ScrewSpec::outer_diameter)
        .def_readwrite("cannula_diameter", &model::ScrewSpec::cannula_diameter)
        .def_readwrite("overall_length", &model::ScrewSpec::overall_length)
        .def_readwrite("thread_count", &model::ScrewSpec::thread_count)
        .def_readwrite("thread_pitch", &model::ScrewSpec::thread_pitch)
        .def_readwrite("tapping_thread_count", &model::ScrewSpec::tapping_thread_count)
        .def_readwrite("head_tip_radius", &model::ScrewSpec::head_tip_radius)
        .def_readwrite("notches", &model::ScrewSpec::notches)
        .def_readwrite("material", &model::ScrewSpec::material);

    py::class_<model::SectionProps>(m, "SectionProps")
        .def_readonly("area", &model::SectionProps::area)
        .def_readonly("second_moment_plane_a", &model::SectionProps::second_moment_plane_a)
        .def_readonly("second_moment_plane_b", &model::SectionProps::second_moment_plane_b)
        .def_readonly("torsion_constant", &model::SectionProps::torsion_constant)
        .def_readonly("extreme_fiber_distance_a",
                      &model::SectionProps::extreme_fiber_distance_a)
        .def_readonly("extreme_fiber_distance_b",
                      &model::SectionProps::extreme_fiber_distance_b)
        .def_readonly("station", &model::SectionProps::station)
        .def_readonly("notched", &model::SectionProps::notched);

    py::class_<model::ValidatedScrewSpec>(m, "ValidatedScrewSpec")
        .def_static("validate", &model::ValidatedScrewSpec::validate)
        .def_property_readonly("spec", &model::ValidatedScrewSpec::spec)
        .def("threaded_length", &model::ValidatedScrewSpec::threaded_length)
        .def("thread_depth", &model::ValidatedScrewSpec::thread_depth)
        .def("tapping_length", &model::ValidatedScrewSpec::tapping_length)
        .def("hinge_fiber_offset", &model::ValidatedScrewSpec::hinge_fiber_offset);

    py::class_<model::InterferenceReport>(m, "InterferenceReport")
        .def_readonly("core_clearance", &model::InterferenceReport::core_clearance)
        .def_readonly("thread_bite", &model::InterferenceReport::thread_bite)
        .def_readonly("feasible", &model::InterferenceReport::feasible);

    m.def("reference_screw", &model::reference_screw);
    m.def("nitinol", &model::nitinol);
    m.def("foam_15pcf", &model::foam_15pcf);
    m.def("validate_screw_spec", &model::validate_screw_spec);
    m.def("section_properties", &model::section_properties, py::arg("spec"), py::arg("s"));
    m.def("annulus_section", &model::annulus_section, py::arg("core_diameter"),
          py::arg("cannula_diameter"), py::arg("s") = 0.0);
    m.def("superelastic_stress", &model::superelastic_stress);
    m.def(
        "interference",
        [](const model::ValidatedScrewSpec& s, double tunnel_diameter) {
            return model::interference(s, tunnel_diameter);
        },
        py::arg("spec"), py::arg("tunnel_diameter"));

    py::class_<rod::Centerline>(m, "Centerline")
        .def(py::init<double, double, double>(), py::arg("tip_offset"),
             py::arg("drillable_length"), py::arg("stations_per_mm") = 10.0)
        .def("total_arc_length", &rod::Centerline::total_arc_length)
        .def("curvature_at_s", &rod::Centerline::curvature_at_s)
        .def("y_at_x", &rod::Centerline::y_at_x)
        .def("arc_length_at_x", &rod::Centerline::arc_length_at_x)
        .def("x_at_s", &rod::Centerline::x_at_s)
        .def_property_readonly("tip_offset", &rod::Centerline::tip_offset)
        .def_property_readonly("drillable_length", &rod::Centerline::drillable_length);

    py::enum_<rod::Verdict>(m, "Verdict")
        .value("PASS", rod::Verdict::Pass)
        .value("FAIL", rod::Verdict::Fail);

    py::class_<rod::ArcInterval>(m, "ArcInterval")
        .def(py::init<double, double>(), py::arg("begin"), py::arg("end"))
        .def_readwrite("begin", &rod::ArcInterval::begin)
        .def_readwrite("end", &rod::ArcInterval::end);

    py::class_<rod::StressField>(m, "StressField")
        .def_readonly("station", &rod::StressField::station)
        .def_readonly("curvature", &rod::StressField::curvature)
        .def_readonly("strain", &rod::StressField::strain)
        .def_readonly("stress", &rod::StressField::stress)
        .def_readonly("utilization", &rod::StressField::utilization)
        .def_readonly("verdict", &rod::StressField::verdict)
        .def_readonly("max_utilization", &rod::StressField::max_utilization)
        .def_readonly("max_utilization_station", &rod::StressField::max_utilization_station);

    py::class_<rod::TorqueField>(m, "TorqueField")
        .def_readonly("station", &rod::TorqueField::station)
        .def_readonly("torque", &rod::TorqueField::torque)
        .def_readonly("shear_stress", &rod::TorqueField::shear_stress)
        .def_readonly("head_torque_required", &rod::TorqueField::head_torque_required)
        .def_readonly("min_torsional_safety_factor",
                      &rod::TorqueField::min_torsional_safety_factor)
        .def_readonly("torque_exhausted", &rod::TorqueField::torque_exhausted)
        .def_readonly("verdict", &rod::TorqueField::verdict);

    py::class_<rod::CuttingResistance>(m, "CuttingResistance")
        .def(py::init<>())
        .def(py::init([](double density, double begin, double end) {
                 return rod::CuttingResistance{density, {begin, end}};
             }),
             py::arg("density"), py::arg("begin"), py::arg("end"))
        .def_readwrite("density", &rod::CuttingResistance::density);

    m.def(
        "solve_cantilever",
        [](double length, const model::SectionProps& s, double e, double p, int n) {
            auto r = rod::solve_cantilever(length, s, e, p, n);
            return py::make_tuple(r.tip_deflection, r.slender);
        },
        py::arg("length"), py::arg("section"), py::arg("youngs_modulus"), py::arg("tip_load"),
        py::arg("elements") = 64);
    m.def("prescribed_shape_stress", &rod::prescribed_shape_stress, py::arg("spec"),
          py::arg("centerline"), py::arg("engaged"));
    m.def("torque_transmission", &rod::torque_transmission, py::arg("spec"),
          py::arg("centerline"), py::arg("head_torque"), py::arg("bone"), py::arg("cutting"),
          py::arg("engaged") = std::nullopt, py::arg("conformity") = rod::kDefaultConformity);
    m.def("bending_safety_factor",
          py::overload_cast<const rod::StressField&, const model::MaterialSpec&>(
              &rod::safety_factor));
    m.def("torsional_safety_factor",
          py::overload_cast<const rod::TorqueField&, const model::MaterialSpec&>(
              &rod::safety_factor));

    py::class_<plan::DrillParams>(m, "DrillParams")
        .def(py::init<>())
        .def_readwrite("feed_rate", &plan::DrillParams::feed_rate)
        .def_readwrite("spindle_speed", &plan::DrillParams::spindle_speed)
        .def_readwrite("drill_diameter", &plan::DrillParams::drill_diameter)
        .def_readwrite("manipulator_length", &plan::DrillParams::manipulator_length);

    py::class_<plan::CalibrationModel>(m, "CalibrationModel")
        .def(py::init<std::vector<std::pair<double, double>>>())
        .def("deflection", &plan::CalibrationModel::deflection)
        .def_property_readonly("anchors", &plan::CalibrationModel::anchors);

    py::class_<plan::TunnelSpec>(m, "TunnelSpec")
        .def(py::init([](const rod::Centerline& c, double diameter) {
                 return plan::TunnelSpec{c, diameter, 0.0};
             }),
             py::arg("centerline"), py::arg("diameter"))
        .def_readonly("centerline", &plan::TunnelSpec::centerline)
        .def_readonly("diameter", &plan::TunnelSpec::diameter)
        .def_readonly("source_tension", &plan::TunnelSpec::source_tension);

    py::class_<plan::SnakeShape>(m, "SnakeShape")
        .def_readonly("curvature", &plan::SnakeShape::curvature)
        .def_readonly("arc_length", &plan::SnakeShape::arc_length)
        .def_readonly("tip_angle", &plan::SnakeShape::tip_angle);

    m.def("calibrate", &plan::calibrate);
    m.def("snake_shape", &plan::snake_shape);
    m.def("snake_reachability_bound", &plan::snake_reachability_bound);
    m.def("generate_tunnel", &plan::generate_tunnel);
    m.def("drill_time", &plan::drill_time);

    py::class_<insertion::BoneSpec>(m, "BoneSpec")
        .def(py::init<>())
        .def_readwrite("material", &insertion::BoneSpec::material)
        .def_readwrite("descriptor", &insertion::BoneSpec::descriptor);

    py::class_<insertion::InsertionStep>(m, "InsertionStep")
        .def_readonly("depth", &insertion::InsertionStep::depth)
        .def_readonly("engaged_threads", &insertion::InsertionStep::engaged_threads)
        .def_readonly("max_bending_utilization",
                      &insertion::InsertionStep::max_bending_utilization)
        .def_readonly("head_torque_required", &insertion::InsertionStep::head_torque_required)
        .def_readonly("pass_", &insertion::InsertionStep::pass)
        .def_readonly("limiting_factor", &insertion::InsertionStep::limiting_factor);

    py::class_<insertion::InsertionReport>(m, "InsertionReport")
        .def_readonly("steps", &insertion::InsertionReport::steps)
        .def_readonly("verdict", &insertion::InsertionReport::verdict)
        .def_readonly("limiting_step", &insertion::InsertionReport::limiting_step);

    m.def("tapping_torque", &insertion::tapping_torque, py::arg("spec"), py::arg("bone"),
          py::arg("engaged_length"), py::arg("tunnel_diameter") = 0.0);
    m.def(
        "simulate_insertion",
        [](const model::ValidatedScrewSpec& spec, const plan::TunnelSpec& tunnel,
           const insertion::BoneSpec& bone, double torque_budget, double conformity) {
            return insertion::simulate_insertion(spec, tunnel, bone, {torque_budget},
                                                 conformity);
        },
        py::arg("spec"), py::arg("tunnel"), py::arg("bone"), py::arg("torque_budget") = 150.0,
        py::arg("conformity") = rod::kDefaultConformity);

    py::class_<fixate::FixationReport>(m, "FixationReport")
        .def_readonly("capacity", &fixate::FixationReport::capacity)
        .def_readonly("pullout_limited", &fixate::FixationReport::pullout_limited)
        .def_readonly("bearing_limited", &fixate::FixationReport::bearing_limited)
        .def_readonly("bending_limited", &fixate::FixationReport::bending_limited)
        .def_readonly("baseline", &fixate::FixationReport::baseline)
        .def_readonly("lever_arm", &fixate::FixationReport::lever_arm)
        .def_readonly("fixed_over_unfixed", &fixate::FixationReport::fixed_over_unfixed)
        .def_property_readonly("governing_mode", [](const fixate::FixationReport& r) {
            return fixate::to_string(r.governing_mode);
        });

    m.def("pullout_strength", &fixate::pullout_strength);
    m.def("thread_shear_factor", &fixate::thread_shear_factor);
    m.def(
        "fixation_capacity",
        [](const plan::TunnelSpec& tunnel, std::optional<model::ValidatedScrewSpec> screw,
           const insertion::BoneSpec& bone, double cut_width, double load_offset,
           double baseline_capacity) {
            fixate::FractureScenario sc{tunnel,    std::move(screw), bone,
                                        cut_width, load_offset,      baseline_capacity};
            return fixate::fixation_capacity(sc);
        },
        py::arg("tunnel"), py::arg("screw"), py::arg("bone"), py::arg("cut_width") = 2.0,
        py::arg("load_offset") = 15.0, py::arg("baseline_capacity") = 10.0);

    m.def(
        "run_scenario_json",
        [](const std::string& text, const std::string& name) {
            auto sc = io::parse_scenario(io::json::parse(text), name);
            auto rr = io::run_scenario(sc);
            return py::make_tuple(io::canonical_dump(rr.report), rr.exit_code);
        },
        py::arg("text"), py::arg("name") = "scenario",
        "Parse a scenario document, run its analyses, and return "
        "(canonical report text, exit code).");
    m.def(
        "sweep_scenario_json",
        [](const std::string& text, const std::string& name, int jobs) {
            auto sc = io::parse_scenario(io::json::parse(text), name);
            auto rr = io::run_sweep(sc, jobs);
            return py::make_tuple(io::canonical_dump(rr.report), rr.exit_code);
        },
        py::arg("text"), py::arg("name") = "scenario", py::arg("jobs") = 1);
}
