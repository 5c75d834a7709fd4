#include "bmscrew/insertion.hpp"

#include <algorithm>
#include <cmath>

namespace bmscrew::insertion {

void BoneSpec::validate() const {
    material.validate();
    for (double d : block_dimensions)
        if (!(d > 0.0)) throw InvalidGeometry("block_dimensions", "must be positive");
}

double tapping_torque(const model::ValidatedScrewSpec& spec, const BoneSpec& bone,
                      double engaged_length, double tunnel_diameter) {
    if (engaged_length < 0.0 || engaged_length > spec.threaded_length() + 1e-9)
        throw OutOfRange("engaged_length outside [0, threaded length]");
    const model::ScrewSpec& sp = spec.spec();
    double tunnel = tunnel_diameter > 0.0 ? tunnel_diameter : sp.core_diameter;
    double bite = std::max(0.0, (sp.outer_diameter - tunnel) / 2.0);
    double cut_length = std::min(engaged_length, spec.tapping_length());
    double r_mean = (sp.outer_diameter + tunnel) / 4.0;
    return bone.material.shear_strength * bite * cut_length * r_mean;
}

InsertionReport simulate_insertion(const model::ValidatedScrewSpec& spec,
                                   const plan::TunnelSpec& tunnel, const BoneSpec& bone,
                                   const InsertionLimits& limits, double conformity) {
    bone.validate();
    auto interf = plan::interference(spec, tunnel);
    if (!interf.feasible)
        throw InfeasibleInterference(interf.can_enter ? "threads never engage the tunnel wall"
                                                      : "screw core larger than the tunnel");

    const model::ScrewSpec& sp = spec.spec();
    const double pitch = sp.thread_pitch;
    const double seat = std::min(spec.threaded_length(), tunnel.centerline.total_arc_length());
    const double tap_len = spec.tapping_length();
    const double cut_density =
        bone.material.shear_strength * interf.thread_bite *
        (sp.outer_diameter + tunnel.diameter) / 4.0;  // N*mm per mm of cutting advance

    std::vector<double> depths;
    for (double d = pitch; d < seat - 1e-9; d += pitch) depths.push_back(d);
    depths.push_back(seat);

    InsertionReport report;
    for (double depth : depths) {
        InsertionStep step;
        step.depth = depth;
        step.engaged_threads =
            std::min(static_cast<int>(std::floor(depth / pitch + 1e-9)), sp.thread_count);

        rod::ArcInterval engaged{0.0, depth};
        auto stress = rod::prescribed_shape_stress(spec, tunnel.centerline, engaged);
        step.max_bending_utilization = stress.max_utilization;

        rod::CuttingResistance cutting;
        cutting.density = cut_density;
        cutting.interval = {std::max(0.0, depth - std::min(depth, tap_len)), depth};
        // Single-pass groove memory: stations behind the tapping zone are
        // already cut, so only the leading tapping threads resist cutting.
        // Quasi-static screwing: the driving torque equals the resistance,
        // so the stress profile is evaluated at the required head torque.
        auto probe = rod::torque_transmission(spec, tunnel.centerline, 0.0, bone.material,
                                              cutting, engaged, conformity);
        auto torque =
            rod::torque_transmission(spec, tunnel.centerline, probe.head_torque_required,
                                     bone.material, cutting, engaged, conformity);
        step.head_torque_required = torque.head_torque_required;
        step.torsional_safety_factor = torque.min_torsional_safety_factor;

        if (step.max_bending_utilization > 1.0) {
            step.pass = false;
            step.limiting_factor = "bending";
        } else if (step.torsional_safety_factor < 1.0) {
            step.pass = false;
            step.limiting_factor = "torsion";
        } else if (step.head_torque_required > limits.torque_budget) {
            step.pass = false;
            step.limiting_factor = "torque budget";
        }
        if (!step.pass && report.limiting_step < 0)
            report.limiting_step = static_cast<int>(report.steps.size());
        report.steps.push_back(std::move(step));
    }
    report.verdict = report.limiting_step < 0 ? rod::Verdict::Pass : rod::Verdict::Fail;
    return report;
}

}  // namespace bmscrew::insertion
