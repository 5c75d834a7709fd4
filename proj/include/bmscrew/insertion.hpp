#pragma once

#include <array>
#include <string>
#include <vector>

#include "bmscrew/plan.hpp"
#include "bmscrew/rod.hpp"

namespace bmscrew::insertion {

/// Surrogate cancellous bone sample.
struct BoneSpec {
    model::MaterialSpec material;
    std::array<double, 3> block_dimensions{65.0, 40.0, 9.0};  // mm
    std::string descriptor = "15 PCF polyurethane foam";

    void validate() const;
};

struct InsertionLimits {
    double torque_budget = 150.0;  // N*mm, reference cancellous insertion torque
};

struct InsertionStep {
    double depth = 0.0;  // mm of thread engagement, strictly increasing
    int engaged_threads = 0;
    double max_bending_utilization = 0.0;
    double head_torque_required = 0.0;  // N*mm
    double torsional_safety_factor = 0.0;
    bool pass = true;
    std::string limiting_factor;  // empty when the step passes
};

struct InsertionReport {
    std::vector<InsertionStep> steps;
    rod::Verdict verdict = rod::Verdict::Pass;
    int limiting_step = -1;  // index of the first failing step
};

/// Self-tapping torque for the given engaged thread length:
/// T = S_bone * A_cut * r_mean with A_cut = bite_depth * engaged tapping
/// length (only the leading tapping_thread_count threads cut) and
/// r_mean = (outer_diameter + tunnel_diameter) / 4. A non-positive
/// tunnel_diameter means "tunnel at core size" (full thread bite).
double tapping_torque(const model::ValidatedScrewSpec& spec, const BoneSpec& bone,
                      double engaged_length, double tunnel_diameter = 0.0);

/// Quasi-static screw advance through a drilled tunnel, one thread pitch
/// (one revolution) per step, from first engagement to full seating. Each
/// step records the bending and torque margins; the report verdict fails at
/// the first step exceeding bending utilization 1, torsional SF 1, or the
/// torque budget.
InsertionReport simulate_insertion(const model::ValidatedScrewSpec& spec,
                                   const plan::TunnelSpec& tunnel, const BoneSpec& bone,
                                   const InsertionLimits& limits = {},
                                   double conformity = rod::kDefaultConformity);

}  // namespace bmscrew::insertion
