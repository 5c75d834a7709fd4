#pragma once

#include <optional>
#include <string>

#include "bmscrew/insertion.hpp"
#include "bmscrew/plan.hpp"

namespace bmscrew::fixate {

/// Thread pullout capacity from the thread-shear model:
/// F = S_bone * L_engaged * pi * outer_diameter * TSF,
/// TSF = 0.5 + 0.57735 * thread_depth / pitch.
double pullout_strength(const model::ValidatedScrewSpec& spec, const insertion::BoneSpec& bone,
                        double engaged_length);

double thread_shear_factor(const model::ValidatedScrewSpec& spec);

/// Simulated transversal fracture crossing the tunnel center, loaded by an
/// eccentric force offset from the screw entry point.
struct FractureScenario {
    plan::TunnelSpec tunnel;
    std::optional<model::ValidatedScrewSpec> screw;  // absent = unfixed
    insertion::BoneSpec bone;
    double cut_width = 2.0;     // mm, V-shape transversal cut at the tunnel arc midpoint
    double load_offset = 15.0;  // mm from the screw entry point
    double baseline_capacity = 10.0;  // N, calibrated unfixed capacity (not a prediction)
};

enum class GoverningMode { Pullout, BoneBearing, ScrewBending, Baseline };

std::string to_string(GoverningMode m);

struct FixationReport {
    double capacity = 0.0;  // N
    GoverningMode governing_mode = GoverningMode::Baseline;
    double pullout_limited = 0.0;      // N (0 when unfixed)
    double bearing_limited = 0.0;      // N
    double bending_limited = 0.0;      // N
    double baseline = 0.0;             // N
    double lever_arm = 0.0;            // mm, fracture plane to far-side thread centroid
    double far_side_engaged = 0.0;     // mm
    double fixed_over_unfixed = 1.0;   // capacity / baseline
};

/// Eccentric-load capacity of the fixated (or unfixed) fracture:
/// capacity = baseline + min(pullout, bearing, bending) of the screw modes,
/// each scaled by lever_arm / load_offset where applicable. Ties between
/// modes break in the fixed order pullout < bearing < bending.
FixationReport fixation_capacity(const FractureScenario& sc);

}  // namespace bmscrew::fixate
