#pragma once

#include <optional>
#include <vector>

#include "bmscrew/centerline.hpp"
#include "bmscrew/model.hpp"

namespace bmscrew::rod {

enum class Verdict { Pass, Fail };

/// Closed interval of tunnel arc length occupied by the threaded section.
/// The tip-side thread start sits at `end`; hinge k lies at end - k*pitch.
struct ArcInterval {
    double begin = 0.0;
    double end = 0.0;
    double length() const { return end - begin; }
};

/// Per-station bending state along the engaged screw.
struct StressField {
    std::vector<double> station;      // s, mm
    std::vector<double> curvature;    // 1/mm
    std::vector<double> strain;       // extreme ligament fiber, -
    std::vector<double> stress;       // recovered stress, MPa
    std::vector<double> utilization;  // strain / recoverable_strain
    Verdict verdict = Verdict::Pass;
    double max_utilization = 0.0;
    double max_utilization_station = 0.0;  // smallest s wins ties
};

/// Per-station torsional state from the drive head (s = begin) to the tip.
struct TorqueField {
    std::vector<double> station;             // s, mm
    std::vector<double> torque;              // N*mm, non-increasing head to tip
    std::vector<double> shear_stress;        // MPa
    std::vector<double> resistance_density;  // N*mm per mm
    double head_torque_required = 0.0;       // N*mm to reach the tip with T = 0
    double min_torsional_safety_factor = 0.0;
    bool torque_exhausted = false;  // T hit zero before the tip (reported, not thrown)
    Verdict verdict = Verdict::Pass;
};

/// Cutting resistance applied over one arc interval, N*mm per mm.
struct CuttingResistance {
    double density = 0.0;
    ArcInterval interval;
};

/// Tunnel-wall contact line load for torque transmission:
/// q(s) = beta * E * I_eff(s) * kappa(s) / pitch^2. The conformity factor is
/// calibrated, not derived; see kDefaultConformity.
inline constexpr double kDefaultConformity = 1e-4;

struct CantileverResult {
    double tip_deflection = 0.0;  // mm
    bool slender = true;          // length >= 10 x extreme fiber distance
};

/// Discretized Euler-Bernoulli tip deflection of an end-loaded cantilever,
/// composite-trapezoid on the unit-load integral. Verification oracle:
/// converges to P L^3 / (3 E I).
CantileverResult solve_cantilever(double length, const model::SectionProps& section,
                                  double youngs_modulus, double tip_load, int elements = 64);

/// Kinematic bending of the screw forced onto the tunnel centerline.
/// Inter-notch segments stay straight; the rotation accumulated over one
/// notch pitch lumps into the notch ligament over its width:
///   strain = kappa * pitch * hinge_fiber_offset / width
/// in the notch's own plane. The planar tunnel bends in plane A, so B-plane
/// hinges carry zero strain. A solid (unnotched) shaft bends with the
/// centerline directly: strain = kappa * outer_radius.
StressField prescribed_shape_stress(const model::ValidatedScrewSpec& spec, const Centerline& c,
                                    const ArcInterval& engaged);

/// Torque balance along the engaged screw: dT/ds = -(friction + cutting),
/// friction = mu * q(s) * r_mean with r_mean = (outer + core)/4. Shear
/// stress tau = T*c/J at each station; PASS iff tau stays below the shear
/// yield everywhere and the applied head torque reaches the tip.
TorqueField torque_transmission(const model::ValidatedScrewSpec& spec, const Centerline& c,
                                double head_torque, const model::MaterialSpec& bone,
                                const CuttingResistance& cutting,
                                std::optional<ArcInterval> engaged = std::nullopt,
                                double conformity = kDefaultConformity);

/// Min over stations of limit/demand. Bending uses the inverse of the
/// recoverable-strain utilization, torsion the shear-yield ratio. A
/// zero-load field reports +infinity ("unbounded").
double safety_factor(const StressField& f, const model::MaterialSpec& m);
double safety_factor(const TorqueField& f, const model::MaterialSpec& m);

}  // namespace bmscrew::rod
