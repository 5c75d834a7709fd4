#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmscrew/errors.hpp"

// Unit convention, enforced end to end: lengths mm, forces N, stresses MPa,
// torques N*mm. A 0.15 N*m head torque therefore enters as 150 N*mm.

namespace bmscrew::model {

/// Elastic/superelastic constants of a screw or bone material.
struct MaterialSpec {
    double youngs_modulus = 0.0;     // MPa
    double poisson_ratio = 0.0;      // -
    double yield_strength = 0.0;     // MPa
    double ultimate_strength = 0.0;  // MPa
    double recoverable_strain = 0.0; // - (superelastic limit)
    double shear_strength = 0.0;     // MPa (bone surrogates)
    double friction_coefficient = 0.0;

    double yield_strain() const { return yield_strength / youngs_modulus; }
    double shear_yield() const;  // yield / sqrt(3)

    /// Throws InvalidMaterial on any violated invariant.
    void validate() const;
};

/// Bilinear superelastic law: linear to yield, plateau at yield stress up to
/// recoverable_strain. Returns the recovered stress; strains beyond the
/// recoverable limit are the caller's FAIL condition.
double superelastic_stress(const MaterialSpec& m, double strain);

enum class NotchPlane { A, B };

NotchPlane orthogonal(NotchPlane p);
std::string to_string(NotchPlane p);

/// Orthogonal surface notches cut into the inter-thread valleys.
/// depth is measured radially inward from the core surface; the maximum
/// depth reaches the cannula axis (core_radius).
struct NotchPattern {
    double depth = 0.0;  // mm
    double width = 0.0;  // mm, axial extent of one notch
    double pitch = 0.0;  // mm, axial spacing of consecutive notches
    NotchPlane start_plane = NotchPlane::A;  // plane of the tip-most notch;
                                             // orientation alternates A/B
};

struct ScrewSpec {
    double core_diameter = 0.0;    // mm
    double outer_diameter = 0.0;   // mm
    double cannula_diameter = 0.0; // mm
    double overall_length = 0.0;   // mm
    int thread_count = 0;
    double thread_pitch = 0.0;     // mm
    std::string thread_form = "V";
    int tapping_thread_count = 0;  // leading threads carrying cutting edges
    double head_tip_radius = 0.0;  // mm, round steering head
    std::optional<NotchPattern> notches;  // absent = solid (unnotched) shaft
    MaterialSpec material;
};

/// Default pattern used when a scenario omits notch dimensions. These are
/// modeling assumptions, not measured values: the notch root reaches the
/// cannula axis, width 1 mm, one notch per inter-thread valley.
NotchPattern default_notch_pattern(const ScrewSpec& spec);

/// Paper BMS geometry and nitinol constants, used as scenario defaults.
ScrewSpec reference_screw();
MaterialSpec nitinol();
MaterialSpec foam_15pcf();

struct Segment {
    enum class Kind { ThreadCrest, NotchValley };
    Kind kind;
    double begin = 0.0;  // mm from thread start (tip side)
    double end = 0.0;
    NotchPlane plane = NotchPlane::A;  // meaningful for valleys only
};

/// Cross-section state at one arc-length station.
struct SectionProps {
    double area = 0.0;                     // mm^2
    double second_moment_plane_a = 0.0;    // mm^4
    double second_moment_plane_b = 0.0;    // mm^4
    double torsion_constant = 0.0;         // mm^4
    double extreme_fiber_distance_a = 0.0; // mm
    double extreme_fiber_distance_b = 0.0; // mm
    double torsion_fiber_distance = 0.0;   // mm, for tau = T*c/J
    double station = 0.0;                  // mm
    bool notched = false;
    NotchPlane notch_plane = NotchPlane::A;
};

/// Screw spec with all invariants verified plus the derived alternating
/// crest/valley segment layout along the threaded length.
class ValidatedScrewSpec {
public:
    /// Verifies every invariant; throws InvalidGeometry / InvalidMaterial
    /// naming the offending field. Idempotent: re-validating yields an
    /// identical value.
    static ValidatedScrewSpec validate(ScrewSpec spec);

    const ScrewSpec& spec() const { return spec_; }
    const std::vector<Segment>& layout() const { return layout_; }

    double threaded_length() const { return spec_.thread_count * spec_.thread_pitch; }
    double thread_depth() const { return (spec_.outer_diameter - spec_.core_diameter) / 2.0; }
    double core_radius() const { return spec_.core_diameter / 2.0; }
    double outer_radius() const { return spec_.outer_diameter / 2.0; }
    double cannula_radius() const { return spec_.cannula_diameter / 2.0; }
    double tapping_length() const { return spec_.tapping_thread_count * spec_.thread_pitch; }

    /// Distance from the screw axis to the notch root, the extreme ligament
    /// fiber of the flexure hinge. Zero when the notch reaches the axis.
    double hinge_fiber_offset() const;

    /// Valley (hinge) center positions, mm from the thread start on the tip
    /// side, with their notch planes. Empty for a solid shaft.
    struct Hinge {
        double offset;  // mm from tip-side thread start
        NotchPlane plane;
    };
    const std::vector<Hinge>& hinges() const { return hinges_; }

private:
    ValidatedScrewSpec() = default;
    ScrewSpec spec_;
    std::vector<Segment> layout_;
    std::vector<Hinge> hinges_;
};

inline ValidatedScrewSpec validate_screw_spec(ScrewSpec spec) {
    return ValidatedScrewSpec::validate(std::move(spec));
}

/// Cross-section properties at arc-length station s (mm from the tip-side
/// thread start). Notch-free stations are the exact annulus; notched
/// stations use the two-web ligament model.
SectionProps section_properties(const ValidatedScrewSpec& spec, double s);

/// Exact annulus values: A = pi(Dc^2-Di^2)/4, I = pi(Dc^4-Di^4)/64, J = 2I.
SectionProps annulus_section(double core_diameter, double cannula_diameter, double s = 0.0);

struct InterferenceReport {
    double core_clearance = 0.0;  // mm, (tunnel - core)/2
    double thread_bite = 0.0;     // mm, (outer - tunnel)/2
    bool can_enter = false;       // core_clearance >= 0
    bool threads_engage = false;  // thread_bite > 0
    bool feasible = false;
};

InterferenceReport interference(const ValidatedScrewSpec& spec, double tunnel_diameter);

}  // namespace bmscrew::model
