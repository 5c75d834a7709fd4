#include <doctest.h>

#include <cmath>

#include "bmscrew/fixate.hpp"

using namespace bmscrew;
using namespace bmscrew::fixate;

namespace {
constexpr double kPi = 3.14159265358979323846;

plan::TunnelSpec tunnel_25n() {
    auto m = plan::calibrate({{5.0, 5.3}, {25.0, 10.0}});
    return plan::generate_tunnel(25.0, m, plan::DrillParams{});
}

insertion::BoneSpec fixture_bone() {
    return insertion::BoneSpec{model::foam_15pcf(), {65.0, 40.0, 9.0}};
}

FractureScenario base_scenario(bool with_screw) {
    FractureScenario sc{tunnel_25n(), std::nullopt, fixture_bone(), 2.0, 15.0, 10.0};
    if (with_screw) sc.screw = model::validate_screw_spec(model::reference_screw());
    return sc;
}

}  // namespace

TEST_CASE("thread shear factor and pullout strength") {
    auto screw = model::validate_screw_spec(model::reference_screw());
    auto bone = fixture_bone();
    SUBCASE("thread shear factor for the reference thread") {
        CHECK(thread_shear_factor(screw) ==
              doctest::Approx(0.5 + 0.57735 * 1.0 / 3.175).epsilon(1e-12));
        CHECK(thread_shear_factor(screw) == doctest::Approx(0.68184).epsilon(1e-4));
    }
    SUBCASE("full-length pullout at the fixture strength") {
        double want = 1.6 * 34.925 * kPi * 9.5 * thread_shear_factor(screw);
        CHECK(pullout_strength(screw, bone, 34.925) == doctest::Approx(want).epsilon(1e-12));
        CHECK(pullout_strength(screw, bone, 34.925) == doctest::Approx(1137.2).epsilon(1e-3));
    }
    SUBCASE("zero engagement carries nothing") {
        CHECK(pullout_strength(screw, bone, 0.0) == doctest::Approx(0.0));
    }
    SUBCASE("linear in engaged length and bone strength") {
        auto strong = bone;
        strong.material.shear_strength *= 3.0;
        CHECK(pullout_strength(screw, bone, 20.0) ==
              doctest::Approx(2.0 * pullout_strength(screw, bone, 10.0)).epsilon(1e-12));
        CHECK(pullout_strength(screw, strong, 10.0) ==
              doctest::Approx(3.0 * pullout_strength(screw, bone, 10.0)).epsilon(1e-12));
    }
    SUBCASE("engagement beyond the threads is rejected") {
        CHECK_THROWS_AS(pullout_strength(screw, bone, 40.0), OutOfRange);
    }
}

TEST_CASE("fixation capacity") {
    SUBCASE("unfixed scenario reports the calibrated baseline") {
        auto r = fixation_capacity(base_scenario(false));
        CHECK(r.capacity == doctest::Approx(10.0));
        CHECK(r.governing_mode == GoverningMode::Baseline);
    }
    SUBCASE("fixed exceeds unfixed") {
        auto fixed = fixation_capacity(base_scenario(true));
        auto unfixed = fixation_capacity(base_scenario(false));
        CHECK(fixed.capacity > unfixed.capacity);
        CHECK(fixed.fixed_over_unfixed > 1.0);
    }
    SUBCASE("governing mode is the argmin of the component capacities") {
        auto r = fixation_capacity(base_scenario(true));
        double lowest = std::min({r.pullout_limited, r.bearing_limited, r.bending_limited});
        if (lowest == r.pullout_limited)
            CHECK(r.governing_mode == GoverningMode::Pullout);
        else if (lowest == r.bearing_limited)
            CHECK(r.governing_mode == GoverningMode::BoneBearing);
        else
            CHECK(r.governing_mode == GoverningMode::ScrewBending);
        CHECK(r.capacity == doctest::Approx(r.baseline + lowest));
    }
    SUBCASE("near-zero-strength bone collapses to the baseline") {
        auto sc = base_scenario(true);
        sc.bone.material.shear_strength = 1e-9;
        auto r = fixation_capacity(sc);
        CHECK(r.capacity == doctest::Approx(10.0).epsilon(1e-6));
    }
    SUBCASE("capacity is non-increasing in the load offset") {
        double prev = 1e30;
        for (double e : {5.0, 10.0, 15.0, 20.0, 25.0}) {
            auto sc = base_scenario(true);
            sc.load_offset = e;
            double cap = fixation_capacity(sc).capacity;
            CHECK(cap < prev);
            prev = cap;
        }
    }
    SUBCASE("fixed capacity exceeds unfixed across bone strengths") {
        for (double s : {0.2, 0.8, 1.6, 3.2, 6.4}) {
            auto fixed = base_scenario(true);
            fixed.bone.material.shear_strength = s;
            auto unfixed = base_scenario(false);
            unfixed.bone.material.shear_strength = s;
            CHECK(fixation_capacity(fixed).capacity > fixation_capacity(unfixed).capacity);
        }
    }
    SUBCASE("no engagement across the fracture throws") {
        auto sc = base_scenario(true);
        model::ScrewSpec short_screw = model::reference_screw();
        short_screw.thread_count = 5;  // 15.9 mm of thread, short of the cut plane
        sc.screw = model::validate_screw_spec(short_screw);
        CHECK_THROWS_AS(fixation_capacity(sc), NoEngagementAcrossFracture);
    }
    SUBCASE("rejects a non-positive load offset") {
        auto sc = base_scenario(true);
        sc.load_offset = 0.0;
        CHECK_THROWS_AS(fixation_capacity(sc), InvalidGeometry);
    }
}
