#include <doctest.h>

#include <cmath>

#include "bmscrew/insertion.hpp"

using namespace bmscrew;
using namespace bmscrew::insertion;

namespace {

plan::TunnelSpec tunnel_for(double tension) {
    auto m = plan::calibrate({{5.0, 5.3}, {25.0, 10.0}});
    return plan::generate_tunnel(tension, m, plan::DrillParams{});
}

BoneSpec fixture_bone() { return BoneSpec{model::foam_15pcf(), {65.0, 40.0, 9.0}}; }

}  // namespace

TEST_CASE("tapping torque") {
    auto screw = model::validate_screw_spec(model::reference_screw());
    BoneSpec bone = fixture_bone();
    SUBCASE("no engagement, no torque") {
        CHECK(tapping_torque(screw, bone, 0.0) == doctest::Approx(0.0));
    }
    SUBCASE("full tapping engagement matches the hand formula") {
        // S * bite * tapping length * (OD + tunnel)/4 at a core-sized tunnel.
        double s = bone.material.shear_strength;
        double tap_len = screw.tapping_length();
        double want = s * 1.0 * tap_len * (9.5 + 7.5) / 4.0;
        CHECK(tapping_torque(screw, bone, screw.threaded_length()) ==
              doctest::Approx(want).epsilon(1e-12));
        double want85 = s * 0.5 * tap_len * (9.5 + 8.5) / 4.0;
        CHECK(tapping_torque(screw, bone, screw.threaded_length(), 8.5) ==
              doctest::Approx(want85).epsilon(1e-12));
    }
    SUBCASE("engagement beyond the threads is rejected") {
        CHECK_THROWS_AS(tapping_torque(screw, bone, 40.0), OutOfRange);
    }
}

TEST_CASE("tapping torque doubles with bone strength") {
    auto screw = model::validate_screw_spec(model::reference_screw());
    BoneSpec bone = fixture_bone();
    BoneSpec strong = bone;
    strong.material.shear_strength *= 2.0;
    double t1 = tapping_torque(screw, bone, 10.0, 8.5);
    double t2 = tapping_torque(screw, strong, 10.0, 8.5);
    CHECK(t2 == doctest::Approx(2.0 * t1).epsilon(1e-12));
}

TEST_CASE("insertion simulation") {
    auto screw = model::validate_screw_spec(model::reference_screw());
    BoneSpec bone = fixture_bone();
    SUBCASE("straight tunnel with a generous budget passes with zero bending") {
        auto r = simulate_insertion(screw, tunnel_for(0.0), bone, {1e6});
        CHECK(r.verdict == rod::Verdict::Pass);
        for (const auto& st : r.steps) {
            CHECK(st.pass);
            CHECK(st.max_bending_utilization == doctest::Approx(0.0));
        }
    }
    SUBCASE("the 25 N tunnel passes at the 150 N*mm budget") {
        auto r = simulate_insertion(screw, tunnel_for(25.0), bone, {150.0});
        CHECK(r.verdict == rod::Verdict::Pass);
        CHECK(r.limiting_step == -1);
    }
    SUBCASE("zero budget fails at the first step on the torque budget") {
        auto r = simulate_insertion(screw, tunnel_for(25.0), bone, {0.0});
        CHECK(r.verdict == rod::Verdict::Fail);
        REQUIRE(r.limiting_step == 0);
        CHECK(r.steps[0].limiting_factor == "torque budget");
    }
    SUBCASE("infeasible interference throws") {
        plan::TunnelSpec narrow{rod::Centerline(0.0, 35.0), 7.0, 0.0};
        CHECK_THROWS_AS(simulate_insertion(screw, narrow, bone, {150.0}),
                        InfeasibleInterference);
    }
}

TEST_CASE("insertion report bookkeeping") {
    auto screw = model::validate_screw_spec(model::reference_screw());
    BoneSpec bone = fixture_bone();
    auto r = simulate_insertion(screw, tunnel_for(25.0), bone, {150.0});
    const double pitch = screw.spec().thread_pitch;
    SUBCASE("depths strictly increase by one pitch") {
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            CHECK(r.steps[i].depth == doctest::Approx(std::min((i + 1) * pitch,
                                                               screw.threaded_length())));
            if (i > 0) CHECK(r.steps[i].depth > r.steps[i - 1].depth);
        }
    }
    SUBCASE("engaged threads match the closed-form count") {
        for (const auto& st : r.steps) {
            int want = std::min(static_cast<int>(std::floor(st.depth / pitch + 1e-9)),
                                screw.spec().thread_count);
            CHECK(st.engaged_threads == want);
        }
    }
    SUBCASE("verdict is the conjunction of step verdicts") {
        bool all = true;
        for (const auto& st : r.steps) all = all && st.pass;
        CHECK((r.verdict == rod::Verdict::Pass) == all);
    }
    SUBCASE("head torque required is non-decreasing with depth") {
        for (std::size_t i = 1; i < r.steps.size(); ++i)
            CHECK(r.steps[i].head_torque_required >=
                  r.steps[i - 1].head_torque_required - 1e-9);
    }
    SUBCASE("reruns are identical") {
        auto r2 = simulate_insertion(screw, tunnel_for(25.0), bone, {150.0});
        REQUIRE(r2.steps.size() == r.steps.size());
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            CHECK(r2.steps[i].head_torque_required == r.steps[i].head_torque_required);
            CHECK(r2.steps[i].max_bending_utilization == r.steps[i].max_bending_utilization);
        }
    }
}

TEST_CASE("bone validation") {
    BoneSpec bone = fixture_bone();
    CHECK_NOTHROW(bone.validate());
    bone.material.shear_strength = 0.0;
    CHECK_THROWS(bone.validate());
    bone = fixture_bone();
    bone.block_dimensions[1] = -1.0;
    CHECK_THROWS_AS(bone.validate(), InvalidGeometry);
}
