#include <doctest.h>

#include <cmath>
#include <random>

#include "bmscrew/model.hpp"

using namespace bmscrew;
using namespace bmscrew::model;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("annulus closed forms on the reference diameters") {
    auto s = annulus_section(7.5, 5.0);
    double a_exact = kPi * (7.5 * 7.5 - 5.0 * 5.0) / 4.0;
    double i_exact = kPi * (std::pow(7.5, 4) - std::pow(5.0, 4)) / 64.0;
    CHECK(s.area == doctest::Approx(a_exact).epsilon(1e-9));
    CHECK(s.second_moment_plane_a == doctest::Approx(i_exact).epsilon(1e-9));
    CHECK(s.second_moment_plane_b == doctest::Approx(i_exact).epsilon(1e-9));
    CHECK(s.torsion_constant == doctest::Approx(2.0 * i_exact).epsilon(1e-9));
    CHECK(s.area == doctest::Approx(24.544).epsilon(1e-4));
    CHECK(s.second_moment_plane_a == doctest::Approx(124.63).epsilon(1e-4));
    CHECK(s.extreme_fiber_distance_a == doctest::Approx(3.75));
}

TEST_CASE("annulus area vanishes as the cannula approaches the core") {
    auto s = annulus_section(7.5, 7.5 - 1e-7);
    CHECK(s.area < 1e-5);
}

TEST_CASE("reference screw validates") {
    auto v = validate_screw_spec(reference_screw());
    CHECK(v.spec().core_diameter == 7.5);
    CHECK(v.spec().outer_diameter == 9.5);
    CHECK(v.spec().cannula_diameter == 5.0);
    CHECK(v.spec().overall_length == 50.0);
    CHECK(v.spec().thread_count == 11);
    CHECK(v.spec().thread_pitch == doctest::Approx(3.175));
    CHECK(v.threaded_length() == doctest::Approx(34.925));
    CHECK(v.thread_depth() == doctest::Approx(1.0));
    REQUIRE(v.spec().notches.has_value());
    CHECK(v.spec().notches->depth == doctest::Approx(3.75));
    CHECK(v.spec().notches->width == doctest::Approx(1.0));
    CHECK(v.spec().notches->pitch == doctest::Approx(3.175));
}

TEST_CASE("validation rejects a cannula at or above the core") {
    ScrewSpec s = reference_screw();
    s.cannula_diameter = 8.0;
    CHECK_THROWS_AS(validate_screw_spec(s), InvalidGeometry);
    try {
        validate_screw_spec(s);
    } catch (const InvalidGeometry& e) {
        CHECK(e.field() == "cannula_diameter");
    }
}

TEST_CASE("validation rejects threads longer than the screw") {
    ScrewSpec s = reference_screw();
    s.thread_count = 20;  // 63.5 mm of thread on a 50 mm screw
    CHECK_THROWS_AS(validate_screw_spec(s), InvalidGeometry);
}

TEST_CASE("validation is idempotent") {
    auto v1 = validate_screw_spec(reference_screw());
    auto v2 = validate_screw_spec(v1.spec());
    CHECK(v1.spec().core_diameter == v2.spec().core_diameter);
    CHECK(v1.layout().size() == v2.layout().size());
    CHECK(v1.hinges().size() == v2.hinges().size());
    for (std::size_t i = 0; i < v1.hinges().size(); ++i) {
        CHECK(v1.hinges()[i].offset == v2.hinges()[i].offset);
        CHECK(v1.hinges()[i].plane == v2.hinges()[i].plane);
    }
}

TEST_CASE("segment layout alternates planes") {
    auto v = validate_screw_spec(reference_screw());
    REQUIRE(v.hinges().size() >= 2);
    for (std::size_t i = 1; i < v.hinges().size(); ++i) {
        CHECK(v.hinges()[i].plane == orthogonal(v.hinges()[i - 1].plane));
        CHECK(v.hinges()[i].offset > v.hinges()[i - 1].offset);
    }
}

TEST_CASE("notched station moment is below the annulus value") {
    auto v = validate_screw_spec(reference_screw());
    auto annulus = annulus_section(7.5, 5.0);
    REQUIRE(!v.hinges().empty());
    double s0 = v.hinges()[0].offset;
    auto p = model::section_properties(v, s0);
    REQUIRE(p.notched);
    double notch_plane_i = p.notch_plane == NotchPlane::A ? p.second_moment_plane_a
                                                          : p.second_moment_plane_b;
    double orth_i = p.notch_plane == NotchPlane::A ? p.second_moment_plane_b
                                                   : p.second_moment_plane_a;
    CHECK(notch_plane_i < annulus.second_moment_plane_a);
    CHECK(orth_i == doctest::Approx(annulus.second_moment_plane_a).epsilon(1e-12));
}

TEST_CASE("deeper notches strictly reduce the notch-plane moment") {
    double prev = 1e30;
    for (double depth : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 3.75}) {
        ScrewSpec s = reference_screw();
        s.notches->depth = depth;
        auto v = validate_screw_spec(s);
        auto p = model::section_properties(v, v.hinges()[0].offset);
        double i_notch = p.notch_plane == NotchPlane::A ? p.second_moment_plane_a
                                                        : p.second_moment_plane_b;
        CHECK(i_notch < prev);
        prev = i_notch;
    }
}

TEST_CASE("notch-free station reproduces the annulus exactly") {
    auto v = validate_screw_spec(reference_screw());
    // Midpoint of the first thread crest, clear of every valley.
    auto p = model::section_properties(v, 0.5);
    auto a = annulus_section(7.5, 5.0);
    CHECK(!p.notched);
    CHECK(p.area == doctest::Approx(a.area).epsilon(1e-12));
    CHECK(p.second_moment_plane_a == doctest::Approx(p.second_moment_plane_b).epsilon(1e-12));
}

TEST_CASE("section_properties rejects out-of-range stations") {
    auto v = validate_screw_spec(reference_screw());
    CHECK_THROWS_AS(model::section_properties(v, -1.0), OutOfRange);
    CHECK_THROWS_AS(model::section_properties(v, 51.0), OutOfRange);
}

TEST_CASE("interference arithmetic") {
    auto v = validate_screw_spec(reference_screw());
    SUBCASE("8.5 mm tunnel") {
        auto r = interference(v, 8.5);
        CHECK(r.core_clearance == doctest::Approx(0.5));
        CHECK(r.thread_bite == doctest::Approx(0.5));
        CHECK(r.feasible);
    }
    SUBCASE("tunnel smaller than the core") {
        auto r = interference(v, 7.0);
        CHECK(r.core_clearance < 0.0);
        CHECK(!r.can_enter);
        CHECK(!r.feasible);
    }
    SUBCASE("tunnel at the outer diameter") {
        auto r = interference(v, 9.5);
        CHECK(r.thread_bite == doctest::Approx(0.0));
        CHECK(!r.threads_engage);
        CHECK(!r.feasible);
    }
}

TEST_CASE("superelastic law") {
    MaterialSpec m = nitinol();
    double ey = m.yield_strain();
    SUBCASE("linear below yield, scaling with E") {
        for (double e : {0.1 * ey, 0.5 * ey, 0.99 * ey}) {
            CHECK(superelastic_stress(m, e) == doctest::Approx(m.youngs_modulus * e));
        }
        MaterialSpec m2 = m;
        m2.youngs_modulus *= 2.0;
        CHECK(superelastic_stress(m2, 0.5 * ey) ==
              doctest::Approx(2.0 * superelastic_stress(m, 0.5 * ey)));
    }
    SUBCASE("plateau between yield and the recoverable limit") {
        for (double e : {ey, 0.02, 0.04, m.recoverable_strain}) {
            CHECK(superelastic_stress(m, e) == doctest::Approx(m.yield_strength));
        }
    }
}

TEST_CASE("material validation") {
    MaterialSpec m = nitinol();
    CHECK_NOTHROW(m.validate());
    SUBCASE("poisson bound") {
        m.poisson_ratio = 0.6;
        CHECK_THROWS_AS(m.validate(), InvalidMaterial);
    }
    SUBCASE("yield below ultimate") {
        m.yield_strength = 2000.0;
        CHECK_THROWS_AS(m.validate(), InvalidMaterial);
    }
    SUBCASE("recoverable strain covers the elastic range") {
        m.recoverable_strain = 1e-4;
        CHECK_THROWS_AS(m.validate(), InvalidMaterial);
    }
}

TEST_CASE("notch depth invariant allows reaching the axis and no further") {
    ScrewSpec s = reference_screw();
    s.notches->depth = 3.76;
    CHECK_THROWS_AS(validate_screw_spec(s), InvalidGeometry);
    s.notches->depth = 0.0;
    CHECK_THROWS_AS(validate_screw_spec(s), InvalidGeometry);
    s.notches->depth = 3.75;
    CHECK_NOTHROW(validate_screw_spec(s));
}

TEST_CASE("randomized notch depths keep the orthogonal moment at the annulus value") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> depth_dist(0.2, 3.75);
    auto annulus = annulus_section(7.5, 5.0);
    for (int i = 0; i < 50; ++i) {
        ScrewSpec s = reference_screw();
        s.notches->depth = depth_dist(rng);
        auto v = validate_screw_spec(s);
        auto p = model::section_properties(v, v.hinges()[0].offset);
        double orth = p.notch_plane == NotchPlane::A ? p.second_moment_plane_b
                                                     : p.second_moment_plane_a;
        CHECK(orth == doctest::Approx(annulus.second_moment_plane_a).epsilon(1e-12));
    }
}
