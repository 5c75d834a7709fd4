#include "bmscrew/rod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmscrew::rod {

namespace {

std::vector<double> station_grid(const ArcInterval& engaged, double stations_per_mm,
                                 const std::vector<double>& extra = {}) {
    std::vector<double> grid;
    double step = 1.0 / stations_per_mm;
    int n = std::max(1, static_cast<int>(std::ceil(engaged.length() / step)));
    grid.reserve(n + 1 + extra.size());
    for (int i = 0; i <= n; ++i)
        grid.push_back(std::min(engaged.begin + i * step, engaged.end));
    for (double e : extra)
        if (e > engaged.begin && e < engaged.end) grid.push_back(e);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

void check_engaged(const ArcInterval& engaged, const Centerline& c) {
    if (!(engaged.end > engaged.begin))
        throw InvalidGeometry("engaged", "interval must have positive length");
    if (engaged.begin < -1e-9 || engaged.end > c.total_arc_length() + 1e-9)
        throw OutOfRange("engaged interval outside the centerline domain");
}

}  // namespace

CantileverResult solve_cantilever(double length, const model::SectionProps& section,
                                  double youngs_modulus, double tip_load, int elements) {
    if (!(section.second_moment_plane_a > 0.0) || !(youngs_modulus > 0.0))
        throw SingularSystem("degenerate section or modulus");
    if (!(length > 0.0)) throw InvalidGeometry("length", "must be positive");
    if (elements < 1) throw InvalidGeometry("elements", "must be positive");

    CantileverResult r;
    r.slender = length >= 10.0 * section.extreme_fiber_distance_a;

    // Unit-load form: deflection = integral of P (L-x)^2 / (E I) dx,
    // composite trapezoid over `elements` stations.
    const double ei = youngs_modulus * section.second_moment_plane_a;
    const double h = length / elements;
    auto f = [&](double x) {
        double arm = length - x;
        return tip_load * arm * arm / ei;
    };
    double sum = 0.5 * (f(0.0) + f(length));
    for (int i = 1; i < elements; ++i) sum += f(i * h);
    r.tip_deflection = sum * h;
    return r;
}

StressField prescribed_shape_stress(const model::ValidatedScrewSpec& spec, const Centerline& c,
                                    const ArcInterval& engaged) {
    check_engaged(engaged, c);
    const model::ScrewSpec& sp = spec.spec();
    const model::MaterialSpec& m = sp.material;

    StressField f;
    struct ActiveHinge {
        double s;
        double strain;
    };
    std::vector<ActiveHinge> active;
    std::vector<double> extra;

    if (sp.notches) {
        const model::NotchPattern& n = *sp.notches;
        const double fiber = spec.hinge_fiber_offset();
        for (const auto& h : spec.hinges()) {
            double s = engaged.end - h.offset;  // tip-side thread start maps to engaged.end
            if (s < engaged.begin - 1e-12 || s > engaged.end + 1e-12) continue;
            s = std::clamp(s, engaged.begin, engaged.end);
            double kappa = c.curvature_at_s(s);
            // The planar tunnel bends in plane A; orthogonal hinges see the
            // plane-decomposed (zero) curvature component.
            double strain =
                h.plane == model::NotchPlane::A ? kappa * n.pitch * fiber / n.width : 0.0;
            active.push_back({s, strain});
            extra.push_back(s - n.width / 2.0);
            extra.push_back(s + n.width / 2.0);
        }
    }

    f.station = station_grid(engaged, c.stations_per_mm(), extra);
    f.curvature.resize(f.station.size());
    f.strain.assign(f.station.size(), 0.0);

    for (std::size_t i = 0; i < f.station.size(); ++i)
        f.curvature[i] = c.curvature_at_s(f.station[i]);

    if (sp.notches) {
        const double half_w = sp.notches->width / 2.0;
        for (std::size_t i = 0; i < f.station.size(); ++i) {
            for (const auto& h : active) {
                if (std::abs(f.station[i] - h.s) <= half_w + 1e-12)
                    f.strain[i] = std::max(f.strain[i], h.strain);
            }
        }
    } else {
        // Solid shaft: the whole section follows the centerline curvature.
        for (std::size_t i = 0; i < f.station.size(); ++i)
            f.strain[i] = f.curvature[i] * spec.outer_radius();
    }

    f.stress.resize(f.station.size());
    f.utilization.resize(f.station.size());
    bool fail = false;
    f.max_utilization = 0.0;
    f.max_utilization_station = f.station.empty() ? engaged.begin : f.station.front();
    for (std::size_t i = 0; i < f.station.size(); ++i) {
        f.stress[i] = model::superelastic_stress(m, f.strain[i]);
        f.utilization[i] = f.strain[i] / m.recoverable_strain;
        if (f.utilization[i] > f.max_utilization + 1e-15) {
            f.max_utilization = f.utilization[i];
            f.max_utilization_station = f.station[i];  // ascending scan: smallest s wins
        }
        if (f.strain[i] > m.recoverable_strain || f.stress[i] > m.ultimate_strength) fail = true;
    }
    f.verdict = fail ? Verdict::Fail : Verdict::Pass;
    return f;
}

TorqueField torque_transmission(const model::ValidatedScrewSpec& spec, const Centerline& c,
                                double head_torque, const model::MaterialSpec& bone,
                                const CuttingResistance& cutting,
                                std::optional<ArcInterval> engaged_opt, double conformity) {
    const model::ScrewSpec& sp = spec.spec();
    ArcInterval engaged = engaged_opt.value_or(
        ArcInterval{0.0, std::min(spec.threaded_length(), c.total_arc_length())});
    check_engaged(engaged, c);
    if (head_torque < 0.0) throw InvalidGeometry("head_torque", "must be non-negative");

    const double mu = bone.friction_coefficient;
    const double r_mean = (sp.outer_diameter + sp.core_diameter) / 4.0;
    const double pitch = sp.notches ? sp.notches->pitch : sp.thread_pitch;
    const double e_mod = sp.material.youngs_modulus;

    // Screw-frame offset of the tunnel station s (tip-side thread start at
    // engaged.end), clamped into the threaded span for section lookup.
    auto screw_offset = [&](double s) {
        return std::clamp(engaged.end - s, 0.0, spec.threaded_length());
    };
    auto density = [&](double s) {
        double q = conformity * e_mod *
                   model::section_properties(spec, screw_offset(s)).second_moment_plane_a *
                   c.curvature_at_s(s) / (pitch * pitch);
        double rho = mu * q * r_mean;
        if (s >= cutting.interval.begin && s <= cutting.interval.end) rho += cutting.density;
        return rho;
    };

    std::vector<double> extra = {cutting.interval.begin, cutting.interval.end};
    if (sp.notches) {
        const double half_w = sp.notches->width / 2.0;
        for (const auto& h : spec.hinges()) {
            double s = engaged.end - h.offset;
            extra.push_back(s - half_w);
            extra.push_back(s + half_w);
            extra.push_back(s);
        }
    }

    TorqueField f;
    f.station = station_grid(engaged, c.stations_per_mm(), extra);
    const std::size_t n = f.station.size();
    f.torque.resize(n);
    f.shear_stress.resize(n);
    f.resistance_density.resize(n);

    // Midpoint rule per cell: exact for piecewise-constant densities once
    // the interval breakpoints are part of the grid.
    f.torque[0] = head_torque;
    f.resistance_density[0] = density(f.station[0]);
    double required = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double ds = f.station[i + 1] - f.station[i];
        double drop = density(0.5 * (f.station[i] + f.station[i + 1])) * ds;
        required += drop;
        f.torque[i + 1] = f.torque[i] - drop;
        f.resistance_density[i + 1] = density(f.station[i + 1]);
    }
    f.head_torque_required = required;

    const double shear_yield = sp.material.shear_yield();
    bool stress_fail = false;
    double min_sf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (f.torque[i] < -1e-9) f.torque_exhausted = true;
        double t = std::max(f.torque[i], 0.0);
        auto props = model::section_properties(spec, screw_offset(f.station[i]));
        f.shear_stress[i] = t * props.torsion_fiber_distance / props.torsion_constant;
        if (f.shear_stress[i] > shear_yield) stress_fail = true;
        if (f.shear_stress[i] > 0.0)
            min_sf = std::min(min_sf, shear_yield / f.shear_stress[i]);
    }
    f.min_torsional_safety_factor = min_sf;
    f.verdict = (f.torque_exhausted || stress_fail) ? Verdict::Fail : Verdict::Pass;
    return f;
}

double safety_factor(const StressField& f, const model::MaterialSpec& m) {
    double sf = std::numeric_limits<double>::infinity();
    for (double e : f.strain)
        if (e > 0.0) sf = std::min(sf, m.recoverable_strain / e);
    return sf;
}

double safety_factor(const TorqueField& f, const model::MaterialSpec& m) {
    double sf = std::numeric_limits<double>::infinity();
    for (double t : f.shear_stress)
        if (t > 0.0) sf = std::min(sf, m.shear_yield() / t);
    return sf;
}

}  // namespace bmscrew::rod
