#pragma once

#include "hoi/exemplars/kmeans.hpp"
#include "hoi/geometry/mesh.hpp"
#include "hoi/geometry/primitives.hpp"

#include <random>

namespace hoi {

/// Box-assembled chair in metres: floor at y = 0, seat front toward +z,
/// back at -z. Parts: chair seat, chair back, chair base, chair arms. The
/// underside of the seat and the rear face of the back are labelled as base,
/// so the seat and back parts are open surfaces with a well-defined mean
/// normal (+y and +z).
struct ChairStyle {
    double seat_height = 0.45;  // top of the seat
    double seat_width = 0.48;
    double seat_depth = 0.45;
    double seat_thickness = 0.05;
    double back_height = 0.42;  // above the seat
    double back_thickness = 0.05;
    double leg_thickness = 0.045;
    bool solid_base = false;  // block instead of four legs
    bool arms = false;
    double arm_height = 0.22;
    int subdivisions = 3;
};

inline PartLabeledMesh make_chair(const ChairStyle& s) {
    require(s.seat_height > s.seat_thickness && s.seat_width > 0 && s.seat_depth > 0 && s.back_height > 0,
            "invalid chair dimensions");
    PartLabeledMesh chair;
    auto add = [&](const std::string& part, const Vec3& lo, const Vec3& hi) {
        PartLabeledMesh box;
        box.mesh = make_box(0.5 * (lo + hi), 0.5 * (hi - lo), s.subdivisions);
        box.part_names[0] = part;
        box.part_of_vertex.assign(box.mesh.vertices.size(), 0);
        append_mesh(chair, box);
    };
    const double hw = 0.5 * s.seat_width, hd = 0.5 * s.seat_depth;
    const double seat_bottom = s.seat_height - s.seat_thickness;
    add("chair seat", {-hw, seat_bottom, -hd}, {hw, s.seat_height, hd});
    add("chair back", {-hw, s.seat_height, -hd}, {hw, s.seat_height + s.back_height, -hd + s.back_thickness});
    for (std::uint32_t v = 0; v < chair.mesh.vertices.size(); ++v) {
        const auto& p = chair.mesh.vertices[v];
        const std::string& name = chair.part_names.at(chair.part_of_vertex[v]);
        if ((name == "chair seat" && p.y() <= seat_bottom + 1e-12) || (name == "chair back" && p.z() <= -hd + 1e-12))
            chair.part_of_vertex[v] = -1;
    }
    if (s.solid_base) {
        add("chair base", {-hw + 0.03, 0.0, -hd + 0.03}, {hw - 0.03, seat_bottom, hd - 0.03});
    } else {
        const double t = s.leg_thickness;
        for (double x : {-hw, hw - t})
            for (double z : {-hd, hd - t}) add("chair base", {x, 0.0, z}, {x + t, seat_bottom, z + t});
    }
    if (s.arms) {
        const double t = s.leg_thickness;
        const double front = hd - 0.02;
        for (double x : {-hw, hw - t}) {
            add("chair arms", {x, s.seat_height, front - t}, {x + t, s.seat_height + s.arm_height, front});
            add("chair arms", {x, s.seat_height + s.arm_height, -hd + s.back_thickness},
                {x + t, s.seat_height + s.arm_height + t, front});
        }
    }
    // -1 marks vertices moved to the base, whose id exists only from here on
    const PartId base = *chair.find_part("chair base");
    for (auto& p : chair.part_of_vertex)
        if (p == -1) p = base;
    return chair;
}

/// Chair with dimensions drawn around the defaults.
inline ChairStyle random_chair_style(std::mt19937_64& rng) {
    auto u = [&](double lo, double hi) { return lo + (hi - lo) * detail::uniform01(rng); };
    ChairStyle s;
    s.seat_height = u(0.40, 0.52);
    s.seat_width = u(0.40, 0.60);
    s.seat_depth = u(0.38, 0.55);
    s.seat_thickness = u(0.03, 0.09);
    s.back_height = u(0.25, 0.60);
    s.back_thickness = u(0.03, 0.08);
    s.leg_thickness = u(0.03, 0.07);
    s.solid_base = detail::uniform01(rng) < 0.25;
    s.arms = detail::uniform01(rng) < 0.35;
    s.arm_height = u(0.15, 0.28);
    return s;
}

}  // namespace hoi
