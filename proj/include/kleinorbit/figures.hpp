#pragma once

#include <algorithm>
#include <cmath>

#include "kleinorbit/orbit.hpp"
#include "kleinorbit/quadgroup.hpp"
#include "kleinorbit/render.hpp"

namespace kleinorbit {

// Figure-style scene pair for a quadrilateral datum: one view of the mirror
// quadrilateral with the limit set, one view of the circle orbit.
struct QuadFigures {
    Scene planeScene;  // mirrors in gray, limit-set points in black
    Scene orbitScene;  // orbit circles, limit circle highlighted when present
    LimitCloud cloud;
    OrbitSet orbit;
};

inline QuadFigures make_quad_figures(const QuadGroupData& d, const OrbitConfig& cfg = {},
                                     double pointDiameter = 1e-3, int workers = 1,
                                     int sizePx = 800) {
    QuadFigures f;
    GeneratorSet gens = quad_generators(d);

    GenCircle seed = is_fuchsian(d) ? d.c1 : exotic_circle(d);
    f.orbit = enumerate_orbit(gens, seed, cfg, workers);
    f.cloud = approximate_limit_set(gens, cfg, pointDiameter);

    double extent = 0.0;
    for (const GenCircle& c : {d.c1, d.c2, d.c3, d.c4}) {
        extent = std::max(extent, std::abs(c.center()) + c.radius());
    }
    Viewport vp{Complex(0.0, 0.0), 1.15 * extent, sizePx};

    f.planeScene.viewport = vp;
    CircleLayer mirrors;
    mirrors.circles = {d.c1, d.c2, d.c3, d.c4};
    mirrors.style = {1.5, "#888888", "none"};
    f.planeScene.circleLayers.push_back(mirrors);
    PointLayer limitPoints;
    for (const SpherePoint& s : f.cloud.points) limitPoints.points.push_back(from_sphere(s));
    limitPoints.style = {0.0, "none", "#000000"};
    limitPoints.markerRadiusPx = 1.0;
    f.planeScene.pointLayers.push_back(limitPoints);

    f.orbitScene.viewport = vp;
    CircleLayer orbitLayer;
    for (const OrbitItem& item : f.orbit.items) orbitLayer.circles.push_back(item.circle);
    orbitLayer.style = {0.4, "#1f4e9c", "none"};
    f.orbitScene.circleLayers.push_back(orbitLayer);
    if (!is_fuchsian(d)) {
        CircleLayer accumulation;
        accumulation.circles = {limit_circle(d)};
        accumulation.style = {1.2, "#c03030", "none"};
        f.orbitScene.circleLayers.push_back(accumulation);
    }
    return f;
}

}  // namespace kleinorbit
