#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "kleinorbit/gen_circle.hpp"

namespace kleinorbit {

// ---------------------------------------------------------------------------
// Viewport: square window in the plane mapped onto a square pixel canvas,
// y pointing up in the plane and down on the canvas.

struct Viewport {
    Complex center{0.0, 0.0};
    double halfWidth = 2.0;
    int sizePx = 512;

    void validate() const {
        if (!(halfWidth > 0.0) || !std::isfinite(halfWidth)) {
            throw std::invalid_argument("viewport half-width must be positive");
        }
        if (sizePx < 16) throw std::invalid_argument("viewport must be at least 16 pixels");
    }

    double scale() const { return sizePx / (2.0 * halfWidth); }

    std::array<double, 2> to_pixel(Complex z) const {
        double s = scale();
        return {0.5 * sizePx + (z.real() - center.real()) * s,
                0.5 * sizePx - (z.imag() - center.imag()) * s};
    }

    Complex from_pixel(double px, double py) const {
        double s = scale();
        return center + Complex((px - 0.5 * sizePx) / s, (0.5 * sizePx - py) / s);
    }
};

// ---------------------------------------------------------------------------
// Scene description

struct Style {
    double strokeWidth = 1.0;
    std::string stroke = "#000000";
    std::string fill = "none";
};

struct CircleLayer {
    std::vector<GenCircle> circles;
    Style style;
};

struct PointLayer {
    std::vector<ComplexPoint> points;
    Style style{0.0, "none", "#000000"};
    double markerRadiusPx = 1.0;
};

struct Scene {
    Viewport viewport;
    std::vector<CircleLayer> circleLayers;
    std::vector<PointLayer> pointLayers;
};

struct RenderStats {
    std::size_t emitted = 0;
    std::size_t droppedSmall = 0;    // pixel diameter under half a pixel
    std::size_t droppedOutside = 0;  // no intersection with the canvas
};

namespace detail {

// Fixed 9-significant-digit decimal formatting (printf %.9g semantics via
// std::to_chars), so output bytes do not depend on locale or platform.
inline std::string fmt9(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                             std::chars_format::general, 9);
    if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), res.ptr);
}

inline void append_attr(std::string& out, const char* name, double v) {
    out += ' ';
    out += name;
    out += "=\"";
    out += fmt9(v);
    out += '"';
}

}  // namespace detail

// Render a scene as a minimal deterministic SVG document. Only the elements
// svg, g, circle, line, and clipPath are used; circles are emitted with
// their full geometry and confined by a clip disk enclosing the canvas.
// Circles smaller than half a pixel and items with no point on the canvas
// are dropped, with the counts recorded both in `stats` (when given) and in
// a comment inside the document.
inline std::string render_svg(const Scene& scene, RenderStats* stats = nullptr) {
    const Viewport& vp = scene.viewport;
    vp.validate();

    RenderStats st;
    std::string body;
    const double S = static_cast<double>(vp.sizePx);
    const double margin = 0.5 * S * (std::sqrt(2.0) - 1.0) + 1.0;

    auto circle_visible = [&](double cx, double cy, double r) {
        return cx + r >= 0.0 && cx - r <= S && cy + r >= 0.0 && cy - r <= S;
    };

    auto emit_circle_geometry = [&](const GenCircle& c) -> bool {
        if (c.is_line()) {
            // Parameterize z = z0 + t * dir and emit a segment long enough
            // to cross the whole canvas whenever the line meets it.
            Complex b = c.b();
            double bn = std::abs(b);
            Complex z0 = -c.d() * b / (2.0 * bn * bn);
            Complex dir = Complex(0.0, 1.0) * b / bn;
            double dist = std::abs(c.eval(vp.center)) / (2.0 * bn);
            if (dist > vp.halfWidth * std::sqrt(2.0)) {
                ++st.droppedOutside;
                return false;
            }
            double span = std::abs(vp.center - z0) + 2.0 * vp.halfWidth;
            auto p1 = vp.to_pixel(z0 - span * dir);
            auto p2 = vp.to_pixel(z0 + span * dir);
            body += "<line";
            detail::append_attr(body, "x1", p1[0]);
            detail::append_attr(body, "y1", p1[1]);
            detail::append_attr(body, "x2", p2[0]);
            detail::append_attr(body, "y2", p2[1]);
            body += "/>\n";
            return true;
        }
        auto px = vp.to_pixel(c.center());
        double r = c.radius() * vp.scale();
        if (2.0 * r < 0.5) {
            ++st.droppedSmall;
            return false;
        }
        if (!circle_visible(px[0], px[1], r)) {
            ++st.droppedOutside;
            return false;
        }
        body += "<circle";
        detail::append_attr(body, "cx", px[0]);
        detail::append_attr(body, "cy", px[1]);
        detail::append_attr(body, "r", r);
        body += "/>\n";
        return true;
    };

    for (const CircleLayer& layer : scene.circleLayers) {
        body += "<g stroke=\"" + layer.style.stroke + "\" stroke-width=\"" +
                detail::fmt9(layer.style.strokeWidth) + "\" fill=\"" + layer.style.fill +
                "\">\n";
        for (const GenCircle& c : layer.circles) {
            if (emit_circle_geometry(c)) ++st.emitted;
        }
        body += "</g>\n";
    }

    for (const PointLayer& layer : scene.pointLayers) {
        body += "<g stroke=\"" + layer.style.stroke + "\" fill=\"" + layer.style.fill + "\">\n";
        for (const ComplexPoint& p : layer.points) {
            if (p.at_infinity) {
                ++st.droppedOutside;
                continue;
            }
            auto px = vp.to_pixel(p.z);
            if (!circle_visible(px[0], px[1], layer.markerRadiusPx)) {
                ++st.droppedOutside;
                continue;
            }
            body += "<circle";
            detail::append_attr(body, "cx", px[0]);
            detail::append_attr(body, "cy", px[1]);
            detail::append_attr(body, "r", layer.markerRadiusPx);
            body += "/>\n";
            ++st.emitted;
        }
        body += "</g>\n";
    }

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(vp.sizePx) + "\" height=\"" + std::to_string(vp.sizePx) +
           "\" viewBox=\"0 0 " + std::to_string(vp.sizePx) + " " + std::to_string(vp.sizePx) +
           "\">\n";
    out += "<!-- dropped-small:" + std::to_string(st.droppedSmall) +
           " dropped-outside:" + std::to_string(st.droppedOutside) + " -->\n";
    if (st.emitted == 0) out += "<!-- warning: empty scene -->\n";
    out += "<clipPath id=\"frame\"><circle";
    detail::append_attr(out, "cx", 0.5 * S);
    detail::append_attr(out, "cy", 0.5 * S);
    detail::append_attr(out, "r", 0.5 * S * std::sqrt(2.0) + margin);
    out += "/></clipPath>\n";
    out += "<g clip-path=\"url(#frame)\">\n";
    out += body;
    out += "</g>\n</svg>\n";

    if (stats) *stats = st;
    return out;
}

}  // namespace kleinorbit
