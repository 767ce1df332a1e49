#include "l1tucker/harness/digits.hpp"

#include "l1tucker/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace l1tucker::harness {

namespace {

struct Point {
    double x;
    double y;
};
using Stroke = std::vector<Point>;

// Canvas coordinates: x right, y down, glyph box [-1, 1]^2.
Stroke arc(double cx, double cy, double rx, double ry, double from_deg, double to_deg, int segments) {
    Stroke s;
    for (int k = 0; k <= segments; ++k) {
        const double a = (from_deg + (to_deg - from_deg) * k / segments) * std::numbers::pi / 180.0;
        s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    }
    return s;
}

std::vector<Stroke> skeleton(int digit) {
    switch (digit) {
        case 0: return {arc(0.0, 0.0, 0.55, 0.85, 0.0, 360.0, 24)};
        case 1: return {{{-0.25, -0.55}, {0.08, -0.85}, {-0.05, 0.85}}};
        case 2: {
            Stroke s = arc(0.0, -0.4, 0.48, 0.45, 190.0, 380.0, 12);
            s.push_back({-0.5, 0.85});
            s.push_back({0.58, 0.85});
            return {s};
        }
        case 3: {
            Stroke upper = arc(0.0, -0.43, 0.45, 0.42, -160.0, 90.0, 14);
            Stroke lower = arc(0.0, 0.42, 0.5, 0.43, -90.0, 160.0, 14);
            return {upper, lower};
        }
        case 4: return {{{0.2, -0.85}, {-0.55, 0.3}, {0.62, 0.3}}, {{0.32, -0.35}, {0.32, 0.88}}};
        default: break;
    }
    throw ArgumentError("synthetic digits: class must be in [0, 4]");
}

double segment_distance(Point p, Point a, Point b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
    return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

Matrix render_digit(int digit, std::size_t image_dim, Rng& rng) {
    std::vector<Stroke> strokes = skeleton(digit);

    const double jitter = 0.07;
    const double angle = rng.uniform(-0.3, 0.3);
    const double sx = rng.uniform(0.75, 1.05);
    const double sy = rng.uniform(0.8, 1.05);
    const double shear = rng.uniform(-0.3, 0.3);
    const double tx = rng.uniform(-0.12, 0.12);
    const double ty = rng.uniform(-0.1, 0.1);
    const double pen = rng.uniform(0.09, 0.17);
    const double c = std::cos(angle), s = std::sin(angle);

    for (auto& stroke : strokes) {
        for (auto& p : stroke) {
            const double jx = p.x + jitter * rng.gaussian();
            const double jy = p.y + jitter * rng.gaussian();
            const double ax = sx * (jx + shear * jy);
            const double ay = sy * jy;
            p = {c * ax - s * ay + tx, s * ax + c * ay + ty};
        }
    }

    // The glyph box [-1, 1] maps onto the central 20/28 of the canvas.
    const auto n = static_cast<Index>(image_dim);
    const double half = 0.5 * static_cast<double>(image_dim);
    const double scale = (20.0 / 28.0) * half;
    const double soft = 0.08;
    Matrix img = Matrix::Zero(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index col = 0; col < n; ++col) {
            const Point p{(static_cast<double>(col) + 0.5 - half) / scale, (static_cast<double>(r) + 0.5 - half) / scale};
            double d = 1e9;
            for (const auto& stroke : strokes) {
                for (std::size_t k = 0; k + 1 < stroke.size(); ++k) d = std::min(d, segment_distance(p, stroke[k], stroke[k + 1]));
            }
            const double v = std::clamp(1.0 - (d - pen) / soft, 0.0, 1.0);
            img(r, col) = std::round(255.0 * v);
        }
    }
    return img;
}

LabeledImages synthetic_digits(const SyntheticDigitsConfig& cfg) {
    if (cfg.classes == 0 || cfg.classes > kSyntheticDigitClasses) {
        throw ArgumentError("synthetic digits support 1 to " + std::to_string(kSyntheticDigitClasses) + " classes");
    }
    if (cfg.image_dim < 8) throw ArgumentError("synthetic digits need images of at least 8x8");
    LabeledImages out;
    out.rows = out.cols = cfg.image_dim;
    Rng rng = Rng::for_stream(cfg.seed, 0, Stream::Data);
    for (std::size_t c = 0; c < cfg.classes; ++c) {
        for (std::size_t k = 0; k < cfg.per_class; ++k) {
            out.images.push_back(render_digit(static_cast<int>(c), cfg.image_dim, rng));
            out.labels.push_back(static_cast<int>(c));
        }
    }
    return out;
}

}  // namespace l1tucker::harness
