#include "diskrig/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "diskrig/errors.hpp"

namespace diskrig::svg {

namespace {

std::string px(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

}  // namespace

std::string render_svg(const DiskPacking& packing, const ContactGraph& graph,
                       const RenderOptions& options) {
    const int n = packing.size();
    if (graph.n != n) throw Error("graph does not match packing");
    if (!options.edge_signs.empty() &&
        static_cast<int>(options.edge_signs.size()) != graph.edge_count()) {
        throw Error("edge_signs length does not match edge count");
    }
    const bool arrows = options.flex_arrows.size() > 0;
    if (arrows && options.flex_arrows.size() != 2 * n) {
        throw Error("flex_arrows length must be twice the disk count");
    }

    double min_x = packing.centers[0].x() - packing.radii[0];
    double max_x = packing.centers[0].x() + packing.radii[0];
    double min_y = packing.centers[0].y() - packing.radii[0];
    double max_y = packing.centers[0].y() + packing.radii[0];
    for (int i = 1; i < n; ++i) {
        const Vec2& c = packing.centers[static_cast<size_t>(i)];
        const double r = packing.radii[static_cast<size_t>(i)];
        min_x = std::min(min_x, c.x() - r);
        max_x = std::max(max_x, c.x() + r);
        min_y = std::min(min_y, c.y() - r);
        max_y = std::max(max_y, c.y() + r);
    }
    min_x -= options.margin;
    max_x += options.margin;
    min_y -= options.margin;
    max_y += options.margin;

    const double width = (max_x - min_x) * options.scale;
    const double height = (max_y - min_y) * options.scale;
    const auto map_x = [&](double x) { return (x - min_x) * options.scale; };
    const auto map_y = [&](double y) { return (max_y - y) * options.scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\""
        << px(height) << "\" viewBox=\"0 0 " << px(width) << " " << px(height) << "\">\n";
    if (arrows) {
        out << "  <defs>\n"
            << "    <marker id=\"tip\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" "
               "refY=\"3\" orient=\"auto\">\n"
            << "      <path d=\"M 0 0 L 6 3 L 0 6 z\" fill=\"#b22\"/>\n"
            << "    </marker>\n"
            << "  </defs>\n";
    }
    out << "  <rect x=\"0\" y=\"0\" width=\"" << px(width) << "\" height=\"" << px(height)
        << "\" fill=\"#ffffff\"/>\n";

    for (int i = 0; i < n; ++i) {
        const Vec2& c = packing.centers[static_cast<size_t>(i)];
        out << "  <circle cx=\"" << px(map_x(c.x())) << "\" cy=\"" << px(map_y(c.y()))
            << "\" r=\"" << px(packing.radii[static_cast<size_t>(i)] * options.scale)
            << "\" fill=\"#e9eef5\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
    }

    if (options.draw_contacts) {
        for (int k = 0; k < graph.edge_count(); ++k) {
            const Edge& e = graph.edges[static_cast<size_t>(k)];
            const Vec2& a = packing.centers[static_cast<size_t>(e.i)];
            const Vec2& b = packing.centers[static_cast<size_t>(e.j)];
            const char* color = "#555555";
            if (!options.edge_signs.empty()) {
                const int sign = options.edge_signs[static_cast<size_t>(k)];
                if (sign > 0) color = "#c23b3b";
                if (sign < 0) color = "#3b62c2";
            }
            out << "  <line x1=\"" << px(map_x(a.x())) << "\" y1=\"" << px(map_y(a.y()))
                << "\" x2=\"" << px(map_x(b.x())) << "\" y2=\"" << px(map_y(b.y()))
                << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        }
    }

    if (options.draw_centers) {
        for (int i = 0; i < n; ++i) {
            const Vec2& c = packing.centers[static_cast<size_t>(i)];
            out << "  <rect x=\"" << px(map_x(c.x()) - 1.5) << "\" y=\"" << px(map_y(c.y()) - 1.5)
                << "\" width=\"3\" height=\"3\" fill=\"#222222\"/>\n";
        }
    }

    if (arrows) {
        for (int i = 0; i < n; ++i) {
            const Vec2& c = packing.centers[static_cast<size_t>(i)];
            const Vec2 tip = c + options.arrow_scale * Vec2(options.flex_arrows(2 * i),
                                                            options.flex_arrows(2 * i + 1));
            if ((tip - c).norm() * options.scale < 1e-6) continue;
            out << "  <path d=\"M " << px(map_x(c.x())) << " " << px(map_y(c.y())) << " L "
                << px(map_x(tip.x())) << " " << px(map_y(tip.y()))
                << "\" stroke=\"#b22222\" stroke-width=\"2\" fill=\"none\" "
                   "marker-end=\"url(#tip)\"/>\n";
        }
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace diskrig::svg
