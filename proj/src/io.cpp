#include "diskrig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace diskrig {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

using nlohmann::json;

double require_number(const json& v, const char* what) {
    if (!v.is_number()) {
        throw ParseError(msg(what, " must be a number"));
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ParseError(msg(what, " is not finite"));
    }
    return x;
}

}  // namespace

PackingFile parse_packing(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(msg("invalid JSON: ", e.what()));
    }
    if (!doc.is_object()) throw ParseError("top level must be an object");
    if (!doc.contains("radii") || !doc["radii"].is_array()) {
        throw ParseError("missing \"radii\" array");
    }
    if (!doc.contains("centers") || !doc["centers"].is_array()) {
        throw ParseError("missing \"centers\" array");
    }

    PackingFile out;
    for (const auto& v : doc["radii"]) {
        out.packing.radii.push_back(require_number(v, "radius"));
    }
    for (const auto& c : doc["centers"]) {
        if (!c.is_array() || c.size() != 2) {
            throw ParseError("each center must be an [x, y] pair");
        }
        out.packing.centers.emplace_back(require_number(c[0], "center x"),
                                         require_number(c[1], "center y"));
    }
    if (out.packing.centers.size() != out.packing.radii.size()) {
        throw ParseError(msg("radii count ", out.packing.radii.size(),
                             " != centers count ", out.packing.centers.size()));
    }

    if (doc.contains("boundary")) {
        const auto& b = doc["boundary"];
        if (!b.is_array() || b.size() != 3) {
            throw ParseError("\"boundary\" must be an array of 3 disk indices");
        }
        std::array<int, 3> tri{};
        for (int k = 0; k < 3; ++k) {
            if (!b[static_cast<size_t>(k)].is_number_integer()) {
                throw ParseError("boundary indices must be integers");
            }
            tri[static_cast<size_t>(k)] = b[static_cast<size_t>(k)].get<int>();
            if (tri[static_cast<size_t>(k)] < 0 ||
                tri[static_cast<size_t>(k)] >= out.packing.size()) {
                throw ParseError(msg("boundary index ", tri[static_cast<size_t>(k)],
                                     " out of range for n=", out.packing.size()));
            }
        }
        if (tri[0] == tri[1] || tri[0] == tri[2] || tri[1] == tri[2]) {
            throw ParseError("boundary indices must be distinct");
        }
        out.boundary = tri;
    }
    return out;
}

PackingFile load_packing(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(msg("cannot open ", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_packing(buf.str());
}

// Hand-rolled writer: nlohmann's serializer uses shortest-representation
// formatting, which is fine for round-trips but makes byte-level output
// depend on the library version.  17 significant digits, fixed layout.
std::string packing_to_json(const DiskPacking& packing,
                            const std::optional<std::array<int, 3>>& boundary) {
    std::ostringstream out;
    out << "{\n  \"radii\": [";
    for (int i = 0; i < packing.size(); ++i) {
        out << (i ? ", " : "") << format_double(packing.radii[static_cast<size_t>(i)]);
    }
    out << "],\n  \"centers\": [";
    for (int i = 0; i < packing.size(); ++i) {
        const Vec2& c = packing.centers[static_cast<size_t>(i)];
        out << (i ? ", " : "") << '[' << format_double(c.x()) << ", " << format_double(c.y())
            << ']';
    }
    out << ']';
    if (boundary) {
        out << ",\n  \"boundary\": [" << (*boundary)[0] << ", " << (*boundary)[1] << ", "
            << (*boundary)[2] << ']';
    }
    out << "\n}\n";
    return out.str();
}

void save_packing(const std::string& path, const DiskPacking& packing,
                  const std::optional<std::array<int, 3>>& boundary) {
    std::ofstream out(path);
    if (!out) throw Error(msg("cannot write ", path));
    out << packing_to_json(packing, boundary);
}

}  // namespace diskrig
