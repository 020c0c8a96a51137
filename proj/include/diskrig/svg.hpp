#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "diskrig/packing.hpp"

namespace diskrig::svg {

struct RenderOptions {
    double scale = 100.0;
    double margin = 0.5;
    bool draw_contacts = true;
    bool draw_centers = true;
    // Optional per-edge signs (+1 / -1 / 0) colour the contact segments.
    std::vector<int> edge_signs;
    // Optional flex vector (2n entries) drawn as arrows from the centers.
    Eigen::VectorXd flex_arrows;
    double arrow_scale = 1.0;
};

// Deterministic markup: for a fixed packing, graph, and options the returned
// string is byte-identical across runs. Disks are <circle>, contact segments
// <line>, center dots <rect>, arrows <path>.
std::string render_svg(const DiskPacking& packing, const ContactGraph& graph,
                       const RenderOptions& options = {});

}  // namespace diskrig::svg
