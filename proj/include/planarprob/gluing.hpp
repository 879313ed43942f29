#pragma once

#include <map>
#include <utility>
#include <vector>

#include "planarprob/tl_diagram.hpp"

namespace planarprob {

// A multi-disk string configuration: input disks with cyclically ordered
// marked points, a matching of marked points by strings, and an optional
// open output boundary. Every tangle operation in this project is resolved
// through such a configuration.
//
// Points are arbitrary integer ids. A point is either an endpoint of exactly
// one string or listed in open_points (an output point); disk points carry in
// addition the internal arc of the disk's content. Output points may be disk
// points (dangling strands routed straight to the boundary) or free points
// connected to the rest by strings.
struct GluingConfig {
    struct Disk {
        int id;
        std::vector<int> points;  // clockwise, first point first
    };
    std::vector<Disk> disks;
    std::vector<std::pair<int, int>> strings;
    std::vector<int> open_points;  // clockwise, first point first
    int free_loops = 0;            // closed strings touching no marked point
};

struct GluingResult {
    // Matching on output positions (0-based indices into open_points).
    std::vector<std::pair<int, int>> open_matching;
    long loops = 0;
};

// Substitutes each disk's diagram, follows strands through the union of
// internal arcs and strings, counts the closed cycles, and reads off the
// matching induced on the output boundary. Pure function of its inputs.
GluingResult resolve_gluing(const GluingConfig& config,
                            const std::map<int, TLDiagram>& disk_contents);

}  // namespace planarprob
