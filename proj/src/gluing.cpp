#include "planarprob/gluing.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace planarprob {

namespace {

struct PointInfo {
    int arc = -1;     // partner through the disk content, -1 if not a disk point
    int str = -1;     // partner through a string, -1 if none
    bool open = false;
    int open_pos = -1;
};

}  // namespace

GluingResult resolve_gluing(const GluingConfig& config,
                            const std::map<int, TLDiagram>& disk_contents) {
    std::unordered_map<int, PointInfo> info;
    auto touch = [&info](int p) -> PointInfo& { return info[p]; };

    for (const auto& disk : config.disks) {
        auto it = disk_contents.find(disk.id);
        if (it == disk_contents.end())
            throw ValidationError("resolve_gluing: no content for disk " + std::to_string(disk.id));
        const TLDiagram& d = it->second;
        if (d.points() != static_cast<int>(disk.points.size()))
            throw ValidationError("resolve_gluing: disk " + std::to_string(disk.id) + " has " +
                                  std::to_string(disk.points.size()) + " points but content has " +
                                  std::to_string(d.points()));
        for (int i = 0; i < d.points(); ++i) {
            PointInfo& pi = touch(disk.points[i]);
            if (pi.arc != -1)
                throw ValidationError("resolve_gluing: point " + std::to_string(disk.points[i]) +
                                      " on two disks");
            pi.arc = disk.points[d.partner(i)];
        }
    }
    for (const auto& [a, b] : config.strings) {
        if (a == b) throw ValidationError("resolve_gluing: string from a point to itself");
        PointInfo& pa = touch(a);
        PointInfo& pb = touch(b);
        if (pa.str != -1 || pb.str != -1)
            throw ValidationError("resolve_gluing: point on two strings");
        pa.str = b;
        pb.str = a;
    }
    for (int pos = 0; pos < static_cast<int>(config.open_points.size()); ++pos) {
        PointInfo& pi = touch(config.open_points[pos]);
        if (pi.open) throw ValidationError("resolve_gluing: repeated open point");
        pi.open = true;
        pi.open_pos = pos;
    }

    // Each point must have degree 1 or 2; the degree-1 points are exactly the
    // open ones (a strand ends only at the output boundary).
    for (auto& [p, pi] : info) {
        const int degree = (pi.arc != -1 ? 1 : 0) + (pi.str != -1 ? 1 : 0);
        if (degree == 0 && !pi.open)
            throw ValidationError("resolve_gluing: isolated point " + std::to_string(p));
        if (degree == 0)
            throw ValidationError("resolve_gluing: open point " + std::to_string(p) +
                                  " attached to nothing");
        if (degree == 1 && !pi.open)
            throw ValidationError("resolve_gluing: dangling endpoint at point " +
                                  std::to_string(p));
        if (degree == 2 && pi.open)
            throw ValidationError("resolve_gluing: open point " + std::to_string(p) +
                                  " has both an arc and a string");
    }

    GluingResult result;
    result.loops = config.free_loops;
    std::unordered_map<int, bool> visited;
    visited.reserve(info.size());

    // Walk open strands first: from each unvisited open point, alternate
    // arc/string moves until the strand ends at another open point.
    for (int pos = 0; pos < static_cast<int>(config.open_points.size()); ++pos) {
        const int start = config.open_points[pos];
        if (visited[start]) continue;
        visited[start] = true;
        int cur = start;
        // An open point's single connection starts the walk.
        bool via_arc = info[cur].arc != -1;
        while (true) {
            const PointInfo& pi = info[cur];
            const int next = via_arc ? pi.arc : pi.str;
            visited[next] = true;
            const PointInfo& ni = info[next];
            if (ni.open) {
                result.open_matching.emplace_back(pos, ni.open_pos);
                break;
            }
            cur = next;
            via_arc = !via_arc;  // arcs and strings alternate along a strand
        }
    }

    // Remaining unvisited points lie on closed cycles.
    for (const auto& [p, pi] : info) {
        if (visited[p]) continue;
        int cur = p;
        bool via_arc = true;  // closed cycles alternate; starting side is arbitrary
        while (!visited[cur]) {
            visited[cur] = true;
            const PointInfo& ci = info[cur];
            cur = via_arc ? ci.arc : ci.str;
            via_arc = !via_arc;
        }
        ++result.loops;
    }

    std::sort(result.open_matching.begin(), result.open_matching.end());
    return result;
}

}  // namespace planarprob
