#include "planarprob/tangle_ops.hpp"

#include <string>

namespace planarprob {

namespace {

// Builds the TL diagram induced on the output boundary of a resolved gluing.
TLDiagram output_diagram(const GluingResult& res, int open_count) {
    std::vector<int> match(open_count, -1);
    for (const auto& [a, b] : res.open_matching) {
        match[a] = b;
        match[b] = a;
    }
    return TLDiagram(match);
}

// Applies the two-disk join tangle (last k of A to first k of B) to a single
// pair of diagrams and accumulates the result.
void join_diagrams(int k, const TLDiagram& da, const DeltaPoly& ca, const TLDiagram& db,
                   const DeltaPoly& cb, TLElement& out) {
    const int na = da.points(), nb = db.points();
    if (da.size() < k || db.size() < k)
        throw ValidationError("join: grade below k=" + std::to_string(k));
    GluingConfig cfg;
    GluingConfig::Disk A{0, {}}, B{1, {}};
    for (int i = 0; i < na; ++i) A.points.push_back(i);
    for (int i = 0; i < nb; ++i) B.points.push_back(na + i);
    cfg.disks = {A, B};
    for (int j = 0; j < k; ++j) cfg.strings.emplace_back(na - 1 - j, na + j);
    for (int i = 0; i < na - k; ++i) cfg.open_points.push_back(i);
    for (int i = k; i < nb; ++i) cfg.open_points.push_back(na + i);
    const auto res = resolve_gluing(cfg, {{0, da}, {1, db}});
    DeltaPoly w = ca * cb;
    w *= DeltaPoly::delta_power(static_cast<int>(res.loops));
    out.add_term(output_diagram(res, static_cast<int>(cfg.open_points.size())), w);
}

}  // namespace

TLElement wedge(int k, const TLElement& a, const TLElement& b) {
    if (k < 0) throw ValidationError("wedge: negative k");
    TLElement out;
    for (const auto& [da, ca] : a.terms())
        for (const auto& [db, cb] : b.terms()) join_diagrams(k, da, ca, db, cb, out);
    return out;
}

TLElement eps(int k, const TLElement& x) {
    if (k < 0) throw ValidationError("eps: negative k");
    TLElement out;
    for (const auto& [d, c] : x.terms()) {
        const int n = d.points();
        if (d.size() < k) throw ValidationError("eps: grade below k=" + std::to_string(k));
        GluingConfig cfg;
        GluingConfig::Disk X{0, {}};
        for (int i = 0; i < n; ++i) X.points.push_back(i);
        cfg.disks = {X};
        for (int j = 0; j < k; ++j) cfg.strings.emplace_back(j, n - 1 - j);
        for (int i = k; i < n - k; ++i) cfg.open_points.push_back(i);
        const auto res = resolve_gluing(cfg, {{0, d}});
        DeltaPoly w = c * DeltaPoly::delta_power(static_cast<int>(res.loops) - k);
        out.add_term(output_diagram(res, static_cast<int>(cfg.open_points.size())), w);
    }
    return out;
}

TraceValue trace_tl(const TLElement& x, int max_grade) {
    TraceValue total;
    for (const auto& [d, c] : x.terms()) {
        const int n = d.size();
        if (n > max_grade)
            throw ResourceError("trace_tl: grade " + std::to_string(n) + " exceeds limit " +
                                std::to_string(max_grade));
        for (const TLDiagram& t : enumerate_tl(n, max_grade)) {
            GluingConfig cfg;
            GluingConfig::Disk X{0, {}}, T{1, {}};
            for (int i = 0; i < 2 * n; ++i) X.points.push_back(i);
            for (int i = 0; i < 2 * n; ++i) T.points.push_back(2 * n + i);
            cfg.disks = {X, T};
            for (int i = 0; i < 2 * n; ++i) cfg.strings.emplace_back(i, 2 * n + i);
            const auto res = resolve_gluing(cfg, {{0, d}, {1, t}});
            total += c * DeltaPoly::delta_power(static_cast<int>(res.loops));
        }
    }
    return total;
}

std::vector<std::vector<DeltaPoly>> gram_matrix(int k, int max_grade) {
    const auto basis = enumerate_tl(k, max_grade);
    const int n = static_cast<int>(basis.size());
    std::vector<std::vector<DeltaPoly>> g(n, std::vector<DeltaPoly>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            GluingConfig cfg;
            GluingConfig::Disk S{0, {}}, T{1, {}};
            for (int p = 0; p < 2 * k; ++p) S.points.push_back(p);
            for (int p = 0; p < 2 * k; ++p) T.points.push_back(2 * k + p);
            cfg.disks = {S, T};
            // Mirror pairing: point p of S meets point 2k+1-p of the
            // reflected copy of T.
            for (int p = 0; p < 2 * k; ++p) cfg.strings.emplace_back(p, 2 * k + (2 * k - 1 - p));
            const auto res = resolve_gluing(cfg, {{0, basis[i]}, {1, reflect(basis[j])}});
            g[i][j] = DeltaPoly::delta_power(static_cast<int>(res.loops));
        }
    }
    return g;
}

TLElement adjoint(const TLElement& x) {
    TLElement out;
    for (const auto& [d, c] : x.terms()) out.add_term(reflect(d), c);
    return out;
}

TLElement boxtimes(int k, const TLElement& a, const TLElement& b) {
    if (k < 0) throw ValidationError("boxtimes: negative k");
    TLElement out;
    for (const auto& [da, ca] : a.terms())
        for (const auto& [db, cb] : b.terms()) join_diagrams(k, da, ca, db, cb, out);
    return out;
}

TraceValue trace_boxtimes(int k, const TLElement& x, int max_grade) {
    TraceValue total;
    for (const auto& [d, c] : x.terms()) {
        const int n = d.size();
        if (n < k) throw ValidationError("trace_boxtimes: grade below k=" + std::to_string(k));
        const int mid = n - k;
        if (mid > max_grade)
            throw ResourceError("trace_boxtimes: grade " + std::to_string(n) +
                                " exceeds limit " + std::to_string(max_grade + k));
        for (const TLDiagram& t : enumerate_tl(mid, max_grade)) {
            GluingConfig cfg;
            GluingConfig::Disk X{0, {}};
            for (int i = 0; i < 2 * n; ++i) X.points.push_back(i);
            cfg.disks = {X};
            // k strands loop around the outside...
            for (int j = 0; j < k; ++j) cfg.strings.emplace_back(j, 2 * n - 1 - j);
            // ...and the middle closes against the TL sum.
            GluingConfig::Disk T{1, {}};
            for (int i = 0; i < 2 * mid; ++i) T.points.push_back(2 * n + i);
            if (mid > 0) cfg.disks.push_back(T);
            for (int i = 0; i < 2 * mid; ++i) cfg.strings.emplace_back(k + i, 2 * n + i);
            std::map<int, TLDiagram> contents{{0, d}};
            if (mid > 0) contents.emplace(1, t);
            const auto res = resolve_gluing(cfg, contents);
            total += c * DeltaPoly::delta_power(static_cast<int>(res.loops));
        }
    }
    return total;
}

TLElement include_strand(const TLElement& x) {
    TLElement out;
    for (const auto& [d, c] : x.terms()) {
        const int n = d.points();
        GluingConfig cfg;
        GluingConfig::Disk X{0, {}};
        for (int i = 0; i < n; ++i) X.points.push_back(i);
        if (n > 0) cfg.disks = {X};
        cfg.strings.emplace_back(n, n + 1);
        cfg.open_points.push_back(n);
        for (int i = 0; i < n; ++i) cfg.open_points.push_back(i);
        cfg.open_points.push_back(n + 1);
        std::map<int, TLDiagram> contents;
        if (n > 0) contents.emplace(0, d);
        const auto res = resolve_gluing(cfg, contents);
        DeltaPoly w = c * DeltaPoly::delta_power(static_cast<int>(res.loops));
        out.add_term(output_diagram(res, static_cast<int>(cfg.open_points.size())), w);
    }
    return out;
}

}  // namespace planarprob
