#include "planarprob/maps_engine.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <string>
#include <thread>

namespace planarprob {

// ---------------------------------------------------------------------------
// Non-crossing partitions
// ---------------------------------------------------------------------------

namespace {

// Adding element `i` to the block with current maximum `m` crosses some other
// block iff that block reaches into (m, i) and also outside of it.
bool addable(const std::vector<std::vector<int>>& blocks, int target, int i) {
    const int m = blocks[target].back();
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
        if (b == target) continue;
        bool inside = false, outside = false;
        for (int e : blocks[b]) {
            if (e > m && e < i)
                inside = true;
            else
                outside = true;
        }
        if (inside && outside) return false;
    }
    return true;
}

void nc_rec(int i, int p, std::vector<std::vector<int>>& blocks, DeltaPoly& acc) {
    if (i == p) {
        acc.add_term(static_cast<int>(blocks.size()), Rational(1));
        return;
    }
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
        if (!addable(blocks, b, i)) continue;
        blocks[b].push_back(i);
        nc_rec(i + 1, p, blocks, acc);
        blocks[b].pop_back();
    }
    blocks.push_back({i});
    nc_rec(i + 1, p, blocks, acc);
    blocks.pop_back();
}

}  // namespace

DeltaPoly nc_partition_moments(int p, int max_p) {
    if (p < 1) throw ValidationError("nc_partition_moments: p must be positive");
    if (p > max_p)
        throw ResourceError("nc_partition_moments: p " + std::to_string(p) + " exceeds limit " +
                            std::to_string(max_p));
    DeltaPoly acc;
    std::vector<std::vector<int>> blocks;
    nc_rec(0, p, blocks, acc);
    return acc;
}

// ---------------------------------------------------------------------------
// Potential terms
// ---------------------------------------------------------------------------

PotentialTerm PotentialTerm::from_tl(TLElement body) {
    PotentialTerm t;
    if (!body.homogeneous()) throw ValidationError("PotentialTerm: inhomogeneous TL body");
    if (body.is_zero() || body.grade() < 1)
        throw ValidationError("PotentialTerm: TL body must have grade >= 1");
    t.tl = std::move(body);
    t.tl_mode = true;
    return t;
}

PotentialTerm PotentialTerm::from_poly(PolyElement body) {
    PotentialTerm t;
    if (!body.homogeneous()) throw ValidationError("PotentialTerm: inhomogeneous poly body");
    if (body.is_zero() || body.half_degree() < 1)
        throw ValidationError("PotentialTerm: poly body must have degree >= 2");
    t.poly = std::move(body);
    t.tl_mode = false;
    return t;
}

int PotentialTerm::half_size() const { return tl_mode ? tl.grade() : poly.half_degree(); }

// ---------------------------------------------------------------------------
// Gluing enumeration
// ---------------------------------------------------------------------------

namespace {

// Fixed combinatorial frame for one multi-index: the observable disk first,
// then m_j copies of each potential disk.
struct Frame {
    std::vector<int> disk_sizes;   // boundary points per disk (2 * half size)
    std::vector<int> disk_of;      // point -> disk
    std::vector<int> next_point;   // point -> clockwise next point on its disk
    std::vector<int> parity;       // position parity within the disk
    int total = 0;

    void build(const std::vector<int>& sizes) {
        disk_sizes = sizes;
        disk_of.clear();
        next_point.clear();
        parity.clear();
        total = 0;
        for (int d = 0; d < static_cast<int>(sizes.size()); ++d) {
            const int base = total;
            for (int i = 0; i < sizes[d]; ++i) {
                disk_of.push_back(d);
                next_point.push_back(base + (i + 1) % sizes[d]);
                parity.push_back(i % 2);
            }
            total += sizes[d];
        }
    }
};

// Letter decoration of every point for polynomial / oracle modes.
struct Letters {
    std::vector<int> index;
    std::vector<bool> starred;
    bool active = false;
};

// Scratch buffers reused across the leaves of one enumeration branch.
struct Scratch {
    std::vector<int> disk_root;
    std::vector<int> visited;
    int stamp = 0;
    std::vector<int> slot_parent;

    int find_disk(int x) {
        while (disk_root[x] != x) {
            disk_root[x] = disk_root[disk_root[x]];
            x = disk_root[x];
        }
        return x;
    }
    int find_slot(int x) {
        while (slot_parent[x] != x) {
            slot_parent[x] = slot_parent[slot_parent[x]];
            x = slot_parent[x];
        }
        return x;
    }
};

// True iff every disk is joined to disk 0 through strings of the matching.
bool connected_to_observable(const Frame& f, const std::vector<int>& match, Scratch& s) {
    const int nd = static_cast<int>(f.disk_sizes.size());
    s.disk_root.resize(nd);
    std::iota(s.disk_root.begin(), s.disk_root.end(), 0);
    for (int p = 0; p < f.total; ++p) {
        if (match[p] > p) {
            const int a = s.find_disk(f.disk_of[p]);
            const int b = s.find_disk(f.disk_of[match[p]]);
            if (a != b) s.disk_root[a] = b;
        }
    }
    const int root = s.find_disk(0);
    for (int d = 1; d < nd; ++d)
        if (s.find_disk(d) != root) return false;
    return true;
}

// Genus through the Euler formula on the rotation system. Only meaningful
// for connected gluings; faces are the orbits of (rotation o matching).
bool genus_zero(const Frame& f, const std::vector<int>& match, Scratch& s) {
    if (f.total == 0) return true;  // a bare disk on the sphere
    s.visited.assign(f.total, 0);
    int faces = 0;
    for (int p = 0; p < f.total; ++p) {
        if (s.visited[p]) continue;
        ++faces;
        int cur = p;
        while (!s.visited[cur]) {
            s.visited[cur] = 1;
            cur = f.next_point[match[cur]];
        }
    }
    const int V = static_cast<int>(f.disk_sizes.size());
    const int E = f.total / 2;
    return faces - E + V == 2;
}

// Closed cycles of (content arcs) union (matching strings).
int count_loops(const std::vector<int>& arc, const std::vector<int>& match, Scratch& s) {
    const int n = static_cast<int>(arc.size());
    s.visited.assign(n, 0);
    int loops = 0;
    for (int p = 0; p < n; ++p) {
        if (s.visited[p]) continue;
        ++loops;
        int cur = p;
        bool via_arc = true;
        while (!s.visited[cur]) {
            s.visited[cur] = 1;
            cur = via_arc ? arc[cur] : match[cur];
            via_arc = !via_arc;
        }
    }
    return loops;
}

// Index loops of the double-line picture: every point carries a row slot (2p)
// and a column slot (2p+1); trace circles chain col -> next row, a Wick
// pairing of an entry with a conjugate entry identifies row<->col both ways.
int count_slot_loops(const Frame& f, const std::vector<int>& match, Scratch& s,
                     int empty_disks) {
    s.slot_parent.resize(2 * f.total);
    std::iota(s.slot_parent.begin(), s.slot_parent.end(), 0);
    auto unite = [&s](int a, int b) {
        a = s.find_slot(a);
        b = s.find_slot(b);
        if (a != b) s.slot_parent[a] = b;
    };
    for (int p = 0; p < f.total; ++p) unite(2 * p + 1, 2 * f.next_point[p]);
    for (int p = 0; p < f.total; ++p) {
        if (match[p] > p) {
            unite(2 * p, 2 * match[p] + 1);
            unite(2 * p + 1, 2 * match[p]);
        }
    }
    int loops = empty_disks;  // a pointless circle still traces one index loop
    for (int x = 0; x < 2 * f.total; ++x)
        if (s.find_slot(x) == x) ++loops;
    return loops;
}

// Enumerates perfect matchings by always pairing the lowest unmatched point.
// Strings only join points of opposite boundary parity (the remnant of the
// two-coloring of tangle regions, and exactly the pairings with a nonzero
// Gaussian covariance); letter constraints prune further when active.
template <class Sink>
void enumerate_rec(const Frame& f, const Letters& letters, std::vector<int>& match, int from,
                   Sink&& sink) {
    int first = -1;
    for (int p = from; p < f.total; ++p)
        if (match[p] == -1) {
            first = p;
            break;
        }
    if (first == -1) {
        sink(match);
        return;
    }
    for (int p = first + 1; p < f.total; ++p) {
        if (match[p] != -1) continue;
        if (f.parity[p] == f.parity[first]) continue;
        if (letters.active && letters.index[p] != letters.index[first]) continue;
        match[first] = p;
        match[p] = first;
        enumerate_rec(f, letters, match, first + 1, sink);
        match[first] = -1;
        match[p] = -1;
    }
}

// Splits the choice of the first point's partner across threads; each task
// returns its own accumulator and results merge in branch order.
template <class Accum, class Leaf>
Accum enumerate_parallel(const Frame& f, const Letters& letters, int threads, Accum zero,
                         Leaf&& leaf) {
    if (f.total == 0) {
        Accum acc = zero;
        std::vector<int> match;
        Scratch scratch;
        leaf(match, scratch, acc);
        return acc;
    }
    std::vector<int> partners;
    for (int p = 1; p < f.total; ++p) {
        if (f.parity[p] == f.parity[0]) continue;
        if (letters.active && letters.index[p] != letters.index[0]) continue;
        partners.push_back(p);
    }
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min({nthreads, static_cast<int>(partners.size()), 32}));

    auto run_branches = [&f, &letters, &zero, &leaf](const std::vector<int>& mine) {
        Accum acc = zero;
        Scratch scratch;
        std::vector<int> match(f.total, -1);
        for (int partner : mine) {
            match.assign(f.total, -1);
            match[0] = partner;
            match[partner] = 0;
            enumerate_rec(f, letters, match, 1,
                          [&](const std::vector<int>& m) { leaf(m, scratch, acc); });
        }
        return acc;
    };

    Accum total = zero;
    if (nthreads <= 1 || partners.size() <= 1) {
        Accum acc = run_branches(partners);
        total.merge(acc);
        return total;
    }
    std::vector<std::vector<int>> chunks(nthreads);
    for (size_t i = 0; i < partners.size(); ++i)
        chunks[i % nthreads].push_back(partners[i]);
    std::vector<std::future<Accum>> futures;
    futures.reserve(chunks.size());
    for (const auto& chunk : chunks)
        futures.push_back(std::async(std::launch::async, run_branches, chunk));
    for (auto& fu : futures) {
        Accum acc = fu.get();
        total.merge(acc);
    }
    return total;
}

// Accumulators ---------------------------------------------------------------

struct LoopCounts {
    std::vector<long long> by_loops;  // index = number of closed loops
    void bump(int loops) {
        if (loops >= static_cast<int>(by_loops.size())) by_loops.resize(loops + 1, 0);
        ++by_loops[loops];
    }
    void merge(const LoopCounts& o) {
        if (o.by_loops.size() > by_loops.size()) by_loops.resize(o.by_loops.size(), 0);
        for (size_t i = 0; i < o.by_loops.size(); ++i) by_loops[i] += o.by_loops[i];
    }
};

struct CountAccum {
    long long count = 0;
    void merge(const CountAccum& o) { count += o.count; }
};

struct ExponentCounts {
    std::map<int, long long> by_exponent;
    void bump(int e) { ++by_exponent[e]; }
    void merge(const ExponentCounts& o) {
        for (const auto& [e, c] : o.by_exponent) by_exponent[e] += c;
    }
};

// Combo iteration ------------------------------------------------------------

// One slot per disk; iterates the cartesian product of term choices of each
// disk's content element, reporting the coefficient product for each choice.
template <class Body, class Visit>
void for_each_combo(const std::vector<const Body*>& bodies, Visit&& visit) {
    const int n = static_cast<int>(bodies.size());
    std::vector<typename Body::const_iterator> its(n), ends(n);
    for (int i = 0; i < n; ++i) {
        its[i] = bodies[i]->begin();
        ends[i] = bodies[i]->end();
        if (its[i] == ends[i]) return;  // zero element: empty product
    }
    while (true) {
        visit(its);
        int pos = n - 1;
        while (pos >= 0) {
            ++its[pos];
            if (its[pos] != ends[pos]) break;
            its[pos] = bodies[pos]->begin();
            --pos;
        }
        if (pos < 0) break;
    }
}

Rational index_prefactor(const MultiIndex& m) {
    Rational r(1);
    for (int mj : m) {
        if (mj % 2 == 1) r = -r;
        r /= Rational::factorial(mj);
    }
    return r;
}

int total_points_at(int q_points, const std::vector<int>& body_points, const MultiIndex& m) {
    int t = q_points;
    for (size_t j = 0; j < m.size(); ++j) t += m[j] * body_points[j];
    return t;
}

void check_budget(int q_points, const std::vector<int>& body_points, const MultiIndex& orders,
                  int max_half_edges) {
    const int worst = total_points_at(q_points, body_points, orders);
    if (worst > max_half_edges)
        throw ResourceError("maps engine: " + std::to_string(worst) +
                            " boundary points at the maximal multi-index exceed max_half_edges=" +
                            std::to_string(max_half_edges));
}

}  // namespace

// ---------------------------------------------------------------------------
// Symbolic (TL) mode
// ---------------------------------------------------------------------------

DeltaSeries gibbs_series_tl(const TLElement& Q, const std::vector<TLElement>& potential,
                            const MultiIndex& orders, const MapsOptions& opts) {
    if (orders.size() != potential.size())
        throw ValidationError("gibbs_series_tl: orders and potential sizes differ");
    if (!Q.homogeneous()) throw ValidationError("gibbs_series_tl: inhomogeneous observable");
    std::vector<PotentialTerm> terms;
    terms.reserve(potential.size());
    for (const auto& w : potential) terms.push_back(PotentialTerm::from_tl(w));

    const int qp = Q.is_zero() ? 0 : 2 * Q.grade();
    std::vector<int> body_points;
    for (const auto& t : terms) body_points.push_back(2 * t.half_size());
    check_budget(qp, body_points, orders, opts.max_half_edges);

    DeltaSeries out;
    out.orders = orders;
    if (Q.is_zero()) return out;

    for (const MultiIndex& m : multi_indices_upto(orders)) {
        // Disk contents for this index: Q, then m_j copies of body j.
        std::vector<const std::map<TLDiagram, DeltaPoly>*> bodies;
        bodies.push_back(&Q.terms());
        for (size_t j = 0; j < m.size(); ++j)
            for (int c = 0; c < m[j]; ++c) bodies.push_back(&terms[j].tl.terms());

        DeltaPoly coeff;
        for_each_combo(bodies, [&](const auto& picks) {
            std::vector<int> sizes;
            DeltaPoly combo_coeff(1);
            std::vector<int> arc;  // global content matching
            for (const auto& it : picks) {
                const TLDiagram& d = it->first;
                const int base = static_cast<int>(arc.size());
                sizes.push_back(d.points());
                for (int i = 0; i < d.points(); ++i) arc.push_back(base + d.partner(i));
                combo_coeff *= it->second;
            }
            Frame frame;
            frame.build(sizes);
            Letters letters;  // inactive
            LoopCounts zero;
            LoopCounts counts = enumerate_parallel(
                frame, letters, opts.threads, zero,
                [&frame, &arc](const std::vector<int>& match, Scratch& s, LoopCounts& acc) {
                    if (!connected_to_observable(frame, match, s)) return;
                    if (!genus_zero(frame, match, s)) return;
                    acc.bump(count_loops(arc, match, s));
                });
            DeltaPoly sum;
            for (size_t L = 0; L < counts.by_loops.size(); ++L)
                if (counts.by_loops[L] != 0)
                    sum.add_term(static_cast<int>(L), Rational(counts.by_loops[L]));
            coeff += combo_coeff * sum;
        });
        coeff *= index_prefactor(m);
        if (!coeff.is_zero()) out.coeffs[m] = coeff;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial mode
// ---------------------------------------------------------------------------

namespace {

struct PolyFrameData {
    Frame frame;
    Letters letters;
    Rational coeff;
};

// Builds frame and letter decoration for one combination of monomials.
PolyFrameData build_poly_frame(const std::vector<std::map<AltMonomial, Rational>::const_iterator>& picks) {
    PolyFrameData d;
    d.coeff = Rational(1);
    std::vector<int> sizes;
    for (const auto& it : picks) {
        const AltMonomial& w = it->first;
        sizes.push_back(w.degree());
        for (const auto& l : w.letters()) {
            d.letters.index.push_back(l.index);
            d.letters.starred.push_back(l.starred);
        }
        d.coeff *= it->second;
    }
    d.frame.build(sizes);
    d.letters.active = true;
    return d;
}

}  // namespace

RationalSeries gibbs_series_poly(const PolyElement& Q, const std::vector<PolyElement>& potential,
                                 const MultiIndex& orders, const MapsOptions& opts) {
    if (orders.size() != potential.size())
        throw ValidationError("gibbs_series_poly: orders and potential sizes differ");
    if (!Q.homogeneous()) throw ValidationError("gibbs_series_poly: inhomogeneous observable");
    std::vector<PotentialTerm> terms;
    for (const auto& w : potential) terms.push_back(PotentialTerm::from_poly(w));

    const int qp = 2 * Q.half_degree();
    std::vector<int> body_points;
    for (const auto& t : terms) body_points.push_back(2 * t.half_size());
    check_budget(qp, body_points, orders, opts.max_half_edges);

    RationalSeries out;
    out.orders = orders;
    if (Q.is_zero()) return out;

    for (const MultiIndex& m : multi_indices_upto(orders)) {
        std::vector<const std::map<AltMonomial, Rational>*> bodies;
        bodies.push_back(&Q.terms());
        for (size_t j = 0; j < m.size(); ++j)
            for (int c = 0; c < m[j]; ++c) bodies.push_back(&terms[j].poly.terms());

        Rational coeff(0);
        for_each_combo(bodies, [&](const auto& picks) {
            PolyFrameData d = build_poly_frame(picks);
            CountAccum zero;
            CountAccum counts = enumerate_parallel(
                d.frame, d.letters, opts.threads, zero,
                [&d](const std::vector<int>& match, Scratch& s, CountAccum& acc) {
                    if (!connected_to_observable(d.frame, match, s)) return;
                    if (!genus_zero(d.frame, match, s)) return;
                    ++acc.count;
                });
            coeff += d.coeff * Rational(counts.count);
        });
        coeff *= index_prefactor(m);
        if (!coeff.is_zero()) out.coeffs[m] = coeff;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-N Wick oracle
// ---------------------------------------------------------------------------

namespace {

// Raw (unnormalized) expectation series: with_observable selects between
// E[(1/N) Tr Q * prod] and the vacuum E[prod] that feeds the partition
// function. Exponent bookkeeping: index loops - pairs, plus |m| from the
// (-N beta)^m expansion factors, minus 1 for the observable normalization.
std::map<MultiIndex, NPoly> raw_wick_series(const PolyElement* Q,
                                            const std::vector<PotentialTerm>& terms,
                                            const MultiIndex& orders, const MapsOptions& opts) {
    std::map<MultiIndex, NPoly> out;
    for (const MultiIndex& m : multi_indices_upto(orders)) {
        std::vector<const std::map<AltMonomial, Rational>*> bodies;
        if (Q != nullptr) bodies.push_back(&Q->terms());
        for (size_t j = 0; j < m.size(); ++j)
            for (int c = 0; c < m[j]; ++c) bodies.push_back(&terms[j].poly.terms());

        const int msum = std::accumulate(m.begin(), m.end(), 0);
        const int shift = msum - (Q != nullptr ? 1 : 0);
        NPoly total;
        bool empty_product = bodies.empty();
        if (empty_product) {
            out[m] = NPoly(Rational(1));  // E[1] with no factors at all
            continue;
        }
        for_each_combo(bodies, [&](const auto& picks) {
            PolyFrameData d = build_poly_frame(picks);
            int empty_disks = 0;
            for (int sz : d.frame.disk_sizes)
                if (sz == 0) ++empty_disks;
            const int pairs = d.frame.total / 2;
            ExponentCounts zero;
            ExponentCounts counts = enumerate_parallel(
                d.frame, d.letters, opts.threads, zero,
                [&d, empty_disks, pairs, shift](const std::vector<int>& match, Scratch& s,
                                                ExponentCounts& acc) {
                    const int loops = count_slot_loops(d.frame, match, s, empty_disks);
                    acc.bump(loops - pairs + shift);
                });
            NPoly combo;
            for (const auto& [e, c] : counts.by_exponent)
                combo.add_term(e, Rational(c));
            total += combo * d.coeff;
        });
        total *= index_prefactor(m);
        out[m] = total;
    }
    return out;
}

}  // namespace

NSeries wick_oracle(const PolyElement& Q, const std::vector<PolyElement>& potential,
                    const MultiIndex& orders, const MapsOptions& opts) {
    if (orders.size() != potential.size())
        throw ValidationError("wick_oracle: orders and potential sizes differ");
    if (!Q.homogeneous()) throw ValidationError("wick_oracle: inhomogeneous observable");
    std::vector<PotentialTerm> terms;
    for (const auto& w : potential) terms.push_back(PotentialTerm::from_poly(w));

    std::vector<int> body_points;
    for (const auto& t : terms) body_points.push_back(2 * t.half_size());
    check_budget(2 * Q.half_degree(), body_points, orders, opts.max_half_edges);

    const auto numerator = raw_wick_series(&Q, terms, orders, opts);
    const auto denominator = raw_wick_series(nullptr, terms, orders, opts);

    // Divide the two jets: quotient_m = numer_m - sum over 0 < m' <= m of
    // denom_{m'} * quotient_{m - m'}; the vacuum term of the denominator is 1.
    NSeries out;
    out.orders = orders;
    const auto indices = multi_indices_upto(orders);
    for (const MultiIndex& m : indices) {
        NPoly q = numerator.at(m);
        for (const MultiIndex& mp : indices) {
            if (mp == MultiIndex(m.size(), 0)) continue;
            bool le = true;
            MultiIndex rest(m.size());
            for (size_t j = 0; j < m.size(); ++j) {
                if (mp[j] > m[j]) {
                    le = false;
                    break;
                }
                rest[j] = m[j] - mp[j];
            }
            if (!le) continue;
            q -= denominator.at(mp) * out.coeffs.at(rest);
        }
        out.coeffs[m] = q;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loop model series
// ---------------------------------------------------------------------------

DeltaSeries on_model_series(const TLElement& Q, int beta1_order, int beta2_order,
                            const MapsOptions& opts) {
    if (beta1_order < 0 || beta2_order < 0)
        throw ValidationError("on_model_series: negative order bound");
    const std::vector<TLElement> potential{TLElement::cup_power(2), TLElement::nested_cup()};
    return gibbs_series_tl(Q, potential, MultiIndex{beta1_order, beta2_order}, opts);
}

}  // namespace planarprob
