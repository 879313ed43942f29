#include "planarprob/tl_diagram.hpp"

#include <algorithm>
#include <sstream>

namespace planarprob {

namespace {

void check_involution(const std::vector<int>& m) {
    const int n = static_cast<int>(m.size());
    if (n % 2 != 0) throw ValidationError("matching: odd number of points");
    for (int i = 0; i < n; ++i) {
        if (m[i] < 0 || m[i] >= n) throw ValidationError("matching: partner out of range");
        if (m[i] == i) throw ValidationError("matching: fixed point at " + std::to_string(i + 1));
        if (m[m[i]] != i) throw ValidationError("matching: not an involution");
    }
}

}  // namespace

TLDiagram::TLDiagram(std::vector<int> matching) : match_(std::move(matching)) {
    check_involution(match_);
    if (!is_noncrossing(match_)) throw ValidationError("TLDiagram: crossing matching");
}

std::vector<std::pair<int, int>> TLDiagram::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < points(); ++i)
        if (i < match_[i]) out.emplace_back(i + 1, match_[i] + 1);
    std::sort(out.begin(), out.end());
    return out;
}

std::string TLDiagram::encode() const {
    std::ostringstream os;
    os << size() << ":[";
    bool first = true;
    for (const auto& [a, b] : pairs()) {
        if (!first) os << ",";
        first = false;
        os << "(" << a << "," << b << ")";
    }
    os << "]";
    return os.str();
}

TLDiagram TLDiagram::decode(const std::string& text) {
    std::istringstream is(text);
    int k = 0;
    char c = 0;
    if (!(is >> k) || k < 0) throw ValidationError("TLDiagram::decode: bad size in '" + text + "'");
    if (!(is >> c) || c != ':') throw ValidationError("TLDiagram::decode: expected ':'");
    if (!(is >> c) || c != '[') throw ValidationError("TLDiagram::decode: expected '['");
    std::vector<int> match(2 * k, -1);
    is >> std::ws;
    if (is.peek() == ']') {
        is.get();
    } else {
        while (true) {
            int a = 0, b = 0;
            char o = 0, comma = 0, close = 0;
            if (!(is >> o >> a >> comma >> b >> close) || o != '(' || comma != ',' || close != ')')
                throw ValidationError("TLDiagram::decode: malformed pair");
            if (a < 1 || a > 2 * k || b < 1 || b > 2 * k)
                throw ValidationError("TLDiagram::decode: point out of range");
            if (match[a - 1] != -1 || match[b - 1] != -1)
                throw ValidationError("TLDiagram::decode: repeated point");
            match[a - 1] = b - 1;
            match[b - 1] = a - 1;
            if (!(is >> c)) throw ValidationError("TLDiagram::decode: truncated");
            if (c == ']') break;
            if (c != ',') throw ValidationError("TLDiagram::decode: expected ','");
        }
    }
    for (int v : match)
        if (v == -1) throw ValidationError("TLDiagram::decode: incomplete matching");
    return TLDiagram(match);
}

bool is_noncrossing(const std::vector<int>& matching) {
    check_involution(matching);
    const int n = static_cast<int>(matching.size());
    // Stack test: scan clockwise, openers push, closers must match the top.
    std::vector<int> stack;
    stack.reserve(n / 2);
    for (int i = 0; i < n; ++i) {
        if (matching[i] > i) {
            stack.push_back(i);
        } else {
            if (stack.empty() || stack.back() != matching[i]) return false;
            stack.pop_back();
        }
    }
    return stack.empty();
}

namespace {

// Backtracking enumeration over all non-crossing matchings of 0..n-1.
void backtrack(std::vector<int>& match, int n, std::vector<TLDiagram>& out) {
    int first = -1;
    for (int i = 0; i < n; ++i)
        if (match[i] == -1) {
            first = i;
            break;
        }
    if (first == -1) {
        out.emplace_back(match);
        return;
    }
    for (int p = first + 1; p < n; ++p) {
        if (match[p] != -1) continue;
        // The arc (first, p) must enclose an even number of unmatched points,
        // all of which then pair among themselves; crossing arcs are rejected
        // by the final TLDiagram construction, but pruning here keeps the
        // enumeration Catalan-sized.
        int inside = 0;
        bool blocked = false;
        for (int q = first + 1; q < p; ++q) {
            if (match[q] == -1) {
                ++inside;
            } else if (match[q] < first || match[q] > p) {
                blocked = true;
                break;
            }
        }
        if (blocked || inside % 2 != 0) continue;
        match[first] = p;
        match[p] = first;
        backtrack(match, n, out);
        match[first] = -1;
        match[p] = -1;
    }
}

}  // namespace

std::vector<TLDiagram> enumerate_tl(int k, int max_size) {
    if (k < 0) throw ValidationError("enumerate_tl: negative size");
    if (k > max_size)
        throw ResourceError("enumerate_tl: size " + std::to_string(k) + " exceeds limit " +
                            std::to_string(max_size));
    std::vector<TLDiagram> out;
    if (k == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> match(2 * k, -1);
    backtrack(match, 2 * k, out);
    std::sort(out.begin(), out.end(),
              [](const TLDiagram& a, const TLDiagram& b) { return a.pairs() < b.pairs(); });
    return out;
}

TLDiagram reflect(const TLDiagram& d) {
    const int n = d.points();
    std::vector<int> match(n);
    for (int i = 0; i < n; ++i) {
        int j = n - 1 - i;          // point i+1 -> 2k+1-(i+1), 0-based
        match[j] = n - 1 - d.partner(i);
    }
    return TLDiagram(match);
}

}  // namespace planarprob
