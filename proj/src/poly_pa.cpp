#include "planarprob/poly_pa.hpp"

#include <sstream>

namespace planarprob {

AltMonomial::AltMonomial(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (letters_.size() % 2 != 0)
        throw ValidationError("AltMonomial: odd degree");
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i].index < 1)
            throw ValidationError("AltMonomial: letter index must be >= 1");
        const bool want_star = (i % 2 == 1);
        if (letters_[i].starred != want_star)
            throw ValidationError("AltMonomial: alternation violated at position " +
                                  std::to_string(i + 1));
    }
}

std::string AltMonomial::str() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& l : letters_) {
        if (!first) os << " ";
        first = false;
        os << "X" << l.index;
        if (l.starred) os << "*";
    }
    return os.str();
}

AltMonomial AltMonomial::parse(const std::string& text) {
    std::istringstream is(text);
    std::vector<Letter> letters;
    std::string tok;
    while (is >> tok) {
        if (tok == "1" && letters.empty()) continue;
        if (tok.size() < 2 || (tok[0] != 'X' && tok[0] != 'x'))
            throw ValidationError("AltMonomial::parse: bad token '" + tok + "'");
        bool starred = false;
        std::string digits = tok.substr(1);
        if (!digits.empty() && digits.back() == '*') {
            starred = true;
            digits.pop_back();
        }
        if (digits.empty()) throw ValidationError("AltMonomial::parse: missing index in '" + tok + "'");
        int index = 0;
        for (char c : digits) {
            if (c < '0' || c > '9')
                throw ValidationError("AltMonomial::parse: bad index in '" + tok + "'");
            index = index * 10 + (c - '0');
        }
        letters.push_back({index, starred});
    }
    return AltMonomial(letters);
}

bool PolyElement::homogeneous() const {
    if (terms_.empty()) return true;
    const int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
        if (m.degree() != d) return false;
    return true;
}

int PolyElement::half_degree() const {
    if (!homogeneous()) throw ValidationError("PolyElement: mixed degrees");
    return terms_.empty() ? 0 : terms_.begin()->first.half_degree();
}

void PolyElement::add_term(const AltMonomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_[m] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PolyElement& PolyElement::operator+=(const PolyElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

PolyElement& PolyElement::operator-=(const PolyElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

PolyElement& PolyElement::operator*=(const Rational& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

std::string PolyElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (!c.is_one()) os << c.str() << "*";
        os << (m.degree() == 0 ? "1" : m.str());
    }
    return os.str();
}

PolyElement poly_mul(const PolyElement& a, const PolyElement& b) {
    PolyElement out;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            std::vector<AltMonomial::Letter> letters = ma.letters();
            letters.insert(letters.end(), mb.letters().begin(), mb.letters().end());
            out.add_term(AltMonomial(std::move(letters)), ca * cb);
        }
    }
    return out;
}

PolyElement embed_tl(int K, const TLElement& x) {
    if (K < 1) throw ValidationError("embed_tl: K must be positive");
    PolyElement out;
    for (const auto& [d, c] : x.terms()) {
        const Rational cK = c.eval_exact(Rational(K));
        if (cK.is_zero()) continue;
        const int n = d.points();
        // One label per strand; strands are indexed by their smaller endpoint.
        std::vector<int> strand_of(n);
        std::vector<int> strands;
        for (int i = 0; i < n; ++i) {
            if (i < d.partner(i)) {
                strand_of[i] = static_cast<int>(strands.size());
                strand_of[d.partner(i)] = strand_of[i];
                strands.push_back(i);
            }
        }
        std::vector<int> label(strands.size(), 1);
        while (true) {
            std::vector<AltMonomial::Letter> letters(n);
            for (int i = 0; i < n; ++i) letters[i] = {label[strand_of[i]], i % 2 == 1};
            out.add_term(AltMonomial(std::move(letters)), cK);
            // next assignment in odometer order
            int pos = static_cast<int>(label.size()) - 1;
            while (pos >= 0 && label[pos] == K) {
                label[pos] = 1;
                --pos;
            }
            if (pos < 0) break;
            ++label[pos];
        }
    }
    return out;
}

namespace {

long count_matchings(const std::vector<AltMonomial::Letter>& w, std::vector<int>& match) {
    int first = -1;
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i)
        if (match[i] == -1) {
            first = i;
            break;
        }
    if (first == -1) return 1;
    long total = 0;
    for (int p = first + 1; p < n; ++p) {
        if (match[p] != -1) continue;
        if (w[p].starred == w[first].starred) continue;
        if (w[p].index != w[first].index) continue;
        // non-crossing: everything strictly inside (first, p) must already be
        // matched inside, and the inside must close among itself
        bool ok = true;
        int inside = 0;
        for (int q = first + 1; q < p; ++q) {
            if (match[q] == -1) {
                ++inside;
            } else if (match[q] < first || match[q] > p) {
                ok = false;
                break;
            }
        }
        if (!ok || inside % 2 != 0) continue;
        match[first] = p;
        match[p] = first;
        total += count_matchings(w, match);
        match[first] = -1;
        match[p] = -1;
    }
    return total;
}

}  // namespace

Rational gaussian_trace_poly(const AltMonomial& w, int K) {
    if (K < 1) throw ValidationError("gaussian_trace_poly: K must be positive");
    for (const auto& l : w.letters())
        if (l.index > K)
            throw ValidationError("gaussian_trace_poly: letter X" + std::to_string(l.index) +
                                  " exceeds K=" + std::to_string(K));
    std::vector<int> match(w.degree(), -1);
    return Rational(count_matchings(w.letters(), match));
}

Rational gaussian_trace_poly(const PolyElement& x, int K) {
    Rational total(0);
    for (const auto& [m, c] : x.terms()) total += c * gaussian_trace_poly(m, K);
    return total;
}

namespace {

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ValidationError("bad rational '" + s + "'");
    }
}

std::vector<std::string> split_on_plus(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == '+') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

PolyElement parse_element_spec(const std::string& spec, int K) {
    const std::string s = trimmed(spec);
    if (s.empty()) throw ValidationError("parse_element_spec: empty spec");
    if (s == "1") return PolyElement::unit();
    if (s == "cup") return embed_tl(K, TLElement::cup());
    if (s == "ncup") return embed_tl(K, TLElement::nested_cup());
    if (s.rfind("cup^", 0) == 0) {
        int p = 0;
        try {
            p = std::stoi(s.substr(4));
        } catch (const std::exception&) {
            throw ValidationError("parse_element_spec: bad power in '" + s + "'");
        }
        return embed_tl(K, TLElement::cup_power(p));
    }
    PolyElement out;
    for (const std::string& raw : split_on_plus(s)) {
        std::string part = trimmed(raw);
        if (part.empty()) throw ValidationError("parse_element_spec: empty term in '" + s + "'");
        Rational coeff(1);
        const auto star_pos = part.find('*');
        // A leading "c*" coefficient: the '*' not belonging to a letter token.
        if (star_pos != std::string::npos && star_pos + 1 < part.size() &&
            (part[0] == '-' || (part[0] >= '0' && part[0] <= '9'))) {
            coeff = parse_rational(trimmed(part.substr(0, star_pos)));
            part = trimmed(part.substr(star_pos + 1));
        }
        const AltMonomial mono = AltMonomial::parse(part);
        for (const auto& l : mono.letters())
            if (l.index > K)
                throw ValidationError("parse_element_spec: letter X" + std::to_string(l.index) +
                                      " exceeds K=" + std::to_string(K));
        out.add_term(mono, coeff);
    }
    return out;
}

}  // namespace planarprob
