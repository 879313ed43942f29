#include "planarprob/tl_element.hpp"

#include <sstream>

namespace planarprob {

TLElement TLElement::cup() {
    return TLElement(TLDiagram({1, 0}));
}

TLElement TLElement::cup_power(int p) {
    if (p < 0) throw ValidationError("cup_power: negative power");
    std::vector<int> match(2 * p);
    for (int i = 0; i < p; ++i) {
        match[2 * i] = 2 * i + 1;
        match[2 * i + 1] = 2 * i;
    }
    return TLElement(TLDiagram(match));
}

TLElement TLElement::nested_cup() {
    return TLElement(TLDiagram({3, 2, 1, 0}));
}

TLElement TLElement::rainbow(int k) {
    std::vector<int> match(2 * k);
    for (int i = 0; i < 2 * k; ++i) match[i] = 2 * k - 1 - i;
    return TLElement(TLDiagram(match));
}

TLElement TLElement::parse_spec(const std::string& spec) {
    if (spec.empty()) throw ValidationError("TLElement::parse_spec: empty spec");
    if (spec == "1" || spec == "unit") return unit();
    if (spec == "cup") return cup();
    if (spec == "ncup") return nested_cup();
    if (spec.rfind("cup^", 0) == 0) {
        try {
            return cup_power(std::stoi(spec.substr(4)));
        } catch (const std::invalid_argument&) {
            throw ValidationError("TLElement::parse_spec: bad power in '" + spec + "'");
        }
    }
    if (spec.rfind("id_", 0) == 0) {
        try {
            return rainbow(std::stoi(spec.substr(3)));
        } catch (const std::invalid_argument&) {
            throw ValidationError("TLElement::parse_spec: bad size in '" + spec + "'");
        }
    }
    return TLElement(TLDiagram::decode(spec));
}

std::set<int> TLElement::grades() const {
    std::set<int> g;
    for (const auto& [d, c] : terms_) g.insert(d.size());
    return g;
}

int TLElement::grade() const {
    auto g = grades();
    if (g.empty()) return 0;
    if (g.size() > 1) throw ValidationError("TLElement::grade: mixed grades");
    return *g.begin();
}

void TLElement::add_term(const TLDiagram& d, const DeltaPoly& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(d);
    if (it == terms_.end()) {
        terms_[d] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TLElement& TLElement::operator+=(const TLElement& o) {
    for (const auto& [d, c] : o.terms_) add_term(d, c);
    return *this;
}

TLElement& TLElement::operator-=(const TLElement& o) {
    for (const auto& [d, c] : o.terms_) add_term(d, -c);
    return *this;
}

TLElement& TLElement::operator*=(const DeltaPoly& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [d, c] : terms_) c *= s;
    return *this;
}

std::string TLElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [d, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*" << d.encode();
    }
    return os.str();
}

}  // namespace planarprob
