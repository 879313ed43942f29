#include "planarprob/series.hpp"

#include <cmath>
#include <sstream>

namespace planarprob {

double NPoly::eval(double n) const {
    double acc = 0.0;
    for (const auto& [e, c] : coeffs_) acc += c.to_double() * std::pow(n, e);
    return acc;
}

std::string NPoly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (e != 0) os << "*N^" << e;
    }
    return os.str();
}

std::vector<MultiIndex> multi_indices_upto(const MultiIndex& orders) {
    std::vector<MultiIndex> out;
    MultiIndex m(orders.size(), 0);
    while (true) {
        out.push_back(m);
        int pos = static_cast<int>(m.size()) - 1;
        while (pos >= 0 && m[pos] == orders[pos]) {
            m[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++m[pos];
    }
    return out;
}

}  // namespace planarprob
