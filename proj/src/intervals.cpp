#include "bcwave/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace bcwave {

namespace {

std::vector<Interval> normalize(std::vector<Interval> parts, double weld) {
    std::vector<Interval> out;
    std::erase_if(parts, [](const Interval& iv) { return !(iv.a < iv.b); });
    std::sort(parts.begin(), parts.end(),
              [](const Interval& l, const Interval& r) { return l.a < r.a; });
    for (Interval iv : parts) {
        if (iv.a < 0.0) iv.a = 0.0;
        iv.closed_left = (iv.a == 0.0);
        if (!(iv.a < iv.b)) continue;
        if (!out.empty() && iv.a - out.back().b <= weld) {
            out.back().b = std::max(out.back().b, iv.b);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

} // namespace

ElementarySet::ElementarySet(std::vector<Interval> parts)
    : parts_(normalize(std::move(parts), 0.0)) {}

ElementarySet ElementarySet::from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Interval> parts;
    parts.reserve(pairs.size());
    for (const auto& [a, b] : pairs) parts.push_back({a, b, a == 0.0});
    return ElementarySet(std::move(parts));
}

double ElementarySet::measure_upto(double L) const {
    double m = 0.0;
    for (const Interval& iv : parts_) {
        const double lo = std::max(iv.a, 0.0);
        const double hi = std::min(iv.b, L);
        if (hi > lo) m += hi - lo;
    }
    return m;
}

double ElementarySet::distance(double x) const {
    double d = kInf;
    for (const Interval& iv : parts_) {
        if (x >= iv.a && x < iv.b) return 0.0;
        d = std::min(d, std::min(std::abs(x - iv.a), std::abs(x - iv.b)));
    }
    return d;
}

ElementarySet neighborhood(const ElementarySet& E, double r, double weld) {
    std::vector<Interval> dilated;
    dilated.reserve(E.size());
    for (const Interval& iv : E.intervals()) {
        // (a-r, b+r), clipped to [0, b+r) when a < r; inf saturates.
        dilated.push_back({iv.a - r, std::isinf(iv.b) ? kInf : iv.b + r, false});
    }
    ElementarySet out(std::move(dilated));
    if (weld > 0.0) {
        std::vector<Interval> rewelded = out.intervals();
        // normalize again with the configured weld tolerance
        std::vector<Interval> merged;
        for (const Interval& iv : rewelded) {
            if (!merged.empty() && iv.a - merged.back().b <= weld)
                merged.back().b = std::max(merged.back().b, iv.b);
            else
                merged.push_back(iv);
        }
        return ElementarySet(std::move(merged));
    }
    return out;
}

SubspaceDescriptor isotony_apply(const SubspaceDescriptor& S, double T) {
    if (T == 0.0) return S;
    return {neighborhood(S.set, T)};
}

double sym_diff_measure(const ElementarySet& E, const ElementarySet& F, double L) {
    // m(E△F ∩ (0,L)) = m(E∩) + m(F∩) - 2 m(E∩F∩), all exact in endpoints.
    const auto& a = E.intervals();
    const auto& b = F.intervals();
    double inter = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max({a[i].a, b[j].a, 0.0});
        const double hi = std::min({a[i].b, b[j].b, L});
        if (hi > lo) inter += hi - lo;
        if (a[i].b < b[j].b)
            ++i;
        else
            ++j;
    }
    return E.measure_upto(L) + F.measure_upto(L) - 2.0 * inter;
}

bool converges(const std::vector<ElementarySet>& seq, const ElementarySet& E,
               const std::vector<double>& L_list, double tol) {
    if (seq.empty()) return false;
    const std::size_t tail = std::max<std::size_t>(1, seq.size() / 4);
    for (double L : L_list) {
        for (std::size_t n = seq.size() - tail; n < seq.size(); ++n) {
            if (sym_diff_measure(seq[n], E, L) >= tol) return false;
        }
    }
    return true;
}

} // namespace bcwave
