#pragma once

#include <limits>
#include <vector>

namespace bcwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Half-open interval on the half-line. Stored as (a,b); the left endpoint is
/// closed only when it has been clipped at zero, so [0,b) is the single closed
/// variant. Since all downstream quantities are measures of L2 classes, the
/// endpoint type never enters a computation; it is kept for faithful printing.
struct Interval {
    double a = 0.0;
    double b = 0.0;
    bool closed_left = false;

    double length() const { return b - a; }
};

/// Finite union of disjoint non-degenerate intervals, ordered left to right
/// with positive gaps between consecutive components. The carrier of the
/// subspaces L2(E) and of the dilation calculus.
class ElementarySet {
public:
    ElementarySet() = default;

    /// Builds from raw intervals; sorts, drops degenerate pieces and merges
    /// touching/overlapping ones so the class invariant holds for any input.
    explicit ElementarySet(std::vector<Interval> parts);

    static ElementarySet from_pairs(const std::vector<std::pair<double, double>>& pairs);

    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    /// Lebesgue measure of E ∩ (0,L).
    double measure_upto(double L) const;

    /// dist(x, E); +inf for the empty set.
    double distance(double x) const;

private:
    std::vector<Interval> parts_;
};

/// Marker for the subspace L2(E); E of measure zero stands for {0}.
struct SubspaceDescriptor {
    ElementarySet set;
};

/// Metric r-neighborhood E^r = {x >= 0 | dist(x,E) < r}. Components that
/// overlap after dilation are merged; a component reaching past 0 is clipped
/// to [0, b+r). `weld` merges components whose post-dilation gap is <= weld.
ElementarySet neighborhood(const ElementarySet& E, double r, double weld = 0.0);

/// The wave isotony on subspaces: I^0 = id, I^T L2(E) = L2(E^T).
SubspaceDescriptor isotony_apply(const SubspaceDescriptor& S, double T);

/// Lebesgue measure of (E △ F) ∩ (0,L), exact in the endpoints.
double sym_diff_measure(const ElementarySet& E, const ElementarySet& F, double L);

/// Convergence criterion for L2(E_n) -> L2(E): for every window length L the
/// tail of m((E_n △ E) ∩ (0,L)) must fall below tol. "Tail" is the last
/// quarter of the sequence (at least one element).
bool converges(const std::vector<ElementarySet>& seq, const ElementarySet& E,
               const std::vector<double>& L_list, double tol);

} // namespace bcwave
