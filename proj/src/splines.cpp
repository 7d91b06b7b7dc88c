#include "resrwa/splines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "resrwa/error.hpp"

namespace resrwa {

namespace {

constexpr std::array<double, 3> kLevels3{0.1, 0.5, 0.9};
constexpr std::array<double, 4> kLevels4{0.05, 0.35, 0.65, 0.95};
constexpr std::array<double, 5> kLevels5{0.05, 0.275, 0.5, 0.725, 0.95};

inline double cube_plus(double u) { return u > 0.0 ? u * u * u : 0.0; }

}  // namespace

std::span<const double> knot_quantile_levels(int k) {
    switch (k) {
        case 3: return kLevels3;
        case 4: return kLevels4;
        case 5: return kLevels5;
        default:
            throw Error(ErrorKind::UnsupportedKnotCount,
                        "knot count " + std::to_string(k) + " (supported: 3, 4, 5)");
    }
}

double empirical_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

KnotSet compute_knots(std::span<const double> x, int k) {
    const auto levels = knot_quantile_levels(k);

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    int distinct = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) distinct += sorted[i] != sorted[i - 1];
    if (distinct < k) {
        throw Error(ErrorKind::DegenerateVariable,
                    std::to_string(distinct) + " distinct values cannot support " +
                        std::to_string(k) + " knots");
    }

    KnotSet knots{k, {}};
    knots.positions.reserve(levels.size());
    for (double q : levels) knots.positions.push_back(empirical_quantile(sorted, q));
    for (std::size_t i = 1; i < knots.positions.size(); ++i) {
        if (!(knots.positions[i] > knots.positions[i - 1])) {
            throw Error(ErrorKind::DegenerateVariable,
                        "knots " + std::to_string(i) + " and " + std::to_string(i + 1) +
                            " coincide at " + std::to_string(knots.positions[i]));
        }
    }
    return knots;
}

double spline_term(double x, const KnotSet& knots, int j) {
    const auto& t = knots.positions;
    const int k = knots.k;
    const double tj = t[j - 1];
    const double tk1 = t[k - 2];
    const double tk = t[k - 1];
    const double span = tk - tk1;
    return cube_plus(x - tj) - cube_plus(x - tk1) * (tk - tj) / span +
           cube_plus(x - tk) * (tk1 - tj) / span;
}

SplineBasis spline_basis(std::span<const double> x, const KnotSet& knots) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const int width = knots.linear() ? 1 : knots.k - 1;

    SplineBasis basis;
    basis.columns.resize(n, width);
    basis.labels.reserve(width);
    for (int c = 0; c < width; ++c) basis.labels.push_back(BasisLabel{c});

    for (Eigen::Index i = 0; i < n; ++i) {
        basis.columns(i, 0) = x[i];
        for (int j = 1; j < width; ++j) basis.columns(i, j) = spline_term(x[i], knots, j);
    }
    return basis;
}

}  // namespace resrwa
