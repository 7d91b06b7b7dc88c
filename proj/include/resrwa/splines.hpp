#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace resrwa {

/// Knot locations for a restricted cubic spline. `k == 1` means the variable
/// enters linearly and `positions` is empty.
struct KnotSet {
    int k = 1;
    std::vector<double> positions;

    bool linear() const { return k == 1; }
};

/// Label of one basis column: index 0 is the raw variable, j >= 1 is the
/// nonlinear term S_j.
struct BasisLabel {
    int index = 0;

    bool nonlinear() const { return index > 0; }
    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

struct SplineBasis {
    Eigen::MatrixXd columns;  // n x (k-1), or n x 1 when linear
    std::vector<BasisLabel> labels;
};

/// Quantile levels used to place k knots (k in {3, 4, 5}).
std::span<const double> knot_quantile_levels(int k);

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n-1) q). `sorted` must be ascending.
double empirical_quantile(std::span<const double> sorted, double q);

/// Knots at the tabulated quantile levels of `x`. Throws UnsupportedKnotCount
/// for k outside {3, 4, 5} and DegenerateVariable when the data cannot
/// support k distinct knots.
KnotSet compute_knots(std::span<const double> x, int k);

/// Restricted cubic spline basis without normalisation. Column 0 is x;
/// column j (1 <= j <= k-2) is
///   (x-t_j)+^3 - (x-t_{k-1})+^3 (t_k-t_j)/(t_k-t_{k-1})
///              + (x-t_k)+^3 (t_{k-1}-t_j)/(t_k-t_{k-1}).
/// The notation in the literature sums l = 2..k but defines only k-2
/// nonlinear terms; k-2 is what this produces.
SplineBasis spline_basis(std::span<const double> x, const KnotSet& knots);

/// Value of nonlinear term j (1-based) at a single point.
double spline_term(double x, const KnotSet& knots, int j);

}  // namespace resrwa
