#pragma once

#include <vector>

#include <Eigen/Dense>

#include "resrwa/design.hpp"
#include "resrwa/parallel.hpp"

namespace resrwa {

/// Where one residualized column came from.
struct InteractionProvenance {
    TermId term;
    Eigen::Index column = 0;    // column in the design
    Eigen::Index parent_a = 0;  // design column of the factor from term.first
    Eigen::Index parent_b = 0;  // design column of the factor from term.second
    bool degenerate = false;    // input or residual was (numerically) zero
};

/// Design whose interaction columns have been replaced by residuals. All
/// other columns are copied bit for bit.
struct ResidualizedDesign {
    DesignMatrix design;
    std::vector<InteractionProvenance> provenance;
};

/// col minus its projection onto span(u, v), no intercept. Throws
/// RankDeficient when u and v are collinear.
Eigen::VectorXd residualize_column(const Eigen::VectorXd& col, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Regresses each interaction column on exactly the two basis columns whose
/// product formed it (e.g. A*S(B) on A and S(B)) and keeps the residual.
/// Both parent main effects must be present in `design`.
ResidualizedDesign residualize_interactions(const DesignMatrix& design, Execution execution = Execution::Parallel);

}  // namespace resrwa
