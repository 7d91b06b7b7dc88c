#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resrwa/design.hpp"
#include "resrwa/glm.hpp"
#include "resrwa/residualize.hpp"

namespace resrwa {

struct StandardizedMatrix {
    Eigen::MatrixXd values;
    Eigen::VectorXd means;
    Eigen::VectorXd sds;  // denominator n - 1
};

/// Centres every column and scales it to unit standard deviation. Throws
/// ZeroVarianceColumn naming the column index.
StandardizedMatrix standardize_columns(const Eigen::MatrixXd& m);

/// Orthogonal surrogate of a standardized design.
///
/// With the thin SVD D = A diag(delta) B^T, `z` = A B^T is the matrix with
/// orthonormal columns closest to D in Frobenius norm, one column per column
/// of D. `lambda` regresses D on the standardized surrogate
/// Z_s = sqrt(n-1) Z, i.e. lambda = (Z_s^T Z_s)^{-1} Z_s^T D = Z^T D / sqrt(n-1);
/// for standardized D it equals B diag(delta / sqrt(n-1)) B^T, the symmetric
/// square root of the correlation matrix.
struct OrthogonalDecomposition {
    Eigen::MatrixXd z;
    Eigen::MatrixXd lambda;
    Eigen::VectorXd singular_values;

    /// Z rescaled to unit column standard deviation.
    Eigen::MatrixXd z_standardized() const;
};

/// Throws RankDeficient when D is not of full column rank.
OrthogonalDecomposition orthogonalize(const Eigen::MatrixXd& d_std);

/// Correlation of each surrogate column with y: the OLS slopes of the
/// standardized response on the standardized surrogate. Throws
/// ConstantResponse.
Eigen::VectorXd standardized_coefficients_gaussian(const Eigen::MatrixXd& z, const Eigen::VectorXd& y);

struct LogisticStandardization {
    Eigen::VectorXd beta_star;
    Eigen::VectorXd b;    // unstandardized slopes on the standardized surrogate
    Eigen::VectorXd s_z;  // standard deviation of each surrogate column used in the fit
    double r2_l = 0.0;
    double s_logit = 0.0;  // standard deviation of the fitted logit
    ModelFit fit;
};

/// Fully standardized logistic coefficients b * s_Z * R_L / s_logit(yhat),
/// with R_L = sqrt(max(R^2_L, 0)). Throws DegenerateFit when all fitted
/// probabilities are equal. Separation surfaces as a warning on `fit`.
LogisticStandardization standardized_coefficients_logistic(const Eigen::MatrixXd& z, const Eigen::VectorXd& y01,
                                                           const IrlsOptions& irls = {});

/// Weight of one term and its share of the summed weights.
struct TermWeight {
    TermId term;
    std::string type;  // Control | Fixed | Free | Interaction
    double weight = 0.0;
    double percent = 0.0;
};

struct RwaReport {
    Family family = Family::Gaussian;
    std::vector<TermWeight> per_term;  // design group order
    Eigen::VectorXd column_weights;
    double total_r2 = 0.0;    // R^2_O (gaussian) or R^2_L (logistic)
    double weight_sum = 0.0;  // sum of column weights; equals total_r2 for gaussian
    std::vector<FitWarning> warnings;

    /// weight_sum - total_r2. Zero up to rounding for both families: the
    /// logistic rescaling makes the weights add up to R^2_L.
    double sum_discrepancy() const { return weight_sum - total_r2; }
    const TermWeight* find(const TermId& term) const;
};

/// Term type label as reported: controls, fixed and free mains by role,
/// interactions as "Interaction". Mains default to Free when no spec
/// matches.
std::string term_type(const TermId& term, std::span<const VariableSpec> specs);

/// Column weights eps_j = sum_k lambda_kj^2 beta*_k^2 over the standardized
/// design, summed per term.
RwaReport relative_weights(const DesignMatrix& design, const Eigen::VectorXd& y, Family family,
                           std::span<const VariableSpec> specs = {}, const IrlsOptions& irls = {});

RwaReport relative_weights(const ResidualizedDesign& design, const Eigen::VectorXd& y, Family family,
                           std::span<const VariableSpec> specs = {}, const IrlsOptions& irls = {});

}  // namespace resrwa
