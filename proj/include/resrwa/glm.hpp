#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resrwa/design.hpp"

namespace resrwa {

enum class Family { Gaussian, Binomial };

std::string_view to_string(Family family);

enum class FitWarning { Separation, IterationLimit };

std::string_view to_string(FitWarning warning);

struct ModelFit {
    Family family = Family::Gaussian;
    Eigen::VectorXd coefficients;      // intercept first
    Eigen::VectorXd fitted;            // y-hat, or probabilities for binomial
    Eigen::VectorXd linear_predictor;  // equals fitted for gaussian
    double log_likelihood = 0.0;
    double bic = 0.0;
    double deviance = 0.0;  // RSS for gaussian
    Eigen::Index n = 0;
    Eigen::Index n_params = 0;  // coefficients including the intercept
    bool converged = true;
    int iterations = 0;
    std::vector<FitWarning> warnings;

    bool has_warning(FitWarning w) const;
};

struct IrlsOptions {
    double deviance_tolerance = 1e-8;
    int max_iterations = 100;
    double probability_floor = 1e-10;
    /// |linear predictor| beyond this marks (quasi-)separation.
    double separation_eta = 30.0;
};

/// Throws NonBinaryResponse (with the 1-based row) for binomial responses
/// outside {0, 1}, DataError for non-finite values.
void validate_response(const Eigen::VectorXd& y, Family family);

/// Fits y on [1, X]. Gaussian is exact least squares; binomial is IRLS.
/// Throws RankDeficient for collinear columns. Non-convergence is reported
/// through `converged` and `warnings`, never thrown.
ModelFit fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family, const IrlsOptions& options = {});

/// Same as above; RankDeficient messages name the offending term.
ModelFit fit(const DesignMatrix& design, const Eigen::VectorXd& y, Family family, const IrlsOptions& options = {});

/// Profiled-variance normal log-likelihood -(n/2)(log(2 pi) + log(RSS/n) + 1).
double gaussian_log_likelihood(double rss, Eigen::Index n);

double bic(double log_likelihood, Eigen::Index n, Eigen::Index n_params);
double bic(const ModelFit& fit);

/// 1 - sum (y - yhat)^2 / sum (y - ybar)^2. Throws ConstantResponse.
double r_squared_gaussian(const ModelFit& fit, const Eigen::VectorXd& y);

/// Same formula on the fitted probabilities. Throws ConstantResponse.
double r_squared_logistic(const ModelFit& fit, const Eigen::VectorXd& y);

}  // namespace resrwa
