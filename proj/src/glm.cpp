#include "resrwa/glm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "resrwa/error.hpp"

namespace resrwa {

std::string_view to_string(Family family) {
    return family == Family::Gaussian ? "gaussian" : "binomial";
}

std::string_view to_string(FitWarning warning) {
    return warning == FitWarning::Separation ? "SeparationWarning" : "IterationLimit";
}

bool ModelFit::has_warning(FitWarning w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

void validate_response(const Eigen::VectorXd& y, Family family) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) throw Error(ErrorKind::DataError, "response row " + std::to_string(i + 1) + " is not finite");
        if (family == Family::Binomial && y[i] != 0.0 && y[i] != 1.0) {
            throw Error(ErrorKind::NonBinaryResponse,
                        "response row " + std::to_string(i + 1) + " has value " + std::to_string(y[i]));
        }
    }
}

namespace {

/// [1, X] with every column scaled to unit norm, plus the scale factors.
struct Equilibrated {
    Eigen::MatrixXd x;
    Eigen::VectorXd scale;
};

struct RankDeficiency {
    Eigen::Index column;  // index into [1, X]; 0 is the intercept
};

Equilibrated equilibrate(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Equilibrated e;
    e.x.resize(n, x.cols() + 1);
    e.x.col(0).setOnes();
    e.x.rightCols(x.cols()) = x;
    e.scale.resize(e.x.cols());
    for (Eigen::Index j = 0; j < e.x.cols(); ++j) {
        const double norm = e.x.col(j).norm();
        if (norm == 0.0 || !std::isfinite(norm)) throw RankDeficiency{j};
        e.scale[j] = 1.0 / norm;
        e.x.col(j) *= e.scale[j];
    }
    return e;
}

constexpr double kRankThreshold = 1e-10;

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& xs) {
    if (xs.rows() < xs.cols()) throw RankDeficiency{xs.rows()};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs.rows(), xs.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(xs);
    if (qr.rank() < xs.cols()) throw RankDeficiency{qr.colsPermutation().indices()(qr.rank())};
    return qr;
}

ModelFit fit_gaussian(const Equilibrated& e, const Eigen::VectorXd& y) {
    const auto qr = checked_qr(e.x);
    ModelFit f;
    f.family = Family::Gaussian;
    f.n = y.size();
    f.n_params = e.x.cols();
    const Eigen::VectorXd b = qr.solve(y);
    f.coefficients = b.cwiseProduct(e.scale);
    f.fitted = e.x * b;
    f.linear_predictor = f.fitted;
    f.deviance = (y - f.fitted).squaredNorm();
    f.log_likelihood = gaussian_log_likelihood(f.deviance, f.n);
    f.bic = bic(f.log_likelihood, f.n, f.n_params);
    f.iterations = 1;
    return f;
}

double binomial_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) dev -= 2.0 * (y[i] > 0.5 ? std::log(mu[i]) : std::log1p(-mu[i]));
    return dev;
}

ModelFit fit_binomial(const Equilibrated& e, const Eigen::VectorXd& y, const IrlsOptions& opt) {
    checked_qr(e.x);
    const Eigen::Index n = y.size();
    const double lo = opt.probability_floor;
    const double hi = 1.0 - opt.probability_floor;
    const auto inv_logit = [&](double eta) { return std::clamp(1.0 / (1.0 + std::exp(-eta)), lo, hi); };

    Eigen::VectorXd mu = (y.array() + 0.5) / 2.0;
    Eigen::VectorXd eta = (mu.array() / (1.0 - mu.array())).log();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(e.x.cols());
    double dev = binomial_deviance(y, mu);

    ModelFit f;
    f.family = Family::Binomial;
    f.converged = false;
    Eigen::MatrixXd wx(n, e.x.cols());
    Eigen::VectorXd wz(n);
    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = mu[i] * (1.0 - mu[i]);
            const double sw = std::sqrt(w);
            wz[i] = sw * (eta[i] + (y[i] - mu[i]) / w);
            wx.row(i) = sw * e.x.row(i);
        }
        beta = wx.householderQr().solve(wz);
        eta = e.x * beta;
        for (Eigen::Index i = 0; i < n; ++i) mu[i] = inv_logit(eta[i]);
        const double next = binomial_deviance(y, mu);
        f.iterations = iter;
        const bool done = std::abs(next - dev) < opt.deviance_tolerance;
        dev = next;
        if (done) {
            f.converged = true;
            break;
        }
    }

    if (!f.converged) f.warnings.push_back(FitWarning::IterationLimit);
    if (eta.cwiseAbs().maxCoeff() > opt.separation_eta) {
        f.converged = false;
        f.warnings.push_back(FitWarning::Separation);
    }

    f.n = n;
    f.n_params = e.x.cols();
    f.coefficients = beta.cwiseProduct(e.scale);
    f.linear_predictor = eta;
    f.fitted = mu;
    f.deviance = dev;
    f.log_likelihood = -0.5 * dev;
    f.bic = bic(f.log_likelihood, f.n, f.n_params);
    return f;
}

ModelFit fit_impl(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family, const IrlsOptions& options) {
    if (x.rows() != y.size()) {
        throw Error(ErrorKind::InvalidArgument, "design has " + std::to_string(x.rows()) + " rows, response has " +
                                                    std::to_string(y.size()));
    }
    if (y.size() == 0) throw Error(ErrorKind::InvalidArgument, "no observations");
    validate_response(y, family);
    const Equilibrated e = equilibrate(x);
    return family == Family::Gaussian ? fit_gaussian(e, y) : fit_binomial(e, y, options);
}

}  // namespace

ModelFit fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Family family, const IrlsOptions& options) {
    try {
        return fit_impl(x, y, family, options);
    } catch (const RankDeficiency& r) {
        throw Error(ErrorKind::RankDeficient, r.column == 0 ? std::string("intercept is collinear with the design")
                                                            : "design column " + std::to_string(r.column - 1) +
                                                                  " is collinear with earlier columns");
    }
}

ModelFit fit(const DesignMatrix& design, const Eigen::VectorXd& y, Family family, const IrlsOptions& options) {
    try {
        return fit_impl(design.values, y, family, options);
    } catch (const RankDeficiency& r) {
        if (r.column == 0 || r.column > design.cols()) {
            throw Error(ErrorKind::RankDeficient, "design is rank deficient (" + std::to_string(design.cols() + 1) +
                                                      " parameters, " + std::to_string(design.rows()) + " rows)");
        }
        const auto& g = design.group_of_column(r.column - 1);
        throw Error(ErrorKind::RankDeficient, "term " + g.term.label() + " (column " + std::to_string(r.column - 1) +
                                                  ") is collinear with the rest of the design");
    }
}

double gaussian_log_likelihood(double rss, Eigen::Index n) {
    const double nn = static_cast<double>(n);
    return -0.5 * nn * (std::log(2.0 * std::numbers::pi) + std::log(rss / nn) + 1.0);
}

double bic(double log_likelihood, Eigen::Index n, Eigen::Index n_params) {
    return -2.0 * log_likelihood + std::log(static_cast<double>(n)) * static_cast<double>(n_params);
}

double bic(const ModelFit& f) { return bic(f.log_likelihood, f.n, f.n_params); }

namespace {

double r_squared(const Eigen::VectorXd& fitted, const Eigen::VectorXd& y) {
    if (fitted.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "fitted and response lengths differ");
    const double tss = (y.array() - y.mean()).square().sum();
    if (!(tss > 0.0)) throw Error(ErrorKind::ConstantResponse, "response has zero variance");
    return 1.0 - (y - fitted).squaredNorm() / tss;
}

}  // namespace

double r_squared_gaussian(const ModelFit& f, const Eigen::VectorXd& y) { return r_squared(f.fitted, y); }

double r_squared_logistic(const ModelFit& f, const Eigen::VectorXd& y) { return r_squared(f.fitted, y); }

}  // namespace resrwa
