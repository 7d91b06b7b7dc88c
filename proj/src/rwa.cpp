#include "resrwa/rwa.hpp"

#include <algorithm>
#include <cmath>

#include "resrwa/error.hpp"

namespace resrwa {

namespace {

constexpr double kRankTolerance = 1e-10;

double sample_sd(const Eigen::VectorXd& v) {
    if (v.size() < 2) return 0.0;
    return std::sqrt((v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1));
}

Eigen::VectorXd standardize_response(const Eigen::VectorXd& y) {
    const double sd = sample_sd(y);
    if (!(sd > 0.0)) throw Error(ErrorKind::ConstantResponse, "response has zero variance");
    return (y.array() - y.mean()) / sd;
}

}  // namespace

StandardizedMatrix standardize_columns(const Eigen::MatrixXd& m) {
    if (m.rows() < 2) throw Error(ErrorKind::InvalidArgument, "standardization needs at least two rows");
    StandardizedMatrix s;
    s.values.resize(m.rows(), m.cols());
    s.means.resize(m.cols());
    s.sds.resize(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mean = m.col(j).mean();
        const Eigen::VectorXd centred = m.col(j).array() - mean;
        const double sd = std::sqrt(centred.squaredNorm() / static_cast<double>(m.rows() - 1));
        // Columns whose spread is pure rounding noise count as constant.
        if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
            throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " has zero variance");
        }
        s.means[j] = mean;
        s.sds[j] = sd;
        s.values.col(j) = centred / sd;
    }
    return s;
}

Eigen::MatrixXd OrthogonalDecomposition::z_standardized() const {
    return z * std::sqrt(static_cast<double>(z.rows() - 1));
}

OrthogonalDecomposition orthogonalize(const Eigen::MatrixXd& d_std) {
    const Eigen::Index n = d_std.rows();
    const Eigen::Index m = d_std.cols();
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "empty design");
    if (n <= m) throw Error(ErrorKind::RankDeficient, "design has no more rows than columns");

    const Eigen::BDCSVD<Eigen::MatrixXd> svd(d_std, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!(sv[m - 1] > kRankTolerance * sv[0])) {
        throw Error(ErrorKind::RankDeficient, "standardized design is not of full column rank (condition " +
                                                  std::to_string(sv[0] / sv[m - 1]) + ")");
    }

    OrthogonalDecomposition out;
    out.singular_values = sv;
    out.z = svd.matrixU() * svd.matrixV().transpose();
    out.lambda = out.z.transpose() * d_std / std::sqrt(static_cast<double>(n - 1));
    return out;
}

Eigen::VectorXd standardized_coefficients_gaussian(const Eigen::MatrixXd& z, const Eigen::VectorXd& y) {
    if (z.rows() != y.size()) throw Error(ErrorKind::InvalidArgument, "surrogate and response lengths differ");
    const Eigen::VectorXd y_std = standardize_response(y);
    // Z^T Z = I, so the normal equations reduce to a projection.
    return z.transpose() * y_std / std::sqrt(static_cast<double>(y.size() - 1));
}

LogisticStandardization standardized_coefficients_logistic(const Eigen::MatrixXd& z, const Eigen::VectorXd& y01,
                                                           const IrlsOptions& irls) {
    if (z.rows() != y01.size()) throw Error(ErrorKind::InvalidArgument, "surrogate and response lengths differ");
    const Eigen::Index n = z.rows();
    const Eigen::MatrixXd z_std = z * std::sqrt(static_cast<double>(n - 1));

    LogisticStandardization out;
    out.fit = fit(z_std, y01, Family::Binomial, irls);
    out.b = out.fit.coefficients.tail(z.cols());
    out.s_z.resize(z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) out.s_z[j] = sample_sd(z_std.col(j));
    out.r2_l = r_squared_logistic(out.fit, y01);
    out.s_logit = sample_sd(out.fit.linear_predictor);
    if (!(out.s_logit > 0.0)) {
        // b = 0 is the continuous limit of the formula: no signal, no weight.
        if (out.b.isZero(0.0)) {
            out.beta_star = Eigen::VectorXd::Zero(z.cols());
            return out;
        }
        throw Error(ErrorKind::DegenerateFit, "all fitted probabilities are equal");
    }

    const double r_l = std::sqrt(std::max(out.r2_l, 0.0));
    out.beta_star = out.b.cwiseProduct(out.s_z) * (r_l / out.s_logit);
    return out;
}

const TermWeight* RwaReport::find(const TermId& term) const {
    const auto it = std::find_if(per_term.begin(), per_term.end(), [&](const TermWeight& w) { return w.term == term; });
    return it == per_term.end() ? nullptr : &*it;
}

std::string term_type(const TermId& term, std::span<const VariableSpec> specs) {
    switch (term.kind) {
        case TermKind::ControlMain: return "Control";
        case TermKind::Interaction: return "Interaction";
        case TermKind::Main: break;
    }
    for (const auto& s : specs) {
        if (s.name == term.first) return std::string(to_string(s.role));
    }
    return "Free";
}

RwaReport relative_weights(const DesignMatrix& design, const Eigen::VectorXd& y, Family family,
                           std::span<const VariableSpec> specs, const IrlsOptions& irls) {
    if (design.rows() != y.size()) throw Error(ErrorKind::InvalidArgument, "design and response lengths differ");
    validate_response(y, family);

    StandardizedMatrix d_std;
    try {
        d_std = standardize_columns(design.values);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVarianceColumn) throw;
        Eigen::Index col = 0;
        for (; col < design.cols(); ++col) {
            const auto c = design.values.col(col);
            if (c.maxCoeff() == c.minCoeff()) break;
        }
        if (col == design.cols()) throw;
        throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(col) + " of term " +
                                                       design.group_of_column(col).term.label() + " has zero variance");
    }
    const OrthogonalDecomposition od = orthogonalize(d_std.values);

    RwaReport report;
    report.family = family;
    Eigen::VectorXd beta_star;
    if (family == Family::Gaussian) {
        beta_star = standardized_coefficients_gaussian(od.z, y);
        report.total_r2 = r_squared_gaussian(fit(design, y, Family::Gaussian), y);
    } else {
        LogisticStandardization ls = standardized_coefficients_logistic(od.z, y, irls);
        beta_star = std::move(ls.beta_star);
        report.total_r2 = ls.r2_l;
        report.warnings = ls.fit.warnings;
    }

    report.column_weights = od.lambda.array().square().matrix().transpose() * beta_star.array().square().matrix();
    report.weight_sum = report.column_weights.sum();

    for (const auto& g : design.groups) {
        TermWeight w;
        w.term = g.term;
        w.type = term_type(g.term, specs);
        w.weight = report.column_weights.segment(g.first, g.width).sum();
        w.percent = report.weight_sum > 0.0 ? 100.0 * w.weight / report.weight_sum : 0.0;
        report.per_term.push_back(std::move(w));
    }
    return report;
}

RwaReport relative_weights(const ResidualizedDesign& design, const Eigen::VectorXd& y, Family family,
                           std::span<const VariableSpec> specs, const IrlsOptions& irls) {
    return relative_weights(design.design, y, family, specs, irls);
}

}  // namespace resrwa
