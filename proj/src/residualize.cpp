#include "resrwa/residualize.hpp"

#include <cmath>
#include <exception>

#include "resrwa/error.hpp"

namespace resrwa {

namespace {

constexpr double kCollinearTolerance = 1e-10;
constexpr double kDegenerateTolerance = 1e-12;

}  // namespace

Eigen::VectorXd residualize_column(const Eigen::VectorXd& col, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (col.size() != u.size() || col.size() != v.size()) {
        throw Error(ErrorKind::InvalidArgument, "residualization inputs have different lengths");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0)) throw Error(ErrorKind::RankDeficient, "a parent column is identically zero");

    Eigen::MatrixXd parents(col.size(), 2);
    parents.col(0) = u / nu;
    parents.col(1) = v / nv;
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(parents);
    const auto& r = qr.matrixQR();
    if (std::abs(r(1, 1)) < kCollinearTolerance * std::abs(r(0, 0))) {
        throw Error(ErrorKind::RankDeficient, "parent columns are collinear");
    }
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(col.size(), 2);

    Eigen::VectorXd res = col - q * (q.transpose() * col);
    res -= q * (q.transpose() * res);
    return res;
}

ResidualizedDesign residualize_interactions(const DesignMatrix& design, Execution execution) {
    ResidualizedDesign out;
    out.design = design;

    for (const auto& g : design.groups) {
        if (!g.term.is_interaction()) continue;
        const TermGroup* a = design.find(TermId::main(g.term.first));
        const TermGroup* b = design.find(TermId::main(g.term.second));
        if (!a || !b) {
            throw Error(ErrorKind::InvalidArgument,
                        "interaction " + g.term.label() + " is missing a parent main effect in the design");
        }
        for (Eigen::Index k = 0; k < g.width; ++k) {
            const ColumnLabel& label = g.labels[k];
            if (!label.second) throw Error(ErrorKind::InvalidArgument, "interaction column without two factors");
            const Eigen::Index pa = a->first + label.first.index;
            const Eigen::Index pb = b->first + label.second->index;
            if (label.first.index >= a->width || label.second->index >= b->width) {
                throw Error(ErrorKind::InvalidArgument, "interaction " + g.term.label() + " refers to a missing basis column");
            }
            out.provenance.push_back(InteractionProvenance{g.term, g.first + k, pa, pb, false});
        }
    }

    const auto count = static_cast<long>(out.provenance.size());
    std::vector<std::exception_ptr> errors(out.provenance.size());
    const bool parallel = execution == Execution::Parallel;
#pragma omp parallel for schedule(static) if (parallel) num_threads(effective_threads())
    for (long i = 0; i < count; ++i) {
        auto& p = out.provenance[static_cast<std::size_t>(i)];
        try {
            const auto col = design.values.col(p.column);
            const double col_norm = col.norm();
            if (col_norm == 0.0) {
                p.degenerate = true;
                out.design.values.col(p.column).setZero();
                continue;
            }
            Eigen::VectorXd r = residualize_column(col, design.values.col(p.parent_a), design.values.col(p.parent_b));
            p.degenerate = r.norm() <= kDegenerateTolerance * col_norm;
            out.design.values.col(p.column) = r;
        } catch (const Error& e) {
            errors[static_cast<std::size_t>(i)] =
                std::make_exception_ptr(Error(e.kind(), "interaction " + p.term.label() + ": " + e.detail()));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace resrwa
