#include "resrwa/selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include "resrwa/error.hpp"

namespace resrwa {

Scope make_scope(const TermCatalog& catalog) {
    Scope scope;
    for (const auto& s : catalog.specs()) {
        const TermId main = catalog.main_term(s);
        if (s.role != VariableRole::Free) scope.lower.insert(main);
        scope.upper.insert(main);
    }
    const auto vars = catalog.interaction_variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) scope.upper.insert(TermId::interaction(vars[i], vars[j]));
    }
    return scope;
}

TermSet all_mains(const Scope& scope) {
    TermSet t;
    for (const auto& term : scope.upper) {
        if (!term.is_interaction()) t.active.insert(term);
    }
    return t;
}

namespace {

bool parents_active(const TermSet& terms, const TermId& interaction) {
    return terms.contains(TermId::main(interaction.first)) && terms.contains(TermId::main(interaction.second));
}

bool has_active_interaction(const TermSet& terms, const std::string& variable) {
    return std::any_of(terms.active.begin(), terms.active.end(), [&](const TermId& t) {
        return t.is_interaction() && (t.first == variable || t.second == variable);
    });
}

}  // namespace

void check_term_set(const TermSet& terms, const Scope& scope) {
    for (const auto& t : scope.lower) {
        if (!terms.contains(t)) throw Error(ErrorKind::InvalidArgument, "required term " + t.label() + " is missing");
    }
    for (const auto& t : terms.active) {
        if (!scope.upper.count(t)) throw Error(ErrorKind::InvalidArgument, "term " + t.label() + " is outside the scope");
        if (t.is_interaction() && !parents_active(terms, t)) {
            throw Error(ErrorKind::InvalidArgument, "interaction " + t.label() + " without both main effects");
        }
    }
}

std::string Move::describe() const {
    std::string s = (kind == MoveKind::Add ? "+ " : "- ") + term.label();
    if (!parents_added.empty()) {
        s += " (with";
        for (const auto& p : parents_added) s += " " + p.label();
        s += ")";
    }
    return s;
}

std::vector<Move> legal_moves(const TermSet& current, const Scope& scope) {
    std::vector<Move> drops;
    std::vector<Move> adds;
    for (const auto& t : current.active) {
        if (scope.lower.count(t)) continue;
        if (t.kind == TermKind::Main && has_active_interaction(current, t.first)) continue;
        drops.push_back(Move{MoveKind::Drop, t, {}});
    }
    for (const auto& t : scope.upper) {
        if (current.contains(t)) continue;
        Move m{MoveKind::Add, t, {}};
        if (t.is_interaction()) {
            for (const auto& name : {t.first, t.second}) {
                const TermId parent = TermId::main(name);
                if (!current.contains(parent)) m.parents_added.push_back(parent);
            }
        }
        adds.push_back(std::move(m));
    }
    drops.insert(drops.end(), std::make_move_iterator(adds.begin()), std::make_move_iterator(adds.end()));
    return drops;
}

TermSet apply_move(const TermSet& current, const Move& move) {
    TermSet next = current;
    if (move.kind == MoveKind::Drop) {
        next.active.erase(move.term);
    } else {
        next.active.insert(move.term);
        for (const auto& p : move.parents_added) next.active.insert(p);
    }
    return next;
}

namespace {

std::optional<double> refit_score(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                  const TermSet& candidate, const IrlsOptions& irls) {
    try {
        const ModelFit f = fit(catalog.design(candidate.terms()), y, family, irls);
        if (!f.converged) return std::nullopt;
        return f.bic;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::RankDeficient) return std::nullopt;
        throw;
    }
}

/// Least-squares state of a gaussian model that is grown one block at a time.
///
/// Columns of [1, X] are scaled to unit norm and kept as X = Q R in insertion
/// order. Every block that could still be added is cached already projected
/// onto the orthogonal complement of Q, so scoring an add needs only a small
/// QR of that block; accepting an add extends Q and R and sweeps the new
/// directions out of the cache. Drops rebuild everything.
class GaussianSearchState {
public:
    GaussianSearchState(const TermCatalog& catalog, const Eigen::VectorXd& y, const Scope& scope, const TermSet& current)
        : catalog_(catalog), scope_(scope), y_(y), n_(y.size()) {
        rebuild(current);
    }

    std::vector<std::optional<double>> score_all(const std::vector<Move>& moves) const {
        const auto count = static_cast<long>(moves.size());
        std::vector<std::optional<double>> scores(moves.size());
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
        for (long i = 0; i < count; ++i) {
            const Move& m = moves[static_cast<std::size_t>(i)];
            auto s = m.kind == MoveKind::Drop ? score_drop(m.term) : score_add(m);
            if (s && std::isfinite(*s)) scores[static_cast<std::size_t>(i)] = s;
        }
        return scores;
    }

    void apply(const Move& move, const TermSet& next) {
        if (move.kind == MoveKind::Drop || adds_since_rebuild_ >= kRebuildInterval) {
            rebuild(next);
            return;
        }
        std::vector<TermId> added = move.parents_added;
        added.push_back(move.term);
        const Eigen::MatrixXd m = gather_perp(added);
        const Eigen::MatrixXd b = gather_raw(added);
        const Eigen::Index w = m.cols();

        const Eigen::HouseholderQR<Eigen::MatrixXd> hq(m);
        const Eigen::MatrixXd q_new = hq.householderQ() * Eigen::MatrixXd::Identity(n_, w);
        const Eigen::MatrixXd r_new = hq.matrixQR().topLeftCorner(w, w).triangularView<Eigen::Upper>();

        Eigen::MatrixXd r(p_ + w, p_ + w);
        r.setZero();
        r.topLeftCorner(p_, p_) = r_;
        r.topRightCorner(p_, w) = q_.transpose() * b;
        r.bottomRightCorner(w, w) = r_new;
        r_ = std::move(r);

        q_.conservativeResize(Eigen::NoChange, p_ + w);
        q_.rightCols(w) = q_new;
        qty_.conservativeResize(p_ + w);
        qty_.tail(w) = q_new.transpose() * y_;
        resid_ -= q_new * (q_new.transpose() * resid_);
        rss_ = resid_.squaredNorm();

        Eigen::Index offset = p_;
        for (const auto& t : added) {
            const Eigen::Index width = catalog_.block(t).columns.cols();
            ranges_[t] = {offset, width};
            offset += width;
            perp_.erase(t);
        }
        p_ += w;

        auto entries = cache_entries();
        const auto count = static_cast<long>(entries.size());
#pragma omp parallel for schedule(static) num_threads(effective_threads())
        for (long i = 0; i < count; ++i) {
            Eigen::MatrixXd& c = *entries[static_cast<std::size_t>(i)];
            if (c.cols() > 0) c -= q_new * (q_new.transpose() * c);
        }
        refresh_inverse();
        ++adds_since_rebuild_;
    }

    double current_bic() const { return to_bic(rss_, p_); }

private:
    static constexpr double kAbsoluteRankTolerance = 1e-10;
    static constexpr int kRebuildInterval = 32;

    void rebuild(const TermSet& current) {
        const auto ordered = catalog_.canonical_order(current.terms());
        ranges_.clear();
        p_ = 1;
        for (const auto& t : ordered) {
            const Eigen::Index width = catalog_.block(t).columns.cols();
            ranges_[t] = {p_, width};
            p_ += width;
        }
        Eigen::MatrixXd xs(n_, p_);
        xs.col(0).setOnes();
        xs.col(0).normalize();
        for (const auto& t : ordered) {
            const auto [first, width] = ranges_[t];
            xs.middleCols(first, width) = unit_block(t);
        }

        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(xs);
        q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n_, p_);
        r_ = qr.matrixQR().topLeftCorner(p_, p_).triangularView<Eigen::Upper>();
        qty_ = q_.transpose() * y_;
        resid_ = y_ - q_ * qty_;
        rss_ = resid_.squaredNorm();

        perp_.clear();
        for (const auto& t : scope_.upper) {
            if (!current.contains(t)) perp_[t] = Eigen::MatrixXd();
        }
        std::vector<std::pair<const TermId*, Eigen::MatrixXd*>> todo;
        for (auto& [t, m] : perp_) todo.emplace_back(&t, &m);
        const auto count = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
        for (long i = 0; i < count; ++i) {
            auto [t, m] = todo[static_cast<std::size_t>(i)];
            Eigen::MatrixXd b = unit_block(*t);
            if (b.cols() == 0) continue;
            // Two passes keep the complement orthogonal even when b lies
            // almost inside the current column space.
            b -= q_ * (q_.transpose() * b);
            b -= q_ * (q_.transpose() * b);
            *m = std::move(b);
        }
        refresh_inverse();
        adds_since_rebuild_ = 0;
    }

    void refresh_inverse() {
        r_inv_ = r_.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p_, p_));
        beta_ = r_inv_ * qty_;
    }

    /// Catalog block scaled to unit column norms; empty when a column is zero.
    Eigen::MatrixXd unit_block(const TermId& t) const {
        Eigen::MatrixXd b = catalog_.block(t).columns;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            const double norm = b.col(j).norm();
            if (!(norm > 0.0)) return {};
            b.col(j) /= norm;
        }
        return b;
    }

    std::vector<Eigen::MatrixXd*> cache_entries() {
        std::vector<Eigen::MatrixXd*> out;
        out.reserve(perp_.size());
        for (auto& [t, m] : perp_) out.push_back(&m);
        return out;
    }

    Eigen::MatrixXd gather_perp(const std::vector<TermId>& terms) const {
        Eigen::Index width = 0;
        for (const auto& t : terms) {
            const auto it = perp_.find(t);
            if (it == perp_.end() || it->second.cols() == 0) return {};
            width += it->second.cols();
        }
        Eigen::MatrixXd m(n_, width);
        Eigen::Index c = 0;
        for (const auto& t : terms) {
            const auto& block = perp_.at(t);
            m.middleCols(c, block.cols()) = block;
            c += block.cols();
        }
        return m;
    }

    Eigen::MatrixXd gather_raw(const std::vector<TermId>& terms) const {
        std::vector<Eigen::MatrixXd> blocks;
        Eigen::Index width = 0;
        for (const auto& t : terms) {
            blocks.push_back(unit_block(t));
            width += blocks.back().cols();
        }
        Eigen::MatrixXd m(n_, width);
        Eigen::Index c = 0;
        for (const auto& b : blocks) {
            m.middleCols(c, b.cols()) = b;
            c += b.cols();
        }
        return m;
    }

    double to_bic(double rss, Eigen::Index params) const {
        if (params >= n_) return std::numeric_limits<double>::quiet_NaN();
        return bic(gaussian_log_likelihood(std::max(rss, 0.0), n_), n_, params);
    }

    std::optional<double> score_drop(const TermId& term) const {
        const auto it = ranges_.find(term);
        if (it == ranges_.end()) return std::nullopt;
        const auto [first, width] = it->second;
        const Eigen::VectorXd b = beta_.segment(first, width);
        const auto rows = r_inv_.middleRows(first, width);
        const Eigen::MatrixXd c = rows * rows.transpose();
        return to_bic(rss_ + b.dot(c.ldlt().solve(b)), p_ - width);
    }

    std::optional<double> score_add(const Move& move) const {
        std::vector<TermId> added = move.parents_added;
        added.push_back(move.term);
        const Eigen::MatrixXd m = gather_perp(added);
        if (m.cols() == 0 || p_ + m.cols() >= n_) return std::nullopt;

        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        const auto& rr = qr.matrixQR();
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            if (std::abs(rr(i, i)) < kAbsoluteRankTolerance) return std::nullopt;
        }
        const Eigen::VectorXd gamma = qr.solve(resid_);
        return to_bic((resid_ - m * gamma).squaredNorm(), p_ + m.cols());
    }

    const TermCatalog& catalog_;
    const Scope& scope_;
    const Eigen::VectorXd& y_;
    Eigen::Index n_ = 0;
    Eigen::Index p_ = 0;
    Eigen::MatrixXd q_;
    Eigen::MatrixXd r_;
    Eigen::MatrixXd r_inv_;
    Eigen::VectorXd qty_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd resid_;
    double rss_ = 0.0;
    std::map<TermId, std::pair<Eigen::Index, Eigen::Index>> ranges_;
    std::map<TermId, Eigen::MatrixXd> perp_;
    int adds_since_rebuild_ = 0;
};

std::vector<std::optional<double>> score_serial(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                                const TermSet& current, const std::vector<Move>& moves,
                                                const SelectionOptions& options) {
    std::vector<std::optional<double>> scores(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
        scores[i] = refit_score(catalog, y, family, apply_move(current, moves[i]), options.irls);
    }
    return scores;
}

std::vector<std::optional<double>> score_parallel(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                                  const TermSet& current, const std::vector<Move>& moves,
                                                  const SelectionOptions& options) {
    if (family == Family::Gaussian) {
        const Scope scope = make_scope(catalog);
        return GaussianSearchState(catalog, y, scope, current).score_all(moves);
    }

    const auto count = static_cast<long>(moves.size());
    std::vector<std::optional<double>> scores(moves.size());
    std::vector<std::exception_ptr> errors(moves.size());
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
    for (long i = 0; i < count; ++i) {
        try {
            scores[i] = refit_score(catalog, y, family, apply_move(current, moves[i]), options.irls);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return scores;
}

/// Index of the winning candidate, or nullopt when none is admissible.
std::optional<std::size_t> pick_best(const std::vector<Move>& moves, const std::vector<std::optional<double>>& scores,
                                     double tie_tolerance) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : scores) {
        if (s && *s < best) best = *s;
    }
    if (!std::isfinite(best)) return std::nullopt;
    const double cutoff = best + tie_tolerance * std::max(1.0, std::abs(best));

    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (!scores[i] || *scores[i] > cutoff) continue;
        if (!winner) {
            winner = i;
            continue;
        }
        const Move& a = moves[i];
        const Move& b = moves[*winner];
        const bool a_drop = a.kind == MoveKind::Drop;
        const bool b_drop = b.kind == MoveKind::Drop;
        if ((a_drop && !b_drop) || (a_drop == b_drop && a.term < b.term)) winner = i;
    }
    return winner;
}

}  // namespace

std::vector<std::optional<double>> score_moves(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                               const TermSet& current, const std::vector<Move>& moves,
                                               const SelectionOptions& options) {
    return options.execution == Execution::SerialReference
               ? score_serial(catalog, y, family, current, moves, options)
               : score_parallel(catalog, y, family, current, moves, options);
}

SelectionResult stepwise_select(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                const SelectionOptions& options) {
    if (y.size() != catalog.rows()) throw Error(ErrorKind::InvalidArgument, "response length does not match data");
    validate_response(y, family);
    const Scope scope = make_scope(catalog);

    SelectionResult result;
    result.terms = all_mains(scope);
    result.fit = fit(catalog.design(result.terms.terms()), y, family, options.irls);
    result.initial_bic = result.fit.bic;

    // The gaussian fast path carries its factorisation from step to step and
    // refits once at the end; every other path refits each accepted model.
    std::optional<GaussianSearchState> state;
    if (family == Family::Gaussian && options.execution == Execution::Parallel) {
        state.emplace(catalog, y, scope, result.terms);
    }

    double current_bic = result.fit.bic;
    for (int step = 0; step < options.max_steps; ++step) {
        const auto moves = legal_moves(result.terms, scope);
        if (moves.empty()) break;
        const auto scores =
            state ? state->score_all(moves) : score_moves(catalog, y, family, result.terms, moves, options);
        result.candidates_evaluated += static_cast<int>(moves.size());
        result.candidates_skipped +=
            static_cast<int>(std::count_if(scores.begin(), scores.end(), [](const auto& s) { return !s; }));

        const auto best = pick_best(moves, scores, options.tie_tolerance);
        if (!best || !(*scores[*best] < current_bic - options.min_improvement)) break;

        TermSet next = apply_move(result.terms, moves[*best]);
        double next_bic = 0.0;
        if (state) {
            state->apply(moves[*best], next);
            next_bic = state->current_bic();
        } else {
            ModelFit next_fit = fit(catalog.design(next.terms()), y, family, options.irls);
            next_bic = next_fit.bic;
            if (!(next_bic < current_bic)) break;
            result.fit = std::move(next_fit);
        }
        if (!(next_bic < current_bic)) break;
        result.terms = std::move(next);
        current_bic = next_bic;
        result.trace.push_back(StepRecord{moves[*best], next_bic});
    }

    if (state && !result.trace.empty()) {
        result.fit = fit(catalog.design(result.terms.terms()), y, family, options.irls);
    }
    return result;
}

SelectionResult stepwise_select(const ColumnTable& data, std::vector<VariableSpec> specs, const Eigen::VectorXd& y,
                                Family family, const SelectionOptions& options) {
    const TermCatalog catalog(data, std::move(specs));
    return stepwise_select(catalog, y, family, options);
}

}  // namespace resrwa
