#pragma once

#include <optional>
#include <set>
#include <vector>

#include "resrwa/design.hpp"
#include "resrwa/glm.hpp"
#include "resrwa/parallel.hpp"

namespace resrwa {

/// Search bounds. `lower` holds controls and fixed mains; `upper` adds the
/// free mains and every pairwise interaction among fixed and free variables.
struct Scope {
    std::set<TermId> lower;
    std::set<TermId> upper;
};

Scope make_scope(const TermCatalog& catalog);

struct TermSet {
    std::set<TermId> active;

    bool contains(const TermId& t) const { return active.count(t) > 0; }
    std::vector<TermId> terms() const { return {active.begin(), active.end()}; }
};

/// Every main effect (controls, fixed, free) and no interactions.
TermSet all_mains(const Scope& scope);

/// Throws InvalidArgument if `terms` leaves the scope or breaks hierarchy.
void check_term_set(const TermSet& terms, const Scope& scope);

enum class MoveKind { Add, Drop };

struct Move {
    MoveKind kind = MoveKind::Add;
    TermId term;
    /// Missing parent mains added together with an interaction.
    std::vector<TermId> parents_added;

    std::string describe() const;
    friend bool operator==(const Move&, const Move&) = default;
};

/// Drops first, then adds, each in TermId order.
std::vector<Move> legal_moves(const TermSet& current, const Scope& scope);

TermSet apply_move(const TermSet& current, const Move& move);

struct StepRecord {
    Move move;
    double bic = 0.0;
};

struct SelectionOptions {
    Execution execution = Execution::Parallel;
    IrlsOptions irls;
    /// A move must lower BIC by more than this to be taken.
    double min_improvement = 1e-8;
    /// Candidates whose BIC lies within this of the best are tied; ties go to
    /// drops before adds, then to the smaller TermId.
    double tie_tolerance = 1e-9;
    int max_steps = 10000;
};

struct SelectionResult {
    TermSet terms;
    ModelFit fit;
    double initial_bic = 0.0;
    std::vector<StepRecord> trace;
    int candidates_evaluated = 0;
    int candidates_skipped = 0;  // rank deficient or not converged
};

/// Scores of every candidate move from `current`; nullopt marks an
/// inadmissible candidate. Exposed so the two execution paths can be
/// compared directly.
std::vector<std::optional<double>> score_moves(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                               const TermSet& current, const std::vector<Move>& moves,
                                               const SelectionOptions& options);

/// Greedy bidirectional BIC search starting from all mains.
SelectionResult stepwise_select(const TermCatalog& catalog, const Eigen::VectorXd& y, Family family,
                                const SelectionOptions& options = {});

SelectionResult stepwise_select(const ColumnTable& data, std::vector<VariableSpec> specs, const Eigen::VectorXd& y,
                                Family family, const SelectionOptions& options = {});

}  // namespace resrwa
