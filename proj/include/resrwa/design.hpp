#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resrwa/splines.hpp"
#include "resrwa/table.hpp"

namespace resrwa {

enum class VariableRole { Control, Fixed, Free };

std::string_view to_string(VariableRole role);

struct VariableSpec {
    std::string name;
    VariableRole role = VariableRole::Free;
    int knots = 1;  // 1 = linear, otherwise 3, 4 or 5
};

/// Throws on duplicate names, unsupported knot counts, or a spline control.
void validate_specs(std::span<const VariableSpec> specs);

enum class TermKind { ControlMain, Main, Interaction };

/// Identity of one model term. Interactions store their variable names in
/// lexicographic order, so (a, b) and (b, a) compare equal.
struct TermId {
    TermKind kind = TermKind::Main;
    std::string first;
    std::string second;  // empty unless kind == Interaction

    static TermId control(std::string name);
    static TermId main(std::string name);
    static TermId interaction(std::string a, std::string b);

    bool is_interaction() const { return kind == TermKind::Interaction; }
    std::string label() const;

    friend auto operator<=>(const TermId&, const TermId&) = default;
    friend bool operator==(const TermId&, const TermId&) = default;
};

/// One design column. Main-effect columns carry a single basis label;
/// interaction columns carry the label from each factor, in the order of
/// TermId::first and TermId::second.
struct ColumnLabel {
    BasisLabel first;
    std::optional<BasisLabel> second;

    bool doubly_nonlinear() const { return second && first.nonlinear() && second->nonlinear(); }
    friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
};

/// Columns of a single term before they are placed in a design.
struct TermBlock {
    TermId term;
    Eigen::MatrixXd columns;
    std::vector<ColumnLabel> labels;
};

struct TermGroup {
    TermId term;
    Eigen::Index first = 0;
    Eigen::Index width = 0;
    std::vector<ColumnLabel> labels;

    Eigen::Index end() const { return first + width; }
};

/// Column block plus the map from column ranges to terms. The intercept is
/// not stored; fitters add it.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<TermGroup> groups;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    const TermGroup* find(const TermId& term) const;
    /// Group owning column `col`. Throws InvalidArgument when out of range.
    const TermGroup& group_of_column(Eigen::Index col) const;

    void append(const TermBlock& block);
};

/// Main-effect block for one variable: the raw column for controls and
/// linear variables, the spline basis otherwise.
TermBlock main_block(const ColumnTable& data, const VariableSpec& spec);

DesignMatrix build_main_effects(const ColumnTable& data, std::span<const VariableSpec> specs);

/// Products of every column pair of two main-effect blocks, except pairs
/// where both factors are nonlinear spline terms. Argument order does not
/// matter: the result is laid out by the canonical TermId.
TermBlock restricted_interaction(const TermBlock& a, const TermBlock& b);

/// Number of columns restricted_interaction produces for blocks of the
/// given widths (a width of w has one linear and w-1 nonlinear columns).
Eigen::Index restricted_interaction_width(Eigen::Index width_a, Eigen::Index width_b);

/// 1 + k p + (k/2) p (p-1): the parameter count of a full pairwise model as
/// usually quoted. It counts k columns per main effect while the basis has
/// k-1, so it is a diagnostic only; real widths come from the group map.
std::int64_t count_full_model_parameters(int p, int k);

/// Blocks for every term reachable from a variable list, in a
/// fixed canonical order: mains in spec order, then interactions ordered by
/// the spec positions of their factors.
class TermCatalog {
public:
    TermCatalog(const ColumnTable& data, std::vector<VariableSpec> specs);

    const std::vector<VariableSpec>& specs() const { return specs_; }
    Eigen::Index rows() const { return rows_; }

    const VariableSpec& spec(const std::string& name) const;
    TermId main_term(const VariableSpec& spec) const;
    /// Interaction-eligible variables (fixed and free), in spec order.
    std::vector<std::string> interaction_variables() const;

    const TermBlock& block(const TermId& term) const;
    /// Order key used to lay out designs.
    std::pair<int, int> order_key(const TermId& term) const;
    std::vector<TermId> canonical_order(std::vector<TermId> terms) const;

    DesignMatrix design(const std::vector<TermId>& terms) const;

private:
    int index_of(const std::string& name) const;

    std::vector<VariableSpec> specs_;
    std::vector<TermBlock> mains_;
    Eigen::Index rows_ = 0;
    std::map<TermId, TermBlock> interactions_;
};

}  // namespace resrwa
