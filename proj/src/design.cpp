#include "resrwa/design.hpp"

#include <algorithm>
#include <set>

#include "resrwa/error.hpp"

namespace resrwa {

std::string_view to_string(VariableRole role) {
    switch (role) {
        case VariableRole::Control: return "Control";
        case VariableRole::Fixed: return "Fixed";
        case VariableRole::Free: return "Free";
    }
    return "Unknown";
}

void validate_specs(std::span<const VariableSpec> specs) {
    std::set<std::string> seen;
    for (const auto& s : specs) {
        if (s.name.empty()) throw Error(ErrorKind::InvalidArgument, "variable with empty name");
        if (!seen.insert(s.name).second) throw Error(ErrorKind::DuplicateName, "variable '" + s.name + "' listed twice");
        if (s.knots != 1 && s.knots != 3 && s.knots != 4 && s.knots != 5) {
            throw Error(ErrorKind::UnsupportedKnotCount,
                        "variable '" + s.name + "' requests " + std::to_string(s.knots) + " knots");
        }
        if (s.role == VariableRole::Control && s.knots != 1) {
            throw Error(ErrorKind::InvalidArgument, "control variable '" + s.name + "' must be linear (knots = 1)");
        }
    }
}

TermId TermId::control(std::string name) { return TermId{TermKind::ControlMain, std::move(name), {}}; }

TermId TermId::main(std::string name) { return TermId{TermKind::Main, std::move(name), {}}; }

TermId TermId::interaction(std::string a, std::string b) {
    if (a == b) throw Error(ErrorKind::InvalidArgument, "self-interaction of '" + a + "'");
    if (b < a) std::swap(a, b);
    return TermId{TermKind::Interaction, std::move(a), std::move(b)};
}

std::string TermId::label() const { return is_interaction() ? first + " x " + second : first; }

const TermGroup* DesignMatrix::find(const TermId& term) const {
    const auto it = std::find_if(groups.begin(), groups.end(), [&](const TermGroup& g) { return g.term == term; });
    return it == groups.end() ? nullptr : &*it;
}

const TermGroup& DesignMatrix::group_of_column(Eigen::Index col) const {
    for (const auto& g : groups) {
        if (col >= g.first && col < g.end()) return g;
    }
    throw Error(ErrorKind::InvalidArgument, "column " + std::to_string(col) + " is outside the design");
}

void DesignMatrix::append(const TermBlock& block) {
    if (find(block.term)) throw Error(ErrorKind::DuplicateName, "term " + block.term.label() + " already in design");
    if (values.cols() > 0 && block.columns.rows() != values.rows()) {
        throw Error(ErrorKind::InvalidArgument, "term " + block.term.label() + " has mismatched row count");
    }
    const Eigen::Index first = values.cols();
    const Eigen::Index width = block.columns.cols();
    Eigen::MatrixXd grown(block.columns.rows(), first + width);
    if (first > 0) grown.leftCols(first) = values;
    grown.rightCols(width) = block.columns;
    values = std::move(grown);
    groups.push_back(TermGroup{block.term, first, width, block.labels});
}

TermBlock main_block(const ColumnTable& data, const VariableSpec& spec) {
    const Eigen::VectorXd& x = data.column(spec.name);
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));

    TermBlock block;
    block.term = spec.role == VariableRole::Control ? TermId::control(spec.name) : TermId::main(spec.name);
    KnotSet knots;
    if (spec.knots > 1) {
        try {
            knots = compute_knots(xs, spec.knots);
        } catch (const Error& e) {
            throw Error(e.kind(), "variable '" + spec.name + "': " + e.detail());
        }
    }
    SplineBasis basis = spline_basis(xs, knots);
    block.columns = std::move(basis.columns);
    for (const auto& l : basis.labels) block.labels.push_back(ColumnLabel{l, std::nullopt});
    return block;
}

DesignMatrix build_main_effects(const ColumnTable& data, std::span<const VariableSpec> specs) {
    validate_specs(specs);
    DesignMatrix design;
    design.values.resize(data.rows(), 0);
    for (const auto& spec : specs) design.append(main_block(data, spec));
    return design;
}

Eigen::Index restricted_interaction_width(Eigen::Index width_a, Eigen::Index width_b) {
    return width_a * width_b - (width_a - 1) * (width_b - 1);
}

TermBlock restricted_interaction(const TermBlock& a, const TermBlock& b) {
    for (const TermBlock* p : {&a, &b}) {
        if (p->term.kind == TermKind::ControlMain) {
            throw Error(ErrorKind::ControlInInteraction, "control term '" + p->term.first + "' cannot interact");
        }
        if (p->term.kind != TermKind::Main) {
            throw Error(ErrorKind::InvalidArgument, "interaction factors must be main effects, got " + p->term.label());
        }
    }
    if (a.columns.rows() != b.columns.rows()) {
        throw Error(ErrorKind::InvalidArgument, "interaction factors have different row counts");
    }

    const TermId term = TermId::interaction(a.term.first, b.term.first);
    const TermBlock& lhs = term.first == a.term.first ? a : b;
    const TermBlock& rhs = term.first == a.term.first ? b : a;

    TermBlock out;
    out.term = term;
    out.columns.resize(lhs.columns.rows(), restricted_interaction_width(lhs.columns.cols(), rhs.columns.cols()));
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < lhs.columns.cols(); ++i) {
        for (Eigen::Index j = 0; j < rhs.columns.cols(); ++j) {
            const ColumnLabel label{lhs.labels[i].first, rhs.labels[j].first};
            if (label.doubly_nonlinear()) continue;
            out.columns.col(c++) = lhs.columns.col(i).cwiseProduct(rhs.columns.col(j));
            out.labels.push_back(label);
        }
    }
    return out;
}

std::int64_t count_full_model_parameters(int p, int k) {
    // p (p - 1) is even, so the k/2 factor stays integral.
    const std::int64_t pp = p;
    return 1 + k * pp + k * (pp * (pp - 1) / 2);
}

TermCatalog::TermCatalog(const ColumnTable& data, std::vector<VariableSpec> specs)
    : specs_(std::move(specs)), rows_(data.rows()) {
    validate_specs(specs_);
    mains_.reserve(specs_.size());
    for (const auto& s : specs_) mains_.push_back(main_block(data, s));

    const auto eligible = interaction_variables();
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        for (std::size_t j = i + 1; j < eligible.size(); ++j) {
            TermBlock block = restricted_interaction(mains_[index_of(eligible[i])], mains_[index_of(eligible[j])]);
            const TermId id = block.term;
            interactions_.emplace(id, std::move(block));
        }
    }
}

int TermCatalog::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].name == name) return static_cast<int>(i);
    }
    throw Error(ErrorKind::MissingColumn, "variable '" + name + "' is not in the variable list");
}

const VariableSpec& TermCatalog::spec(const std::string& name) const { return specs_[index_of(name)]; }

TermId TermCatalog::main_term(const VariableSpec& s) const {
    return s.role == VariableRole::Control ? TermId::control(s.name) : TermId::main(s.name);
}

std::vector<std::string> TermCatalog::interaction_variables() const {
    std::vector<std::string> out;
    for (const auto& s : specs_) {
        if (s.role != VariableRole::Control) out.push_back(s.name);
    }
    return out;
}

const TermBlock& TermCatalog::block(const TermId& term) const {
    if (term.is_interaction()) {
        const auto it = interactions_.find(term);
        if (it == interactions_.end()) {
            // Only control factors are missing from the catalog.
            throw Error(ErrorKind::ControlInInteraction, "interaction " + term.label() + " involves a control variable");
        }
        return it->second;
    }
    const auto& m = mains_[index_of(term.first)];
    if (m.term != term) throw Error(ErrorKind::InvalidArgument, "term " + term.label() + " does not match its role");
    return m;
}

std::pair<int, int> TermCatalog::order_key(const TermId& term) const {
    if (!term.is_interaction()) return {-1, index_of(term.first)};
    const int a = index_of(term.first);
    const int b = index_of(term.second);
    return {std::min(a, b), std::max(a, b)};
}

std::vector<TermId> TermCatalog::canonical_order(std::vector<TermId> terms) const {
    std::sort(terms.begin(), terms.end(),
              [&](const TermId& x, const TermId& y) { return order_key(x) < order_key(y); });
    return terms;
}

DesignMatrix TermCatalog::design(const std::vector<TermId>& terms) const {
    const auto ordered = canonical_order(terms);
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i] == ordered[i - 1]) throw Error(ErrorKind::DuplicateName, "term " + ordered[i].label() + " requested twice");
    }
    Eigen::Index width = 0;
    for (const auto& t : ordered) width += block(t).columns.cols();

    DesignMatrix d;
    d.values.resize(rows_, width);
    Eigen::Index c = 0;
    for (const auto& t : ordered) {
        const TermBlock& b = block(t);
        d.values.middleCols(c, b.columns.cols()) = b.columns;
        d.groups.push_back(TermGroup{t, c, b.columns.cols(), b.labels});
        c += b.columns.cols();
    }
    return d;
}

}  // namespace resrwa
