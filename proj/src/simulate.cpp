#include "resrwa/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "resrwa/error.hpp"

namespace resrwa {

std::uint64_t dichotomize_seed(std::uint64_t seed) {
    // splitmix64 finaliser
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string_view to_string(SimModel model) {
    switch (model) {
        case SimModel::Ishigami: return "ishigami";
        case SimModel::MoonBase: return "moon-base";
        case SimModel::MoonC3: return "moon-c3";
    }
    return "unknown";
}

SimModel parse_sim_model(const std::string& name) {
    if (name == "ishigami") return SimModel::Ishigami;
    if (name == "moon-base") return SimModel::MoonBase;
    if (name == "moon-c3") return SimModel::MoonC3;
    throw Error(ErrorKind::InvalidArgument, "unknown model '" + name + "' (expected ishigami, moon-base, moon-c3)");
}

ColumnTable SimulatedDataset::to_table() const {
    ColumnTable t;
    for (Eigen::Index j = 0; j < x.cols(); ++j) t.add("X" + std::to_string(j + 1), x.col(j));
    t.add("y_g", y_g);
    t.add("y_b", y_b);
    return t;
}

double ishigami_value(double x1, double x2, double x3) {
    const double s2 = std::sin(x2);
    return std::sin(x1) + kIshigamiA * s2 * s2 + kIshigamiB * std::pow(x3, 4) * std::sin(x1);
}

Eigen::VectorXd dichotomize(const Eigen::VectorXd& y_g, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd y_b(y_g.size());
    for (Eigen::Index i = 0; i < y_g.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-y_g[i]));
        y_b[i] = rng.uniform() < p ? 1.0 : 0.0;
    }
    return y_b;
}

namespace {

Eigen::MatrixXd uniform_matrix(Eigen::Index n, Eigen::Index d, double lo, double hi, Rng& rng) {
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.uniform(lo, hi);
    }
    return x;
}

void require_rows(Eigen::Index n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 1, got " + std::to_string(n));
}

}  // namespace

SimulatedDataset ishigami(Eigen::Index n, std::uint64_t seed) {
    require_rows(n);
    Rng rng(seed);
    SimulatedDataset ds;
    ds.model = SimModel::Ishigami;
    ds.seed = seed;
    ds.x = uniform_matrix(n, 8, -std::numbers::pi, std::numbers::pi, rng);
    ds.y_g.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) ds.y_g[i] = ishigami_value(ds.x(i, 0), ds.x(i, 1), ds.x(i, 2));
    ds.y_b = dichotomize(ds.y_g, dichotomize_seed(seed));
    return ds;
}

double SmallTermTable::evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    double total = 0.0;
    for (const auto& t : terms) {
        const double xi = row[t.i - 1];
        switch (t.kind) {
            case SmallTermKind::Main: total += t.coefficient * xi; break;
            case SmallTermKind::Quad: total += t.coefficient * xi * xi; break;
            case SmallTermKind::Inter: total += t.coefficient * xi * row[t.j - 1]; break;
        }
    }
    return total;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

SmallTermTable read_small_terms(std::istream& in) {
    SmallTermTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        const auto bad = [&](const std::string& why) {
            return Error(ErrorKind::MalformedCoefficientTable, "line " + std::to_string(line_no) + ": " + why);
        };
        if (line_no == 1 && !cells.empty() && cells[0] == "term_kind") continue;
        if (cells.size() != 4) throw bad("expected 4 fields, got " + std::to_string(cells.size()));

        SmallTerm t;
        if (cells[0] == "main") t.kind = SmallTermKind::Main;
        else if (cells[0] == "quad") t.kind = SmallTermKind::Quad;
        else if (cells[0] == "inter") t.kind = SmallTermKind::Inter;
        else throw bad("unknown term kind '" + cells[0] + "'");

        if (!parse_number(cells[1], t.i) || t.i < 1 || t.i > kMoonDimension) throw bad("index i out of range");
        if (t.kind == SmallTermKind::Inter) {
            if (!parse_number(cells[2], t.j) || t.j < 1 || t.j > kMoonDimension) throw bad("index j out of range");
            if (t.i == t.j) throw bad("interaction of a variable with itself (use quad)");
        } else if (!cells[2].empty() && !parse_number(cells[2], t.j)) {
            throw bad("index j is not an integer");
        }
        if (!parse_number(cells[3], t.coefficient) || !std::isfinite(t.coefficient)) throw bad("bad coefficient");
        table.terms.push_back(t);
    }
    return table;
}

SmallTermTable read_small_terms_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedCoefficientTable, "cannot open '" + path + "'");
    return read_small_terms(in);
}

void write_small_terms(std::ostream& out, const SmallTermTable& table) {
    out << "term_kind,i,j,coefficient\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& t : table.terms) {
        const char* kind = t.kind == SmallTermKind::Main ? "main" : t.kind == SmallTermKind::Quad ? "quad" : "inter";
        out << kind << ',' << t.i << ',' << (t.kind == SmallTermKind::Inter ? t.j : 0) << ',' << t.coefficient << '\n';
    }
}

SmallTermTable synthetic_small_terms(std::uint64_t seed) {
    Rng rng(seed);
    SmallTermTable table;
    for (int i = 1; i <= kMoonDimension; ++i) table.terms.push_back({SmallTermKind::Main, i, 0, rng.uniform(-0.5, 0.5)});
    for (int i = 1; i <= kMoonDimension; ++i) {
        if (i != 19) table.terms.push_back({SmallTermKind::Quad, i, 0, rng.uniform(-0.5, 0.5)});
    }

    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= kMoonDimension; ++i) {
        for (int j = i + 1; j <= kMoonDimension; ++j) {
            const std::pair<int, int> p{i, j};
            if (p == std::pair{1, 18} || p == std::pair{1, 19} || p == std::pair{7, 12}) continue;
            pairs.push_back(p);
        }
    }
    // Fisher-Yates on the generator's own uniforms keeps this portable.
    for (std::size_t k = pairs.size() - 1; k > 0; --k) {
        const auto r = static_cast<std::size_t>(rng.uniform() * static_cast<double>(k + 1));
        std::swap(pairs[k], pairs[std::min(r, k)]);
    }
    pairs.resize(150);
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [i, j] : pairs) table.terms.push_back({SmallTermKind::Inter, i, j, rng.uniform(-0.5, 0.5)});
    return table;
}

double moon_active_value(const MoonActive& c, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const double x1 = row[0];
    const double x7 = row[6];
    const double x12 = row[11];
    const double x18 = row[17];
    const double x19 = row[18];
    return c.x1_x18 * x1 * x18 + c.x1_x19 * x1 * x19 + c.x19_sq * x19 * x19 + c.x7_x12 * x7 * x12;
}

SimulatedDataset moon(Eigen::Index n, std::uint64_t seed, SimModel variant, const SmallTermTable& small_terms) {
    require_rows(n);
    if (variant == SimModel::Ishigami) throw Error(ErrorKind::InvalidArgument, "moon() needs a Moon variant");
    const MoonActive& active = variant == SimModel::MoonC3 ? kMoonC3 : kMoonBase;

    Rng rng(seed);
    SimulatedDataset ds;
    ds.model = variant;
    ds.seed = seed;
    ds.x = uniform_matrix(n, kMoonDimension, 0.0, 1.0, rng);
    ds.y_g.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ds.y_g[i] = moon_active_value(active, ds.x.row(i)) + small_terms.evaluate(ds.x.row(i));
    }
    ds.y_b = dichotomize(ds.y_g, dichotomize_seed(seed));
    return ds;
}

SimulatedDataset simulate(SimModel model, Eigen::Index n, std::uint64_t seed, const SmallTermTable& small_terms) {
    return model == SimModel::Ishigami ? ishigami(n, seed) : moon(n, seed, model, small_terms);
}

}  // namespace resrwa
