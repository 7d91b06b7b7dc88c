#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resrwa/table.hpp"

namespace resrwa {

/// Seedable generator with a fixed algorithm (64-bit Mersenne Twister) and a
/// fixed uniform mapping, so datasets are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Seed of the Bernoulli stream used when a simulator dichotomizes its own
/// output, derived from the dataset seed.
std::uint64_t dichotomize_seed(std::uint64_t seed);

enum class SimModel { Ishigami, MoonBase, MoonC3 };

std::string_view to_string(SimModel model);
/// Accepts "ishigami", "moon-base", "moon-c3". Throws InvalidArgument.
SimModel parse_sim_model(const std::string& name);

struct SimulatedDataset {
    SimModel model = SimModel::Ishigami;
    std::uint64_t seed = 0;
    Eigen::MatrixXd x;  // n x d
    Eigen::VectorXd y_g;
    Eigen::VectorXd y_b;

    /// Columns X1..Xd, y_g, y_b.
    ColumnTable to_table() const;
};

inline constexpr double kIshigamiA = 7.0;
inline constexpr double kIshigamiB = 0.1;

double ishigami_value(double x1, double x2, double x3);

/// X1..X8 i.i.d. Uniform(-pi, pi); only X1, X2, X3 enter the response.
SimulatedDataset ishigami(Eigen::Index n, std::uint64_t seed);

/// Bernoulli(1 / (1 + exp(-y))) draws from a generator seeded with `seed`.
Eigen::VectorXd dichotomize(const Eigen::VectorXd& y_g, std::uint64_t seed);

enum class SmallTermKind { Main, Quad, Inter };

/// One low-impact term of the Moon function; indices are 1-based.
struct SmallTerm {
    SmallTermKind kind = SmallTermKind::Main;
    int i = 1;
    int j = 0;  // second index for Inter, unused otherwise
    double coefficient = 0.0;
};

struct SmallTermTable {
    std::vector<SmallTerm> terms;

    /// Contribution of the table at one row of X (20 columns).
    double evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

inline constexpr int kMoonDimension = 20;

/// Reads `term_kind,i,j,coefficient` rows (header optional). Throws
/// MalformedCoefficientTable with the line number on any bad row.
SmallTermTable read_small_terms(std::istream& in);
SmallTermTable read_small_terms_file(const std::string& path);
void write_small_terms(std::ostream& out, const SmallTermTable& table);

/// 189 stand-in terms with i.i.d. Uniform(-0.5, 0.5) coefficients: 20 mains,
/// 19 quadratics (all but X19) and 150 interactions drawn from the pairs
/// other than (1,18), (1,19) and (7,12).
SmallTermTable synthetic_small_terms(std::uint64_t seed);

/// Coefficients of the four active Moon terms.
struct MoonActive {
    double x1_x18;
    double x1_x19;
    double x19_sq;
    double x7_x12;
};

inline constexpr MoonActive kMoonBase{-19.71, 23.72, -13.34, 28.99};
inline constexpr MoonActive kMoonC3{-59.13, 71.16, -40.02, 86.97};

double moon_active_value(const MoonActive& c, const Eigen::Ref<const Eigen::RowVectorXd>& row);

/// X1..X20 i.i.d. Uniform(0, 1); response is the active part of the chosen
/// variant plus the small-term table.
SimulatedDataset moon(Eigen::Index n, std::uint64_t seed, SimModel variant, const SmallTermTable& small_terms = {});

/// Dispatch on the model name used by the CLI.
SimulatedDataset simulate(SimModel model, Eigen::Index n, std::uint64_t seed, const SmallTermTable& small_terms = {});

}  // namespace resrwa
