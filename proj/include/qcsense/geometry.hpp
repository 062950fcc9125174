#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcsense/ingest.hpp"
#include "qcsense/random.hpp"

namespace qcsense {

using Point = Eigen::VectorXd;

enum class PairFamily { linear, quadratic };

std::string_view to_string(PairFamily family);
PairFamily parse_family(std::string_view name);

/// Synthetic sensing setup on the open unit d-ball with the uniform measure.
/// Quadratic sensors are f_i(x) = (x - c_i)^T A_i (x - c_i) with A_i
/// symmetric positive semidefinite; linear sensors are f_i(x) = <v_i, x>.
struct RegularPairSpec {
    int d = 0;
    PairFamily family = PairFamily::quadratic;
    std::uint64_t seed = 0;
    std::vector<Point> centers;              ///< quadratic
    std::vector<Eigen::MatrixXd> matrices;   ///< quadratic
    std::vector<Point> directions;           ///< linear

    std::size_t m() const { return family == PairFamily::linear ? directions.size() : centers.size(); }
    double value(std::size_t i, const Point& x) const;
    Point gradient(std::size_t i, const Point& x) const;

    /// Throws std::invalid_argument unless the invariants hold.
    void validate() const;
};

/// A_i = G^T G + 1e-3 I with standard normal G; c_i uniform in the ball of radius 1.2.
RegularPairSpec random_quadratic_pair(int d, std::size_t m, std::uint64_t seed);
/// v_i standard normal.
RegularPairSpec random_linear_pair(int d, std::size_t m, std::uint64_t seed);
RegularPairSpec linear_pair(std::vector<Point> directions, std::uint64_t seed = 0);

struct PointCloud {
    int d = 0;
    std::vector<Point> points;
};

/// Uniform point strictly inside the unit d-ball.
Point sample_ball_point(int d, Rng& rng);

struct SampledPair {
    PointCloud cloud;
    DataMatrix matrix;
    std::vector<std::string> notes;  ///< points redrawn because of floating-point ties
};

/// n i.i.d. uniform points and M_ia = f_i(x_a); deterministic in `seed`.
SampledPair sample_pair(const RegularPairSpec& spec, std::size_t n, std::uint64_t seed);

/// Exact test of x in conv(points) by rational LP feasibility.
bool hull_membership(const Point& x, std::span<const Point> points);

/// True iff point s[k] lies outside conv(s[0..k-1]) for every k >= 1
/// (0-based indices into `points`).
bool check_sequence_realizable(std::span<const Point> points, std::span<const std::size_t> sequence);

/// Euclidean distance from x to conv(points) by Wolfe's minimum-norm-point
/// active-set method (tolerance 1e-10, iteration guarded).
double hull_distance(const Point& x, std::span<const Point> points);

/// Convex function f(x) = sum_k h_k dist(x, conv(x_{s_1}, ..., x_{s_k})) that
/// is strictly increasing along a realizable sequence.
class RealizedFunction {
public:
    RealizedFunction(std::vector<Point> ordered_points, std::vector<double> weights);

    /// Weights h_1..h_n in sequence order.
    const std::vector<double>& weights() const noexcept { return weights_; }
    double operator()(const Point& x) const;

private:
    std::vector<Point> ordered_;
    std::vector<double> weights_;
};

/// Builds the hull-distance function for a realizable sequence. Throws
/// std::invalid_argument if some point lies in the hull of its predecessors.
/// The last weight h_n is set to 1: it multiplies the distance to the full hull,
/// which vanishes at every sample point.
RealizedFunction realize_function(std::span<const Point> points, std::span<const std::size_t> sequence);

enum class ConeClass { full, salient, flat_proper };

std::string_view to_string(ConeClass c);

/// Classifies the convex cone generated by nonzero vectors: full (all of R^d),
/// flat_proper (contains a line but is not R^d) or salient (contains no line).
/// Decided exactly: full iff every +-e_j lies in the cone, flat iff 0 lies in
/// conv(V).
ConeClass cone_classify(std::span<const Point> vectors);

struct CentralMembership {
    bool member = false;
    bool zero_gradient = false;  ///< some sensor gradient vanished at the point
    bool approximate = false;    ///< decided by dense sampling instead of exactly
};

/// Gradients at x positively span R^d. Zero gradients are dropped first.
CentralMembership cent1_membership(const RegularPairSpec& spec, const Point& x);

/// The strict sublevel sets {f_i < f_i(x)} have empty common intersection in
/// the ball. Exact for the linear family and for convex quadratics except on
/// the measure-zero set where the gradient cone is flat but proper, where a
/// dense sampling fallback is used and flagged approximate.
CentralMembership cent0_membership(const RegularPairSpec& spec, const Point& x);

/// Every subset of at most d vectors is linearly independent (exact rank).
bool general_direction_check(std::span<const Point> vectors, int d);

struct MonteCarloEstimate {
    double fraction = 0.0;
    double standard_error = 0.0;  ///< sqrt(p (1 - p) / n_mc)
    std::size_t samples = 0;
};

/// Fraction of n_mc uniform ball samples satisfying `predicate`. Samples are
/// drawn in fixed-size partitions with derived seeds, so the result does not
/// depend on `threads`.
MonteCarloEstimate mc_measure(int d, const std::function<bool(const Point&)>& predicate, std::size_t n_mc,
                              std::uint64_t seed, unsigned threads = 1);
inline MonteCarloEstimate mc_measure(const RegularPairSpec& spec, const std::function<bool(const Point&)>& predicate,
                                     std::size_t n_mc, std::uint64_t seed, unsigned threads = 1) {
    return mc_measure(spec.d, predicate, n_mc, seed, threads);
}

/// Vertices of an (n-2)-simplex in R^{n-2} (origin and unit vectors) followed
/// by its barycenter: n points in total.
std::vector<Point> simplex_barycenter_configuration(std::size_t n);

}  // namespace qcsense
