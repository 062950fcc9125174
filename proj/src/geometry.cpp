#include "qcsense/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qcsense/exact_lp.hpp"
#include "qcsense/parallel.hpp"

namespace qcsense {

namespace {

constexpr double kDelta = 1e-3;
constexpr double kCenterRadius = 1.2;

void require_dimension(const Point& p, int d) {
    if (p.size() != d) throw std::invalid_argument("point dimension does not match");
}

Point normal_vector(int d, Rng& rng) {
    Point v(d);
    for (int j = 0; j < d; ++j) v[j] = rng.normal();
    return v;
}

Point unit_direction(int d, Rng& rng) {
    while (true) {
        Point v = normal_vector(d, rng);
        const double norm = v.norm();
        if (norm > 0) return v / norm;
    }
}

}  // namespace

std::string_view to_string(PairFamily family) {
    return family == PairFamily::linear ? "linear" : "quadratic";
}

PairFamily parse_family(std::string_view name) {
    if (name == "linear") return PairFamily::linear;
    if (name == "quadratic") return PairFamily::quadratic;
    throw std::invalid_argument("unknown family '" + std::string(name) + "' (expected linear or quadratic)");
}

double RegularPairSpec::value(std::size_t i, const Point& x) const {
    if (family == PairFamily::linear) return directions[i].dot(x);
    const Point y = x - centers[i];
    return y.dot(matrices[i] * y);
}

Point RegularPairSpec::gradient(std::size_t i, const Point& x) const {
    if (family == PairFamily::linear) return directions[i];
    return 2.0 * (matrices[i] * (x - centers[i]));
}

void RegularPairSpec::validate() const {
    if (d < 1) throw std::invalid_argument("dimension d must be at least 1");
    if (family == PairFamily::linear) {
        if (directions.empty()) throw std::invalid_argument("linear pair needs at least one direction");
        for (const auto& v : directions) {
            require_dimension(v, d);
            if (!v.allFinite()) throw std::invalid_argument("direction has non-finite entries");
            if (v.isZero(0)) throw std::invalid_argument("direction must be nonzero");
        }
        return;
    }
    if (centers.empty()) throw std::invalid_argument("quadratic pair needs at least one function");
    if (centers.size() != matrices.size()) throw std::invalid_argument("centers and matrices differ in count");
    for (std::size_t i = 0; i < centers.size(); ++i) {
        require_dimension(centers[i], d);
        const auto& A = matrices[i];
        if (A.rows() != d || A.cols() != d) throw std::invalid_argument("matrix shape does not match d");
        if (!A.allFinite() || !centers[i].allFinite()) throw std::invalid_argument("non-finite quadratic data");
        if (!A.isApprox(A.transpose(), 1e-12)) throw std::invalid_argument("matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff()))
            throw std::invalid_argument("matrix must be positive semidefinite");
    }
}

RegularPairSpec random_quadratic_pair(int d, std::size_t m, std::uint64_t seed) {
    if (d < 1 || m < 1) throw std::invalid_argument("d and m must be at least 1");
    RegularPairSpec spec;
    spec.d = d;
    spec.family = PairFamily::quadratic;
    spec.seed = seed;
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        Eigen::MatrixXd G(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) G(r, c) = rng.normal();
        Eigen::MatrixXd A = G.transpose() * G;
        A = 0.5 * (A + A.transpose());
        A.diagonal().array() += kDelta;
        spec.matrices.push_back(std::move(A));
        spec.centers.push_back(kCenterRadius * sample_ball_point(d, rng));
    }
    return spec;
}

RegularPairSpec random_linear_pair(int d, std::size_t m, std::uint64_t seed) {
    if (d < 1 || m < 1) throw std::invalid_argument("d and m must be at least 1");
    Rng rng(seed);
    std::vector<Point> directions;
    while (directions.size() < m) {
        Point v = normal_vector(d, rng);
        if (!v.isZero(0)) directions.push_back(std::move(v));
    }
    return linear_pair(std::move(directions), seed);
}

RegularPairSpec linear_pair(std::vector<Point> directions, std::uint64_t seed) {
    RegularPairSpec spec;
    spec.family = PairFamily::linear;
    spec.d = directions.empty() ? 0 : static_cast<int>(directions.front().size());
    spec.seed = seed;
    spec.directions = std::move(directions);
    spec.validate();
    return spec;
}

Point sample_ball_point(int d, Rng& rng) {
    const Point u = unit_direction(d, rng);
    return std::pow(rng.uniform(), 1.0 / d) * u;
}

SampledPair sample_pair(const RegularPairSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("sample size n must be at least 1");
    const std::size_t m = spec.m();
    SampledPair out;
    out.cloud.d = spec.d;
    Rng rng(seed);
    std::vector<double> values(m * n);
    auto fill_column = [&](std::size_t a) {
        for (std::size_t i = 0; i < m; ++i) values[i * n + a] = spec.value(i, out.cloud.points[a]);
    };
    for (std::size_t a = 0; a < n; ++a) {
        out.cloud.points.push_back(sample_ball_point(spec.d, rng));
        fill_column(a);
    }
    // redraw a later point whenever it ties an earlier one within some row
    for (bool clean = false; !clean;) {
        clean = true;
        for (std::size_t i = 0; i < m && clean; ++i) {
            std::vector<std::size_t> order(n);
            for (std::size_t a = 0; a < n; ++a) order[a] = a;
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return values[i * n + x] < values[i * n + y] ||
                       (values[i * n + x] == values[i * n + y] && x < y);
            });
            for (std::size_t k = 1; k < n; ++k) {
                if (values[i * n + order[k]] != values[i * n + order[k - 1]]) continue;
                const std::size_t a = std::max(order[k], order[k - 1]);
                out.notes.push_back("redrew point " + std::to_string(a) + " after a tie in row " +
                                    std::to_string(i));
                out.cloud.points[a] = sample_ball_point(spec.d, rng);
                fill_column(a);
                clean = false;
                break;
            }
        }
    }
    out.matrix = DataMatrix(m, n, std::move(values));
    return out;
}

bool hull_membership(const Point& x, std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("point set must be nonempty");
    const int d = static_cast<int>(x.size());
    for (const auto& p : points) require_dimension(p, d);
    std::vector<std::vector<double>> A(d + 1, std::vector<double>(points.size()));
    std::vector<double> b(d + 1);
    for (int r = 0; r < d; ++r) {
        for (std::size_t j = 0; j < points.size(); ++j) A[r][j] = points[j][r];
        b[r] = x[r];
    }
    std::fill(A[d].begin(), A[d].end(), 1.0);
    b[d] = 1.0;
    return nonnegative_solution_exists(A, b);
}

bool check_sequence_realizable(std::span<const Point> points, std::span<const std::size_t> sequence) {
    const std::size_t n = points.size();
    if (sequence.size() != n) throw std::invalid_argument("sequence must be a permutation of the points");
    std::vector<char> seen(n, 0);
    for (std::size_t s : sequence) {
        if (s >= n || seen[s]) throw std::invalid_argument("sequence must be a permutation of the points");
        seen[s] = 1;
    }
    std::vector<Point> prefix;
    for (std::size_t k = 0; k < n; ++k) {
        const Point& x = points[sequence[k]];
        if (!prefix.empty() && hull_membership(x, prefix)) return false;
        prefix.push_back(x);
    }
    return true;
}

double hull_distance(const Point& x, std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("point set must be nonempty");
    const int d = static_cast<int>(x.size());
    const std::size_t n = points.size();
    Eigen::MatrixXd Q(d, static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        require_dimension(points[j], d);
        Q.col(static_cast<Eigen::Index>(j)) = points[j] - x;
    }
    const double scale = std::max(1.0, Q.colwise().squaredNorm().maxCoeff());
    constexpr double tol = 1e-10;
    constexpr int max_iterations = 1000;

    // Wolfe's minimum-norm-point method on the translated points
    Eigen::Index start;
    Q.colwise().squaredNorm().minCoeff(&start);
    std::vector<Eigen::Index> active{start};
    std::vector<double> lambda{1.0};
    Point y = Q.col(start);

    for (int major = 0; major < max_iterations; ++major) {
        if (y.squaredNorm() == 0.0) return 0.0;
        Eigen::Index j;
        (Q.transpose() * y).minCoeff(&j);
        if (y.dot(Q.col(j)) >= y.squaredNorm() - tol * scale) break;
        if (std::find(active.begin(), active.end(), j) != active.end()) break;
        active.push_back(j);
        lambda.push_back(0.0);

        for (int minor = 0; minor < max_iterations; ++minor) {
            const auto k = static_cast<Eigen::Index>(active.size());
            Eigen::MatrixXd S(d, k);
            for (Eigen::Index c = 0; c < k; ++c) S.col(c) = Q.col(active[c]);
            Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
            K.topLeftCorner(k, k) = S.transpose() * S;
            K.block(0, k, k, 1).setOnes();
            K.block(k, 0, 1, k).setOnes();
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
            rhs[k] = 1.0;
            const Eigen::VectorXd alpha = K.completeOrthogonalDecomposition().solve(rhs).head(k);

            if ((alpha.array() > tol).all()) {
                for (Eigen::Index c = 0; c < k; ++c) lambda[c] = alpha[c];
                break;
            }
            double theta = 1.0;
            for (Eigen::Index c = 0; c < k; ++c) {
                if (alpha[c] <= tol) theta = std::min(theta, lambda[c] / (lambda[c] - alpha[c]));
            }
            for (Eigen::Index c = 0; c < k; ++c) lambda[c] = theta * alpha[c] + (1.0 - theta) * lambda[c];
            std::vector<Eigen::Index> kept;
            std::vector<double> kept_lambda;
            for (Eigen::Index c = 0; c < k; ++c) {
                if (lambda[c] > tol) {
                    kept.push_back(active[c]);
                    kept_lambda.push_back(lambda[c]);
                }
            }
            if (kept.empty()) {
                kept.push_back(active[0]);
                kept_lambda.push_back(1.0);
            }
            active = std::move(kept);
            lambda = std::move(kept_lambda);
        }
        double total = 0.0;
        for (double l : lambda) total += l;
        y.setZero();
        for (std::size_t c = 0; c < active.size(); ++c) y += (lambda[c] / total) * Q.col(active[c]);
    }
    return y.norm();
}

RealizedFunction::RealizedFunction(std::vector<Point> ordered_points, std::vector<double> weights)
    : ordered_(std::move(ordered_points)), weights_(std::move(weights)) {
    if (ordered_.size() != weights_.size() || ordered_.empty())
        throw std::invalid_argument("one weight per point is required");
}

double RealizedFunction::operator()(const Point& x) const {
    double total = 0.0;
    for (std::size_t k = 0; k < ordered_.size(); ++k) {
        total += weights_[k] * hull_distance(x, std::span<const Point>(ordered_.data(), k + 1));
    }
    return total;
}

RealizedFunction realize_function(std::span<const Point> points, std::span<const std::size_t> sequence) {
    if (!check_sequence_realizable(points, sequence))
        throw std::invalid_argument("sequence is not realizable: a point lies in the hull of its predecessors");
    const std::size_t n = points.size();
    std::vector<Point> ordered;
    for (std::size_t s : sequence) ordered.push_back(points[s]);
    auto dist = [&](std::size_t k, std::size_t p) {  // d_k at ordered point p, both 0-based
        return hull_distance(ordered[p], std::span<const Point>(ordered.data(), k + 1));
    };
    std::vector<double> h(n, 1.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        double excess = 0.0;
        for (std::size_t j = 0; j < k; ++j) excess += h[j] * (dist(j, k) - dist(j, k + 1));
        const double gap = dist(k, k + 1);
        if (!(gap > 0)) throw std::invalid_argument("sequence is not realizable: zero hull distance");
        h[k] = 1.0 + std::max(excess, 0.0) / gap;
    }
    return RealizedFunction(std::move(ordered), std::move(h));
}

std::string_view to_string(ConeClass c) {
    switch (c) {
        case ConeClass::full: return "full";
        case ConeClass::salient: return "salient";
        case ConeClass::flat_proper: return "flat-proper";
    }
    return "?";
}

ConeClass cone_classify(std::span<const Point> vectors) {
    if (vectors.empty()) throw std::invalid_argument("vector set must be nonempty");
    const int d = static_cast<int>(vectors.front().size());
    const std::size_t k = vectors.size();
    for (const auto& v : vectors) {
        require_dimension(v, d);
        if (!v.allFinite()) throw std::invalid_argument("vectors must be finite");
        if (v.isZero(0)) throw std::invalid_argument("zero vector in cone generators");
    }
    std::vector<std::vector<double>> A(d, std::vector<double>(k));
    for (int r = 0; r < d; ++r)
        for (std::size_t j = 0; j < k; ++j) A[r][j] = vectors[j][r];

    bool full = true;
    for (int r = 0; r < d && full; ++r) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> b(d, 0.0);
            b[r] = sign;
            if (!nonnegative_solution_exists(A, b)) {
                full = false;
                break;
            }
        }
    }
    if (full) return ConeClass::full;

    // Gordan: the cone contains a line iff 0 is a proper convex combination
    A.emplace_back(k, 1.0);
    std::vector<double> b(d + 1, 0.0);
    b[d] = 1.0;
    return nonnegative_solution_exists(A, b) ? ConeClass::flat_proper : ConeClass::salient;
}

CentralMembership cent1_membership(const RegularPairSpec& spec, const Point& x) {
    require_dimension(x, spec.d);
    CentralMembership result;
    std::vector<Point> gradients;
    for (std::size_t i = 0; i < spec.m(); ++i) {
        Point g = spec.gradient(i, x);
        if (g.isZero(0)) {
            result.zero_gradient = true;
            continue;
        }
        gradients.push_back(std::move(g));
    }
    result.member = !gradients.empty() && cone_classify(gradients) == ConeClass::full;
    return result;
}

CentralMembership cent0_membership(const RegularPairSpec& spec, const Point& x) {
    require_dimension(x, spec.d);
    CentralMembership result;
    std::vector<Point> gradients;
    for (std::size_t i = 0; i < spec.m(); ++i) {
        Point g = spec.gradient(i, x);
        if (g.isZero(0)) {
            result.zero_gradient = true;
            continue;
        }
        gradients.push_back(std::move(g));
    }
    // a vanishing gradient of a convex sensor means x minimizes it, so its
    // strict sublevel set is empty
    if (result.zero_gradient) {
        result.member = true;
        return result;
    }
    const ConeClass cls = cone_classify(gradients);
    if (spec.family == PairFamily::linear) {
        result.member = cls != ConeClass::salient;
        return result;
    }
    if (cls == ConeClass::full) {
        result.member = true;
        return result;
    }
    if (cls == ConeClass::salient) {
        result.member = false;
        return result;
    }

    result.approximate = true;
    std::vector<double> level(spec.m());
    for (std::size_t i = 0; i < spec.m(); ++i) level[i] = spec.value(i, x);
    auto below_all = [&](const Point& y) {
        if (y.squaredNorm() >= 1.0) return false;
        for (std::size_t i = 0; i < spec.m(); ++i)
            if (!(spec.value(i, y) < level[i])) return false;
        return true;
    };
    Rng rng(derive_seed(spec.seed, 0x63656e74));
    for (int probe = 0; probe < 20000; ++probe) {
        if (below_all(sample_ball_point(spec.d, rng))) return result;
        const Point w = unit_direction(spec.d, rng);
        for (double step = 1e-1; step > 1e-7; step *= 0.1) {
            if (below_all(x + step * w)) return result;
        }
    }
    result.member = true;
    return result;
}

bool general_direction_check(std::span<const Point> vectors, int d) {
    if (vectors.empty()) throw std::invalid_argument("vector set must be nonempty");
    const std::size_t n = vectors.size();
    const std::size_t max_size = std::min<std::size_t>(static_cast<std::size_t>(std::max(d, 0)), n);
    std::vector<std::size_t> pick;
    // depth-first over subsets in lexicographic order; any dependent subset
    // makes all its supersets dependent, so prune there
    auto independent = [&](const std::vector<std::size_t>& subset) {
        std::vector<std::vector<double>> rows;
        for (std::size_t idx : subset) {
            const Point& v = vectors[idx];
            rows.emplace_back(v.data(), v.data() + v.size());
        }
        return exact_rank(rows) == static_cast<int>(subset.size());
    };
    auto search = [&](auto&& self, std::size_t from) -> bool {
        if (pick.size() == max_size) return true;
        for (std::size_t i = from; i < n; ++i) {
            pick.push_back(i);
            const bool ok = independent(pick) && self(self, i + 1);
            pick.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return search(search, 0);
}

MonteCarloEstimate mc_measure(int d, const std::function<bool(const Point&)>& predicate, std::size_t n_mc,
                              std::uint64_t seed, unsigned threads) {
    if (d < 1) throw std::invalid_argument("dimension d must be at least 1");
    if (n_mc < 1) throw std::invalid_argument("n_mc must be at least 1");
    constexpr std::size_t partition = 4096;
    const std::size_t parts = (n_mc + partition - 1) / partition;
    std::vector<std::size_t> hits(parts, 0);
    parallel_for(parts, threads, [&](std::size_t p) {
        Rng rng(derive_seed(seed, p));
        const std::size_t count = std::min(partition, n_mc - p * partition);
        for (std::size_t s = 0; s < count; ++s) hits[p] += predicate(sample_ball_point(d, rng)) ? 1 : 0;
    });
    std::size_t total = 0;
    for (auto h : hits) total += h;
    MonteCarloEstimate est;
    est.samples = n_mc;
    est.fraction = static_cast<double>(total) / static_cast<double>(n_mc);
    est.standard_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n_mc));
    return est;
}

std::vector<Point> simplex_barycenter_configuration(std::size_t n) {
    if (n < 3) throw std::invalid_argument("configuration needs n >= 3");
    const int dim = static_cast<int>(n - 2);
    std::vector<Point> points;
    points.push_back(Point::Zero(dim));
    for (int j = 0; j < dim; ++j) points.push_back(Point::Unit(dim, j));
    Point center = Point::Zero(dim);
    for (const auto& p : points) center += p;
    points.push_back(center / static_cast<double>(points.size()));
    return points;
}

}  // namespace qcsense
