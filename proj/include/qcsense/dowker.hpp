#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcsense/ingest.hpp"

namespace qcsense {

/// A simplex on vertex set {0, ..., m-1} stored as a bitmask (bit i = vertex i).
using Simplex = std::uint64_t;

inline constexpr std::size_t kMaxVertices = 64;

inline int simplex_size(Simplex s) noexcept { return std::popcount(s); }
inline int simplex_dimension(Simplex s) noexcept { return std::popcount(s) - 1; }
std::vector<int> simplex_vertices(Simplex s);
Simplex make_simplex(std::span<const int> vertices);

/// Raised when a vertex set or skeleton does not fit the bitmask representation.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Filtration parameters t_i = steps[i] / denominator, one per sensor.
///
/// Any value is accepted; the Dowker complex only compares ranks against
/// n * t_i, so negative steps act as 0 and steps above the denominator as 1.
struct GradeVector {
    std::vector<long long> steps;
    long long denominator = 1;

    /// Grid values floor(n * t_i) for real t_i in [0, 1]; the Dowker complex is
    /// right-continuous between grid points so this is exact.
    static GradeVector from_reals(std::span<const double> t, long long denominator);
    static GradeVector constant(std::size_t m, long long step, long long denominator);

    double value(std::size_t i) const { return static_cast<double>(steps[i]) / static_cast<double>(denominator); }
};

/// Enumeration of the nonempty subsets of {0..m-1} with at most
/// max_dimension + 1 vertices, ordered by (size, bitmask value). index() is
/// the position of a simplex in that order (colexicographic rank within a size
/// class).
class SkeletonIndex {
public:
    SkeletonIndex(std::size_t vertex_count, int max_dimension);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    int max_dimension() const noexcept { return max_dimension_; }
    std::size_t size() const noexcept { return simplices_.size(); }
    std::span<const Simplex> simplices() const noexcept { return simplices_; }
    Simplex simplex(std::size_t index) const { return simplices_[index]; }
    std::size_t index(Simplex s) const;
    /// offset(k) is the index of the first simplex with k vertices.
    std::size_t offset(int k) const { return offsets_[k]; }
    std::uint64_t binomial(int v, int k) const { return binomial_[v * (kMaxVertices + 2) + k]; }

private:
    std::size_t vertex_count_;
    int max_dimension_;
    std::vector<std::uint64_t> binomial_;
    std::vector<std::size_t> offsets_;
    std::vector<Simplex> simplices_;
};

/// Finite abstract simplicial complex on {0..m-1}. The empty face is implicit.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    /// Throws std::invalid_argument if the faces are not closed under subsets.
    SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> faces);

    /// Smallest complex containing `generators`, truncated to max_dimension.
    static SimplicialComplex generated_by(std::size_t vertex_count, std::span<const Simplex> generators,
                                          int max_dimension);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::span<const Simplex> faces() const noexcept { return faces_; }
    std::size_t size() const noexcept { return faces_.size(); }
    bool empty() const noexcept { return faces_.empty(); }
    bool contains(Simplex s) const;
    bool is_subcomplex_of(const SimplicialComplex& other) const;

    friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

private:
    std::size_t vertex_count_ = 0;
    std::vector<Simplex> faces_;  // sorted by (size, bitmask value)
};

/// Empirical Dowker complex at grade t built from the facets
/// sigma_a = {i : rank(i, a) <= n t_i}.
SimplicialComplex dowker_at(const OrderTable& table, const GradeVector& t, int max_dimension);

/// The same complex computed as the nerve of the sets
/// A_i(t_i) = {a : rank(i, a) <= n t_i}.
SimplicialComplex dowker_nerve_at(const OrderTable& table, const GradeVector& t, int max_dimension);

/// n * hat R_n(t): the number of columns a with rank(i, a) <= n t_i for every i.
std::size_t hat_R_count(const OrderTable& table, const GradeVector& t);
inline double hat_R(const OrderTable& table, const GradeVector& t) {
    return static_cast<double>(hat_R_count(table, t)) / static_cast<double>(table.cols());
}

/// Raised when a filtration is not a valid filtered simplicial complex.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FiltrationEntry {
    Simplex simplex;
    long long birth;  ///< grade numerator over Filtration::denominator()

    friend bool operator==(const FiltrationEntry&, const FiltrationEntry&) = default;
};

/// One-parameter filtration on the grid {0, 1/den, ..., end/den}. Entries are
/// listed in insertion order; births are nondecreasing along the list.
class Filtration {
public:
    Filtration() = default;
    /// Checks grid range and ordering of births; face closure is checked by
    /// validate() and during persistence reduction.
    Filtration(std::size_t vertex_count, long long denominator, long long end,
               std::vector<FiltrationEntry> entries);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    long long denominator() const noexcept { return denominator_; }
    long long end() const noexcept { return end_; }
    std::span<const FiltrationEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    int max_dimension() const;

    /// Throws StructuralError unless every face of every simplex appears
    /// earlier in the list.
    void validate() const;

    SimplicialComplex complex_at(long long grade) const;

    /// Text export: header "denominator <den> end <end> vertices <m>", then one
    /// line per simplex "<birth numerator> <v0> <v1> ..." with 0-based vertices.
    void write_text(std::ostream& out) const;
    static Filtration read_text(std::istream& in);

private:
    std::size_t vertex_count_ = 0;
    long long denominator_ = 1;
    long long end_ = 0;
    std::vector<FiltrationEntry> entries_;
};

/// n * t_max(a) = max_i rank(i, a).
long long ray_end(const OrderTable& table, std::size_t column);

/// Diagonal-ray filtration of column a: at grade T/n it is the Dowker complex
/// at t_i = (rank(i, a) - (n t_max(a) - T)) / n, for T = 0 .. n t_max(a).
/// Contains every simplex of the max_dimension skeleton of the full simplex,
/// ordered by (birth, size, bitmask value).
Filtration ray_filtration(const OrderTable& table, std::size_t column, int max_dimension);

/// How births are found. `sweep` tracks all 2^m vertex masks and costs
/// O(n m + 2^m m) per column; `subsets` expands, for every column b, the
/// subsets of the vertices where b ranks below a, costing O(n 2^m) in the worst
/// case but no 2^m memory. `automatic` picks sweep for m <= 16.
enum class RayMethod { automatic, sweep, subsets };

/// Same as above but reusing a prebuilt skeleton enumeration.
Filtration ray_filtration(const OrderTable& table, std::size_t column, const SkeletonIndex& skeleton,
                          RayMethod method = RayMethod::automatic);

}  // namespace qcsense
