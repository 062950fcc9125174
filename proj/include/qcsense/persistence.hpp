#pragma once

#include <cstddef>
#include <vector>

#include "qcsense/dowker.hpp"

namespace qcsense {

/// Persistence interval on a filtration grid. Grades are numerators over the
/// diagram's denominator; essential classes carry death = end of the index
/// range and essential = true.
struct Interval {
    int dimension;
    long long birth;
    long long death;
    bool essential;

    long long length() const noexcept { return death - birth; }
    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Persistent homology over the two-element field, dimensions 0..max_dimension.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    PersistenceDiagram(long long denominator, long long end, int max_dimension, std::vector<Interval> intervals);

    long long denominator() const noexcept { return denominator_; }
    long long end() const noexcept { return end_; }
    int max_dimension() const noexcept { return max_dimension_; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    std::vector<Interval> intervals(int dimension) const;
    bool empty() const noexcept { return intervals_.empty(); }

    /// Rank of H_k of the complex at `grade`, read off the diagram.
    int betti(int dimension, long long grade) const;

    /// Intervals sorted; useful for comparing diagrams as multisets.
    PersistenceDiagram canonical() const;

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    long long denominator_ = 1;
    long long end_ = 0;
    int max_dimension_ = 0;
    std::vector<Interval> intervals_;
};

/// Standard column reduction of the filtration boundary matrix (bit-packed
/// columns, Z/2 coefficients) following the filtration's entry order.
/// Throws StructuralError if a face is missing or listed after its coface.
PersistenceDiagram persistence_intervals(const Filtration& filtration, int max_dimension);

/// Longest interval per dimension, 0 where a dimension has no interval.
struct MaxLengths {
    long long denominator = 1;
    std::vector<long long> numerators;  ///< indexed by dimension

    double value(int dimension) const {
        return static_cast<double>(numerators[dimension]) / static_cast<double>(denominator);
    }
    std::vector<double> values() const;
    friend bool operator==(const MaxLengths&, const MaxLengths&) = default;
};

MaxLengths max_lengths(const PersistenceDiagram& diagram);

}  // namespace qcsense
