#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcsense {

/// Raised for malformed or invalid measurement input. Row and column are
/// 1-based positions in the source (0 when not applicable).
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, std::size_t row = 0, std::size_t column = 0);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

protected:
    struct Preformatted {};
    InputError(Preformatted, const std::string& what, std::size_t row, std::size_t column);

private:
    std::size_t row_;
    std::size_t column_;
};

class DuplicateInRow : public InputError {
public:
    DuplicateInRow(std::size_t row, std::size_t first_column, std::size_t second_column);
};

enum class TiePolicy { reject, break_by_column_index };

/// m x n matrix of finite reals, one row per sensor and one column per sample.
/// Rows hold pairwise-distinct entries unless constructed with the
/// column-index tie break.
class DataMatrix {
public:
    DataMatrix() = default;

    /// Validates shape, finiteness and (under TiePolicy::reject) distinctness.
    /// Ties accepted under the tie break are described in `warnings`.
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
               TiePolicy ties = TiePolicy::reject,
               std::vector<std::string>* warnings = nullptr);

    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                TiePolicy ties = TiePolicy::reject,
                                std::vector<std::string>* warnings = nullptr);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t a) const { return values_[i * cols_ + a]; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<const double> values() const noexcept { return values_; }
    bool has_ties() const noexcept { return has_ties_; }

    DataMatrix select_columns(std::span<const std::size_t> columns) const;
    DataMatrix select_rows(std::span<const std::size_t> rows) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    bool has_ties_ = false;
};

struct LoadOptions {
    TiePolicy ties = TiePolicy::reject;
    bool skip_header = false;
};

struct LoadResult {
    DataMatrix matrix;
    std::vector<std::string> warnings;
};

/// Parses comma-separated numeric rows (decimal point, no quoting).
LoadResult load_matrix(std::istream& in, const LoadOptions& options = {});
LoadResult load_matrix_file(const std::filesystem::path& path, const LoadOptions& options = {});

void write_matrix_csv(std::ostream& out, const DataMatrix& matrix);

/// Per-row ranks and order sequences of a DataMatrix.
///
/// rank(i, a) = #{b : M_ib <= M_ia} is 1-based; sequence(i) lists the column
/// indices (0-based) of row i in increasing order of value, so
/// sequence(i)[rank(i, a) - 1] == a. Ties (only possible under the
/// column-index tie break) are ordered by ascending column index.
class OrderTable {
public:
    OrderTable() = default;
    explicit OrderTable(const DataMatrix& matrix);

    /// Builds directly from 1-based rank rows; each row must be a permutation of 1..n.
    static OrderTable from_ranks(std::size_t rows, std::size_t cols, std::vector<int> ranks);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int rank(std::size_t i, std::size_t a) const { return ranks_[i * cols_ + a]; }
    std::span<const int> ranks(std::size_t i) const { return {ranks_.data() + i * cols_, cols_}; }
    std::span<const std::size_t> sequence(std::size_t i) const {
        return {sequences_.data() + i * cols_, cols_};
    }

    OrderTable select_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const OrderTable&, const OrderTable&) = default;

private:
    void fill_sequences();

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<int> ranks_;
    std::vector<std::size_t> sequences_;
};

inline OrderTable order_table(const DataMatrix& matrix) { return OrderTable(matrix); }

}  // namespace qcsense
