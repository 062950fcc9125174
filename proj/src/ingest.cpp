#include "qcsense/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qcsense {

namespace {

std::string annotate(const std::string& what, std::size_t row, std::size_t column) {
    if (row == 0) return what;
    std::ostringstream os;
    os << what << " (row " << row;
    if (column != 0) os << ", column " << column;
    os << ")";
    return os.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t row, std::size_t column) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError("non-numeric field '" + std::string(field) + "'", row, column);
    }
    if (!std::isfinite(value)) throw InputError("non-finite value", row, column);
    return value;
}

// Column indices of one row sorted by (value, column).
std::vector<std::size_t> sorted_columns(std::span<const double> row) {
    std::vector<std::size_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return row[x] < row[y]; });
    return idx;
}

}  // namespace

InputError::InputError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(annotate(what, row, column)), row_(row), column_(column) {}

InputError::InputError(Preformatted, const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(what), row_(row), column_(column) {}

DuplicateInRow::DuplicateInRow(std::size_t row, std::size_t first_column, std::size_t second_column)
    : InputError(Preformatted{},
                 "DuplicateInRow(row=" + std::to_string(row) + "): columns " +
                     std::to_string(first_column) + " and " + std::to_string(second_column) +
                     " hold equal values",
                 row, second_column) {}

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       TiePolicy ties, std::vector<std::string>* warnings)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0) throw InputError("matrix must have at least one row and one column");
    if (values_.size() != rows_ * cols_) throw InputError("value count does not match matrix shape");
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t a = 0; a < cols_; ++a) {
            if (!std::isfinite((*this)(i, a))) throw InputError("non-finite value", i + 1, a + 1);
        }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        auto order = sorted_columns(row(i));
        for (std::size_t k = 1; k < cols_; ++k) {
            if ((*this)(i, order[k - 1]) != (*this)(i, order[k])) continue;
            if (ties == TiePolicy::reject) throw DuplicateInRow(i + 1, order[k - 1] + 1, order[k] + 1);
            has_ties_ = true;
            if (warnings) {
                warnings->push_back("tie in row " + std::to_string(i + 1) + " between columns " +
                                    std::to_string(order[k - 1] + 1) + " and " +
                                    std::to_string(order[k] + 1) +
                                    " broken by ascending column index");
            }
        }
    }
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows, TiePolicy ties,
                                 std::vector<std::string>* warnings) {
    if (rows.empty()) throw InputError("matrix must have at least one row and one column");
    std::vector<double> values;
    const std::size_t n = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw InputError("ragged rows: expected " + std::to_string(n) + " fields, found " +
                                 std::to_string(rows[i].size()),
                             i + 1);
        }
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    return DataMatrix(rows.size(), n, std::move(values), ties, warnings);
}

DataMatrix DataMatrix::select_columns(std::span<const std::size_t> columns) const {
    std::vector<double> values;
    values.reserve(rows_ * columns.size());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (auto a : columns) values.push_back((*this)(i, a));
    }
    // a column subset of a valid matrix stays valid; ties survive only if present before
    return DataMatrix(rows_, columns.size(), std::move(values),
                      has_ties_ ? TiePolicy::break_by_column_index : TiePolicy::reject);
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * cols_);
    for (auto i : rows) {
        auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    return DataMatrix(rows.size(), cols_, std::move(values),
                      has_ties_ ? TiePolicy::break_by_column_index : TiePolicy::reject);
}

LoadResult load_matrix(std::istream& in, const LoadOptions& options) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = options.skip_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::vector<double> row;
        std::string_view rest(line);
        std::size_t column = 1;
        while (true) {
            auto comma = rest.find(',');
            row.push_back(parse_field(rest.substr(0, comma), rows.size() + 1, column));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
            ++column;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError("ragged rows: expected " + std::to_string(rows.front().size()) +
                                 " fields, found " + std::to_string(row.size()),
                             rows.size() + 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("input contains no rows");
    LoadResult result;
    result.matrix = DataMatrix::from_rows(rows, options.ties, &result.warnings);
    return result;
}

LoadResult load_matrix_file(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path.string() + "'");
    return load_matrix(in, options);
}

void write_matrix_csv(std::ostream& out, const DataMatrix& matrix) {
    char buf[64];
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t a = 0; a < matrix.cols(); ++a) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, matrix(i, a));
            if (a) out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

OrderTable::OrderTable(const DataMatrix& matrix)
    : rows_(matrix.rows()), cols_(matrix.cols()), ranks_(rows_ * cols_), sequences_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i) {
        auto order = sorted_columns(matrix.row(i));
        for (std::size_t k = 0; k < cols_; ++k) {
            sequences_[i * cols_ + k] = order[k];
            ranks_[i * cols_ + order[k]] = static_cast<int>(k + 1);
        }
    }
}

OrderTable OrderTable::from_ranks(std::size_t rows, std::size_t cols, std::vector<int> ranks) {
    if (rows == 0 || cols == 0 || ranks.size() != rows * cols) {
        throw InputError("rank table shape mismatch");
    }
    OrderTable t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.ranks_ = std::move(ranks);
    t.fill_sequences();
    return t;
}

void OrderTable::fill_sequences() {
    sequences_.assign(rows_ * cols_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t a = 0; a < cols_; ++a) {
            int r = rank(i, a);
            if (r < 1 || static_cast<std::size_t>(r) > cols_ || sequences_[i * cols_ + r - 1] != cols_) {
                throw InputError("rank row is not a permutation of 1..n", i + 1, a + 1);
            }
            sequences_[i * cols_ + r - 1] = a;
        }
    }
}

OrderTable OrderTable::select_rows(std::span<const std::size_t> rows) const {
    OrderTable t;
    t.rows_ = rows.size();
    t.cols_ = cols_;
    t.ranks_.reserve(rows.size() * cols_);
    t.sequences_.reserve(rows.size() * cols_);
    for (auto i : rows) {
        auto r = ranks(i);
        auto s = sequence(i);
        t.ranks_.insert(t.ranks_.end(), r.begin(), r.end());
        t.sequences_.insert(t.sequences_.end(), s.begin(), s.end());
    }
    return t;
}

}  // namespace qcsense
