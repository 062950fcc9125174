#include "qcsense/persistence.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace qcsense {

namespace {

// Colexicographic rank of a simplex among all simplices of at most max_size
// vertices on a fixed vertex count; used to look up face positions in O(size).
class FaceLookup {
public:
    FaceLookup(std::size_t vertex_count, int max_size) {
        static const auto table = [] {
            std::array<std::array<std::uint64_t, kMaxVertices + 2>, kMaxVertices + 1> c{};
            for (std::size_t v = 0; v <= kMaxVertices; ++v) {
                c[v][0] = 1;
                for (std::size_t k = 1; k <= v; ++k) {
                    std::uint64_t s = c[v - 1][k] + c[v - 1][k - 1];
                    c[v][k] = s < c[v - 1][k] ? UINT64_MAX : s;
                }
            }
            return c;
        }();
        binomial_ = &table;
        offsets_.assign(max_size + 2, 0);
        std::uint64_t total = 0;
        bool dense = true;
        for (int k = 1; k <= max_size; ++k) {
            offsets_[k] = total;
            std::uint64_t c = (*binomial_)[vertex_count][k];
            if (c > kDenseLimit || total + c > kDenseLimit) {
                dense = false;
                break;
            }
            total += c;
        }
        if (dense) dense_.assign(total, -1);
        dense_mode_ = dense;
    }

    int& slot(Simplex s) {
        if (!dense_mode_) return sparse_.try_emplace(s, -1).first->second;
        std::uint64_t rank = 0;
        int j = 0;
        for (Simplex rest = s; rest; rest &= rest - 1) rank += (*binomial_)[std::countr_zero(rest)][++j];
        return dense_[offsets_[j] + rank];
    }

    int find(Simplex s) {
        if (!dense_mode_) {
            auto it = sparse_.find(s);
            return it == sparse_.end() ? -1 : it->second;
        }
        return slot(s);
    }

private:
    static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;
    const std::array<std::array<std::uint64_t, kMaxVertices + 2>, kMaxVertices + 1>* binomial_ = nullptr;
    std::vector<std::uint64_t> offsets_;
    std::vector<int> dense_;
    std::unordered_map<Simplex, int> sparse_;
    bool dense_mode_ = true;
};

int highest_bit(const std::uint64_t* column, long long top_word) {
    for (long long w = top_word; w >= 0; --w) {
        if (column[w]) return static_cast<int>(w * 64 + 63 - std::countl_zero(column[w]));
    }
    return -1;
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(long long denominator, long long end, int max_dimension,
                                       std::vector<Interval> intervals)
    : denominator_(denominator), end_(end), max_dimension_(max_dimension), intervals_(std::move(intervals)) {
    for (const auto& iv : intervals_) {
        if (iv.birth > iv.death) throw std::invalid_argument("interval birth exceeds death");
        if (iv.dimension < 0 || iv.dimension > max_dimension_) throw std::invalid_argument("interval dimension out of range");
    }
}

std::vector<Interval> PersistenceDiagram::intervals(int dimension) const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) {
        if (iv.dimension == dimension) out.push_back(iv);
    }
    return out;
}

int PersistenceDiagram::betti(int dimension, long long grade) const {
    int count = 0;
    for (const auto& iv : intervals_) {
        if (iv.dimension == dimension && iv.birth <= grade && (iv.essential || iv.death > grade)) ++count;
    }
    return count;
}

PersistenceDiagram PersistenceDiagram::canonical() const {
    auto sorted = intervals_;
    std::sort(sorted.begin(), sorted.end());
    return PersistenceDiagram(denominator_, end_, max_dimension_, std::move(sorted));
}

PersistenceDiagram persistence_intervals(const Filtration& filtration, int max_dimension) {
    if (max_dimension < 0) throw std::invalid_argument("max_dimension must be nonnegative");
    const int max_size = max_dimension + 2;  // cofaces one dimension up kill top classes

    std::vector<Simplex> simplices;
    std::vector<long long> births;
    simplices.reserve(filtration.size());
    births.reserve(filtration.size());
    for (const auto& e : filtration.entries()) {
        if (simplex_size(e.simplex) <= max_size) {
            simplices.push_back(e.simplex);
            births.push_back(e.birth);
        }
    }
    const std::size_t count = simplices.size();

    FaceLookup position(filtration.vertex_count(), max_size);
    std::vector<std::size_t> offset(count + 1, 0);
    for (std::size_t j = 0; j < count; ++j) offset[j + 1] = offset[j] + (j >> 6) + 1;
    std::vector<std::uint64_t> bits(offset[count], 0);

    for (std::size_t j = 0; j < count; ++j) {
        const Simplex s = simplices[j];
        int& slot = position.slot(s);
        if (slot != -1) throw StructuralError("duplicate simplex in filtration");
        slot = static_cast<int>(j);
        if (simplex_size(s) < 2) continue;
        std::uint64_t* column = bits.data() + offset[j];
        for (Simplex rest = s; rest; rest &= rest - 1) {
            const Simplex face = s & ~(rest & (~rest + 1));
            const int at = position.find(face);
            if (at < 0) throw StructuralError("face of a simplex is missing or listed after it");
            column[at >> 6] |= std::uint64_t{1} << (at & 63);
        }
    }

    std::vector<int> owner(count, -1);
    std::vector<char> destroyer(count, 0), killed(count, 0);
    std::vector<Interval> intervals;
    for (std::size_t j = 0; j < count; ++j) {
        if (simplex_size(simplices[j]) < 2) continue;
        std::uint64_t* column = bits.data() + offset[j];
        int low = highest_bit(column, static_cast<long long>(j >> 6));
        while (low >= 0 && owner[low] >= 0) {
            const std::uint64_t* other = bits.data() + offset[owner[low]];
            const int top = low >> 6;
            for (int w = 0; w <= top; ++w) column[w] ^= other[w];
            low = highest_bit(column, top);
        }
        if (low < 0) continue;
        owner[low] = static_cast<int>(j);
        destroyer[j] = 1;
        killed[low] = 1;
        const int dim = simplex_dimension(simplices[low]);
        if (dim <= max_dimension) intervals.push_back({dim, births[low], births[j], false});
    }
    for (std::size_t j = 0; j < count; ++j) {
        const int dim = simplex_dimension(simplices[j]);
        if (dim <= max_dimension && !destroyer[j] && !killed[j]) {
            intervals.push_back({dim, births[j], filtration.end(), true});
        }
    }
    return PersistenceDiagram(filtration.denominator(), filtration.end(), max_dimension, std::move(intervals));
}

std::vector<double> MaxLengths::values() const {
    std::vector<double> out(numerators.size());
    for (std::size_t k = 0; k < numerators.size(); ++k) out[k] = value(static_cast<int>(k));
    return out;
}

MaxLengths max_lengths(const PersistenceDiagram& diagram) {
    MaxLengths out;
    out.denominator = diagram.denominator();
    out.numerators.assign(diagram.max_dimension() + 1, 0);
    for (const auto& iv : diagram.intervals()) {
        out.numerators[iv.dimension] = std::max(out.numerators[iv.dimension], iv.length());
    }
    return out;
}

}  // namespace qcsense
