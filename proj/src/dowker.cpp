#include "qcsense/dowker.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace qcsense {

namespace {

constexpr std::size_t kSweepMaxVertices = 16;

Simplex low_mask(std::size_t count) {
    return count >= 64 ? ~Simplex{0} : (Simplex{1} << count) - 1;
}

bool size_then_value(Simplex x, Simplex y) {
    int sx = std::popcount(x), sy = std::popcount(y);
    return sx != sy ? sx < sy : x < y;
}

void check_vertex_count(std::size_t m) {
    if (m > kMaxVertices) {
        throw CapacityError("vertex count " + std::to_string(m) + " exceeds the bitmask capacity of " +
                            std::to_string(kMaxVertices));
    }
}

// rank <= n * steps / den, in integers
bool within(int rank, long long steps, long long den, std::size_t n) {
    return static_cast<long long>(rank) * den <= static_cast<long long>(n) * steps;
}

Simplex facet(const OrderTable& table, std::size_t a, const GradeVector& t) {
    Simplex s = 0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (within(table.rank(i, a), t.steps[i], t.denominator, table.cols())) s |= Simplex{1} << i;
    }
    return s;
}

void check_grade(const OrderTable& table, const GradeVector& t) {
    if (t.steps.size() != table.rows()) throw std::invalid_argument("grade vector length must equal row count");
    if (t.denominator <= 0) throw std::invalid_argument("grade denominator must be positive");
}

void append_subsets(Simplex generator, int max_size, std::vector<Simplex>& out) {
    auto verts = simplex_vertices(generator);
    // iterative DFS over vertex subsets in increasing vertex order
    struct Frame { std::size_t next; Simplex s; int size; };
    std::vector<Frame> stack{{0, 0, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (std::size_t j = f.next; j < verts.size(); ++j) {
            Simplex s = f.s | (Simplex{1} << verts[j]);
            out.push_back(s);
            if (f.size + 1 < max_size) stack.push_back({j + 1, s, f.size + 1});
        }
    }
}

// For every column b, lowers the births of all subsets of
// {i : rank(i, b) < rank(i, a)} up to the skeleton size. Cost grows with n per
// column; used when 2^m masks are too many to track.
void subset_births(const OrderTable& table, std::size_t a, long long t_end, const SkeletonIndex& skeleton,
                   std::vector<long long>& birth) {
    const std::size_t m = table.rows(), n = table.cols();
    const int max_size = skeleton.max_dimension() + 1;
    std::vector<int> verts(m), deltas(m);
    struct Frame { std::size_t next; int size; std::uint64_t rank; int max_delta; };
    std::vector<Frame> stack;
    for (std::size_t b = 0; b < n; ++b) {
        if (b == a) continue;
        std::size_t count = 0;
        for (std::size_t i = 0; i < m; ++i) {
            int delta = table.rank(i, b) - table.rank(i, a);
            if (delta < 0) {
                verts[count] = static_cast<int>(i);
                deltas[count] = delta;
                ++count;
            }
        }
        if (count == 0) continue;
        stack.clear();
        stack.push_back({0, 0, 0, std::numeric_limits<int>::min()});
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            for (std::size_t j = f.next; j < count; ++j) {
                const int size = f.size + 1;
                const std::uint64_t rank = f.rank + skeleton.binomial(verts[j], size);
                const int max_delta = std::max(f.max_delta, deltas[j]);
                long long& slot = birth[skeleton.offset(size) + rank];
                slot = std::min(slot, t_end + max_delta);
                if (size < max_size) stack.push_back({j + 1, size, rank, max_delta});
            }
        }
    }
}

// Sweeps the shift t_end - T downward. At each step every vertex i admits one
// more column into its prefix of the order sequence, growing that column's
// generator mask by i. Masks are tracked in a downward-closed bitmap, so each
// of the 2^m vertex masks is expanded at most once per column.
void sweep_births(const OrderTable& table, std::size_t a, long long t_end, const SkeletonIndex& skeleton,
                  std::vector<long long>& birth) {
    const std::size_t m = table.rows(), n = table.cols();
    const int max_size = skeleton.max_dimension() + 1;
    std::vector<Simplex> generator(n, 0);
    std::vector<char> seen(std::size_t{1} << m, 0);
    seen[0] = 1;
    std::vector<Simplex> stack;
    for (long long shift = t_end; shift >= 0; --shift) {
        const long long grade = t_end - shift;
        for (std::size_t i = 0; i < m; ++i) {
            const long long length = table.rank(i, a) - shift;
            if (length < 1) continue;
            const std::size_t b = table.sequence(i)[static_cast<std::size_t>(length - 1)];
            generator[b] |= Simplex{1} << i;
            stack.assign(1, generator[b]);
            while (!stack.empty()) {
                const Simplex x = stack.back();
                stack.pop_back();
                if (seen[x]) continue;
                seen[x] = 1;
                if (std::popcount(x) <= max_size) birth[skeleton.index(x)] = grade;
                for (Simplex rest = x; rest; rest &= rest - 1) {
                    const Simplex y = x & ~(rest & (~rest + 1));
                    if (!seen[y]) stack.push_back(y);
                }
            }
        }
    }
}

}  // namespace

std::vector<int> simplex_vertices(Simplex s) {
    std::vector<int> v;
    v.reserve(std::popcount(s));
    while (s) {
        v.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return v;
}

Simplex make_simplex(std::span<const int> vertices) {
    Simplex s = 0;
    for (int v : vertices) {
        if (v < 0 || static_cast<std::size_t>(v) >= kMaxVertices) throw CapacityError("vertex out of range");
        s |= Simplex{1} << v;
    }
    return s;
}

GradeVector GradeVector::from_reals(std::span<const double> t, long long denominator) {
    GradeVector g;
    g.denominator = denominator;
    for (double x : t) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("grade coordinates must lie in [0, 1]");
        // guard against x * den landing just below an integer it equals exactly
        double scaled = x * static_cast<double>(denominator);
        long long k = static_cast<long long>(std::floor(scaled + 1e-9));
        g.steps.push_back(std::min(k, denominator));
    }
    return g;
}

GradeVector GradeVector::constant(std::size_t m, long long step, long long denominator) {
    return GradeVector{std::vector<long long>(m, step), denominator};
}

SkeletonIndex::SkeletonIndex(std::size_t vertex_count, int max_dimension)
    : vertex_count_(vertex_count), max_dimension_(max_dimension) {
    check_vertex_count(vertex_count);
    if (max_dimension < 0) throw std::invalid_argument("skeleton dimension must be nonnegative");
    max_dimension_ = std::min<int>(max_dimension, static_cast<int>(vertex_count) - 1);
    const int max_size = max_dimension_ + 1;

    binomial_.assign((kMaxVertices + 1) * (kMaxVertices + 2), 0);
    for (std::size_t v = 0; v <= kMaxVertices; ++v) {
        binomial_[v * (kMaxVertices + 2)] = 1;
        for (std::size_t k = 1; k <= v; ++k) {
            std::uint64_t above = binomial_[(v - 1) * (kMaxVertices + 2) + k];
            std::uint64_t diag = binomial_[(v - 1) * (kMaxVertices + 2) + k - 1];
            binomial_[v * (kMaxVertices + 2) + k] = (above > UINT64_MAX - diag) ? UINT64_MAX : above + diag;
        }
    }

    constexpr std::uint64_t kLimit = std::uint64_t{1} << 26;
    offsets_.assign(max_size + 2, 0);
    std::uint64_t total = 0;
    for (int k = 1; k <= max_size; ++k) {
        offsets_[k] = static_cast<std::size_t>(total);
        std::uint64_t c = binomial(static_cast<int>(vertex_count), k);
        if (c > kLimit || total + c > kLimit) {
            throw CapacityError("skeleton of dimension " + std::to_string(max_dimension_) + " on " +
                                std::to_string(vertex_count) + " vertices is too large to enumerate");
        }
        total += c;
    }
    offsets_[max_size + 1] = static_cast<std::size_t>(total);

    simplices_.reserve(total);
    for (int k = 1; k <= max_size; ++k) {
        // Gosper's hack walks the k-subsets in increasing bitmask order
        Simplex s = low_mask(static_cast<std::size_t>(k));
        const Simplex last = s << (vertex_count - k);
        while (true) {
            simplices_.push_back(s);
            if (s == last) break;
            Simplex c = s & (~s + 1);
            Simplex r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
}

std::size_t SkeletonIndex::index(Simplex s) const {
    int size = std::popcount(s);
    if (size == 0 || size > max_dimension_ + 1) throw std::out_of_range("simplex outside skeleton");
    std::uint64_t rank = 0;
    int j = 0;
    while (s) {
        int v = std::countr_zero(s);
        if (static_cast<std::size_t>(v) >= vertex_count_) throw std::out_of_range("vertex outside skeleton");
        rank += binomial(v, ++j);
        s &= s - 1;
    }
    return offsets_[size] + static_cast<std::size_t>(rank);
}

SimplicialComplex::SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> faces)
    : vertex_count_(vertex_count), faces_(std::move(faces)) {
    check_vertex_count(vertex_count);
    std::sort(faces_.begin(), faces_.end(), size_then_value);
    faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
    const Simplex all = low_mask(vertex_count);
    for (Simplex s : faces_) {
        if (s == 0) throw std::invalid_argument("the empty face is implicit and may not be listed");
        if (s & ~all) throw std::invalid_argument("face uses a vertex outside the vertex set");
        if (std::popcount(s) < 2) continue;
        for (Simplex rest = s; rest; rest &= rest - 1) {
            Simplex face = s & ~(rest & (~rest + 1));
            if (!contains(face)) throw std::invalid_argument("face set is not closed under subsets");
        }
    }
}

SimplicialComplex SimplicialComplex::generated_by(std::size_t vertex_count,
                                                  std::span<const Simplex> generators, int max_dimension) {
    check_vertex_count(vertex_count);
    std::vector<Simplex> gens(generators.begin(), generators.end());
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::vector<Simplex> faces;
    for (Simplex g : gens) {
        if (g) append_subsets(g, max_dimension + 1, faces);
    }
    return SimplicialComplex(vertex_count, std::move(faces));
}

bool SimplicialComplex::contains(Simplex s) const {
    if (s == 0) return true;
    return std::binary_search(faces_.begin(), faces_.end(), s, size_then_value);
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
    return std::all_of(faces_.begin(), faces_.end(), [&](Simplex s) { return other.contains(s); });
}

SimplicialComplex dowker_at(const OrderTable& table, const GradeVector& t, int max_dimension) {
    check_vertex_count(table.rows());
    check_grade(table, t);
    if (max_dimension < 0) throw std::invalid_argument("skeleton dimension must be nonnegative");
    std::vector<Simplex> facets(table.cols());
    for (std::size_t a = 0; a < table.cols(); ++a) facets[a] = facet(table, a, t);
    return SimplicialComplex::generated_by(table.rows(), facets, max_dimension);
}

SimplicialComplex dowker_nerve_at(const OrderTable& table, const GradeVector& t, int max_dimension) {
    check_vertex_count(table.rows());
    check_grade(table, t);
    if (max_dimension < 0) throw std::invalid_argument("skeleton dimension must be nonnegative");
    const std::size_t m = table.rows(), n = table.cols(), words = (n + 63) / 64;
    std::vector<std::uint64_t> sets(m * words, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            if (within(table.rank(i, a), t.steps[i], t.denominator, n)) {
                sets[i * words + a / 64] |= std::uint64_t{1} << (a % 64);
            }
        }
    }
    std::vector<Simplex> faces;
    struct Frame { std::size_t next; Simplex s; int size; std::vector<std::uint64_t> common; };
    std::vector<Frame> stack;
    stack.push_back({0, 0, 0, std::vector<std::uint64_t>(words, ~std::uint64_t{0})});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        for (std::size_t v = f.next; v < m; ++v) {
            std::vector<std::uint64_t> common(words);
            bool any = false;
            for (std::size_t w = 0; w < words; ++w) {
                common[w] = f.common[w] & sets[v * words + w];
                any = any || common[w] != 0;
            }
            if (!any) continue;
            Simplex s = f.s | (Simplex{1} << v);
            faces.push_back(s);
            if (f.size + 1 <= max_dimension) stack.push_back({v + 1, s, f.size + 1, std::move(common)});
        }
    }
    return SimplicialComplex(m, std::move(faces));
}

std::size_t hat_R_count(const OrderTable& table, const GradeVector& t) {
    check_grade(table, t);
    std::size_t count = 0;
    for (std::size_t a = 0; a < table.cols(); ++a) {
        bool all = true;
        for (std::size_t i = 0; i < table.rows() && all; ++i) {
            all = within(table.rank(i, a), t.steps[i], t.denominator, table.cols());
        }
        count += all;
    }
    return count;
}

Filtration::Filtration(std::size_t vertex_count, long long denominator, long long end,
                       std::vector<FiltrationEntry> entries)
    : vertex_count_(vertex_count), denominator_(denominator), end_(end), entries_(std::move(entries)) {
    check_vertex_count(vertex_count);
    if (denominator_ <= 0) throw std::invalid_argument("filtration denominator must be positive");
    if (end_ < 0) throw std::invalid_argument("filtration end must be nonnegative");
    const Simplex all = low_mask(vertex_count);
    long long previous = 0;
    for (const auto& e : entries_) {
        if (e.simplex == 0 || (e.simplex & ~all)) throw StructuralError("filtration entry has an invalid simplex");
        if (e.birth < 0 || e.birth > end_) throw StructuralError("filtration birth outside the index range");
        if (e.birth < previous) throw StructuralError("filtration births must be nondecreasing");
        previous = e.birth;
    }
}

int Filtration::max_dimension() const {
    int d = -1;
    for (const auto& e : entries_) d = std::max(d, simplex_dimension(e.simplex));
    return d;
}

void Filtration::validate() const {
    std::vector<Simplex> seen;
    seen.reserve(entries_.size());
    for (const auto& e : entries_) {
        if (std::popcount(e.simplex) >= 2) {
            for (Simplex rest = e.simplex; rest; rest &= rest - 1) {
                Simplex face = e.simplex & ~(rest & (~rest + 1));
                if (std::find(seen.begin(), seen.end(), face) == seen.end()) {
                    throw StructuralError("face of a simplex is missing or appears after it");
                }
            }
        }
        if (std::find(seen.begin(), seen.end(), e.simplex) != seen.end()) {
            throw StructuralError("duplicate simplex in filtration");
        }
        seen.push_back(e.simplex);
    }
}

SimplicialComplex Filtration::complex_at(long long grade) const {
    std::vector<Simplex> faces;
    for (const auto& e : entries_) {
        if (e.birth <= grade) faces.push_back(e.simplex);
    }
    return SimplicialComplex(vertex_count_, std::move(faces));
}

void Filtration::write_text(std::ostream& out) const {
    out << "denominator " << denominator_ << " end " << end_ << " vertices " << vertex_count_ << '\n';
    for (const auto& e : entries_) {
        out << e.birth;
        for (int v : simplex_vertices(e.simplex)) out << ' ' << v;
        out << '\n';
    }
}

Filtration Filtration::read_text(std::istream& in) {
    std::string word_den, word_end, word_vert;
    long long den = 0, end = 0;
    std::size_t m = 0;
    if (!(in >> word_den >> den >> word_end >> end >> word_vert >> m) || word_den != "denominator" ||
        word_end != "end" || word_vert != "vertices") {
        throw StructuralError("malformed filtration header");
    }
    std::vector<FiltrationEntry> entries;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        FiltrationEntry e{0, 0};
        if (!(ls >> e.birth)) throw StructuralError("malformed filtration line");
        int v;
        while (ls >> v) e.simplex |= make_simplex(std::span<const int>(&v, 1));
        entries.push_back(e);
    }
    return Filtration(m, den, end, std::move(entries));
}

long long ray_end(const OrderTable& table, std::size_t column) {
    if (column >= table.cols()) throw std::out_of_range("column index out of range");
    int best = 0;
    for (std::size_t i = 0; i < table.rows(); ++i) best = std::max(best, table.rank(i, column));
    return best;
}

Filtration ray_filtration(const OrderTable& table, std::size_t column, int max_dimension) {
    check_vertex_count(table.rows());
    return ray_filtration(table, column, SkeletonIndex(table.rows(), max_dimension));
}

Filtration ray_filtration(const OrderTable& table, std::size_t a, const SkeletonIndex& skeleton, RayMethod method) {
    const std::size_t m = table.rows(), n = table.cols();
    if (a >= n) throw std::out_of_range("column index out of range");
    if (skeleton.vertex_count() != m) throw std::invalid_argument("skeleton does not match the row count");
    const long long t_end = ray_end(table, a);

    // Simplex sigma is present at grade T iff some column b has
    // rank(i, b) <= rank(i, a) - (t_end - T) for all i in sigma, i.e.
    // birth(sigma) = t_end + min_b max_{i in sigma} (rank(i, b) - rank(i, a)).
    // b = a gives t_end for everything.
    std::vector<long long> birth(skeleton.size(), t_end);
    if (method == RayMethod::sweep && m > kSweepMaxVertices)
        throw CapacityError("mask sweep supports at most 16 vertices");
    if (method == RayMethod::sweep || (method == RayMethod::automatic && m <= kSweepMaxVertices)) {
        sweep_births(table, a, t_end, skeleton, birth);
    } else {
        subset_births(table, a, t_end, skeleton, birth);
    }

    // counting sort by birth keeps the (size, bitmask) order within a grade
    std::vector<std::size_t> bucket_start(static_cast<std::size_t>(t_end) + 2, 0);
    for (long long b : birth) ++bucket_start[static_cast<std::size_t>(b) + 1];
    for (std::size_t g = 1; g < bucket_start.size(); ++g) bucket_start[g] += bucket_start[g - 1];
    std::vector<FiltrationEntry> entries(skeleton.size());
    for (std::size_t k = 0; k < skeleton.size(); ++k) {
        entries[bucket_start[static_cast<std::size_t>(birth[k])]++] = {skeleton.simplex(k), birth[k]};
    }
    return Filtration(m, static_cast<long long>(n), t_end, std::move(entries));
}

}  // namespace qcsense
