#include "qcsense/interleave.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qcsense {

namespace {

struct Side {
    long long scale;  // lcm / n
    const OrderTable* table;
};

// Smallest k such that every simplex generated by a column of `from` appears
// in `to` after shifting by k / lcm. A simplex sigma born at p_a (restricted to
// sigma) needs a column b of `to` with q_b <= p_a + eps on sigma; the clamp at 1
// never binds because every q_b <= 1.
long long one_sided(const Side& from, const Side& to, std::span<const Simplex> simplices, Simplex& witness,
                    std::size_t& column, std::size_t& checks) {
    long long worst = 0;
    const std::size_t na = from.table->cols(), nb = to.table->cols();
    for (Simplex s : simplices) {
        const auto verts = simplex_vertices(s);
        for (std::size_t a = 0; a < na; ++a) {
            ++checks;
            long long best = std::numeric_limits<long long>::max();
            for (std::size_t b = 0; b < nb && best > worst; ++b) {
                long long need = 0;
                for (int i : verts) {
                    const long long gap = to.scale * to.table->rank(i, b) - from.scale * from.table->rank(i, a);
                    need = std::max(need, gap);
                }
                best = std::min(best, need);
            }
            if (best > worst) {
                worst = best;
                witness = s;
                column = a;
            }
        }
    }
    return worst;
}

}  // namespace

InterleaveResult interleaving_distance(const OrderTable& a, const OrderTable& b, int skeleton) {
    if (a.rows() != b.rows()) throw std::invalid_argument("interleaving needs equal sensor counts");
    const std::size_t m = a.rows();
    if (m > kMaxInterleaveSensors) throw std::invalid_argument("interleaving is limited to m <= 4 sensors");
    if (m == 0 || a.cols() == 0 || b.cols() == 0) throw std::invalid_argument("empty order table");
    const int max_dim = skeleton < 0 ? static_cast<int>(m) - 1 : std::min(skeleton, static_cast<int>(m) - 1);

    InterleaveResult r;
    r.m = m;
    r.n_a = a.cols();
    r.n_b = b.cols();
    r.skeleton = max_dim;
    r.denominator = std::lcm(static_cast<long long>(a.cols()), static_cast<long long>(b.cols()));

    std::vector<Simplex> simplices;
    for (Simplex s = 1; s < (Simplex{1} << m); ++s) {
        if (simplex_dimension(s) <= max_dim) simplices.push_back(s);
    }
    const Side sa{r.denominator / static_cast<long long>(a.cols()), &a};
    const Side sb{r.denominator / static_cast<long long>(b.cols()), &b};
    Simplex wa = 0, wb = 0;
    std::size_t ca = 0, cb = 0;
    const long long ka = one_sided(sa, sb, simplices, wa, ca, r.checks);
    const long long kb = one_sided(sb, sa, simplices, wb, cb, r.checks);
    r.numerator = std::max(ka, kb);
    if (r.numerator > 0) {
        r.from_a = ka >= kb;
        r.witness_simplex = r.from_a ? wa : wb;
        r.witness_column = r.from_a ? ca : cb;
    }
    r.distance = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
    return r;
}

}  // namespace qcsense
