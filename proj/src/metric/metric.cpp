#include "fluxcheck/metric.hpp"

#include "fluxcheck/errors.hpp"

#include <bit>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace fluxcheck {

namespace {

// Determinant of the rows/columns selected from m, by expansion over column
// subsets: state[S] = det(rows 0..|S|-1, columns S).
Polynomial sub_determinant(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) {
    const std::size_t k = rows.size();
    if (k == 0) return Polynomial(1);
    std::unordered_map<std::uint32_t, Polynomial> state{{0u, Polynomial(1)}};
    for (std::size_t r = 0; r < k; ++r) {
        std::unordered_map<std::uint32_t, Polynomial> next;
        for (const auto& [subset, value] : state) {
            for (std::size_t c = 0; c < k; ++c) {
                const std::uint32_t b = std::uint32_t{1} << c;
                if (subset & b) continue;
                const Polynomial& entry = m[rows[r]][cols[c]];
                if (entry.is_zero()) continue;
                const bool odd = std::popcount(subset & ~((b << 1) - 1)) % 2;
                Polynomial term = entry * value;
                auto& slot = next[subset | b];
                if (odd)
                    slot -= term;
                else
                    slot += term;
            }
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second.is_zero() ? next.erase(it) : std::next(it);
        state = std::move(next);
        if (state.empty()) return {};
    }
    const auto it = state.find((std::uint32_t{1} << k) - 1);
    return it == state.end() ? Polynomial() : it->second;
}

// Connected components of the nonzero pattern of a symmetric-pattern matrix.
std::vector<std::vector<std::size_t>> blocks_of(const PolyMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!m[i][j].is_zero()) parent[find(i)] = find(j);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

}  // namespace

Polynomial determinant(const PolyMatrix& m) {
    Polynomial det(1);
    // Rows and columns are permuted together, which leaves the determinant unchanged.
    for (const auto& block : blocks_of(m)) {
        det *= sub_determinant(m, block, block);
        if (det.is_zero()) break;
    }
    return det;
}

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
    PolyMatrix out(n, std::vector<Polynomial>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < p; ++j)
                if (!b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

bool is_identity(const PolyMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            if (!(m[i][j] == Polynomial(i == j ? 1 : 0))) return false;
    return true;
}

std::optional<PolyMatrix> polynomial_inverse(const PolyMatrix& m) {
    const std::size_t n = m.size();
    PolyMatrix inv(n, std::vector<Polynomial>(n));
    for (const auto& block : blocks_of(m)) {
        const Polynomial det = sub_determinant(m, block, block);
        const auto c = det.constant_value();
        if (!c || c->is_zero()) return std::nullopt;
        const Rational scale = Rational(1) / *c;
        const std::size_t b = block.size();
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < b; ++j) {
                // inv[i][j] = (-1)^(i+j) det(minor without row j, column i) / det
                std::vector<std::size_t> rows, cols;
                for (std::size_t r = 0; r < b; ++r)
                    if (r != j) rows.push_back(block[r]);
                for (std::size_t q = 0; q < b; ++q)
                    if (q != i) cols.push_back(block[q]);
                Polynomial minor = sub_determinant(m, rows, cols);
                if ((i + j) % 2) minor = -minor;
                inv[block[i]][block[j]] = minor * scale;
            }
    }
    return inv;
}

std::array<unsigned, 3> inertia(RationalMatrix m) {
    const std::size_t n = m.size();
    std::array<unsigned, 3> counts{0, 0, 0};
    std::size_t active = n;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Symmetric Gaussian elimination by congruence.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = n;
        for (std::size_t i = k; i < n; ++i)
            if (!m[i][i].is_zero()) {
                pivot = i;
                break;
            }
        if (pivot == n) {
            // No diagonal pivot: combine two coordinates with a nonzero coupling.
            std::size_t pi = n, pj = n;
            for (std::size_t i = k; i < n && pi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!m[i][j].is_zero()) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) {
                counts[2] += static_cast<unsigned>(n - k);
                return counts;
            }
            for (std::size_t c = 0; c < n; ++c) m[pi][c] += m[pj][c];
            for (std::size_t r = 0; r < n; ++r) m[r][pi] += m[r][pj];
            pivot = pi;
        }
        std::swap(m[k], m[pivot]);
        for (auto& row : m) std::swap(row[k], row[pivot]);
        const Rational p = m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            const Rational factor = m[i][k] / p;
            for (std::size_t c = k; c < n; ++c) m[i][c] -= factor * m[k][c];
            for (std::size_t r = k; r < n; ++r) m[r][i] -= factor * m[r][k];
        }
        ++counts[p.sign() > 0 ? 0 : 1];
    }
    (void)active;
    return counts;
}

ChartMetric make_metric(ChartPtr chart, PolyMatrix g, Signature signature,
                        std::optional<PolyMatrix> g_inv, std::optional<Polynomial> sqrt_abs_det) {
    if (!chart) throw MetricError("metric without a chart");
    const std::size_t n = chart->dimension();
    if (g.size() != n) throw MetricError("metric size does not match chart '" + chart->name() + "'");
    for (const auto& row : g)
        if (row.size() != n) throw MetricError("metric matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(g[i][j] == g[j][i]))
                throw MetricError("metric on '" + chart->name() + "' is not symmetric at (" +
                                  chart->coordinates()[i] + "," + chart->coordinates()[j] + ")");
    if (signature.plus + signature.minus != n)
        throw MetricError("signature does not add up to the dimension of '" + chart->name() + "'");

    auto state = std::make_shared<ChartMetric::State>();
    state->chart = chart;
    state->signature = signature;
    state->det_sign = signature.minus % 2 ? -1 : 1;
    state->det = determinant(g);
    if (state->det.is_zero()) throw MetricError("metric on '" + chart->name() + "' is degenerate");

    if (g_inv) {
        if (g_inv->size() != n) throw InverseMismatch("inverse metric has the wrong size");
        for (const auto& row : *g_inv)
            if (row.size() != n) throw InverseMismatch("inverse metric is not square");
        state->g_inv = std::move(*g_inv);
    } else {
        auto inv = polynomial_inverse(g);
        if (!inv)
            throw NonPolynomialInverse("metric on '" + chart->name() +
                                       "' has non-constant determinant and no inverse was supplied");
        state->g_inv = std::move(*inv);
    }
    if (!is_identity(matmul(g, state->g_inv)))
        throw InverseMismatch("g * g_inv is not the identity on '" + chart->name() + "'");

    const Polynomial abs_det = state->det_sign > 0 ? state->det : -state->det;
    if (sqrt_abs_det) {
        if (!(*sqrt_abs_det * *sqrt_abs_det == abs_det))
            throw VolumeNotPolynomial("supplied volume density does not square to |det g|");
        state->sqrt_abs_det = *sqrt_abs_det;
    } else {
        auto root = poly_sqrt(abs_det);
        if (!root)
            throw VolumeNotPolynomial("|det g| on '" + chart->name() + "' is not a polynomial square" +
                                      (abs_det.leading_term().coefficient.sign() < 0
                                           ? " (determinant sign contradicts the declared signature)"
                                           : ""));
        state->sqrt_abs_det = std::move(*root);
    }

    // Inertia at the first sample point where the metric is nondegenerate.
    const std::vector<Rational> samples{Rational(0), Rational(1), Rational(-1, 2)};
    for (const auto& value : samples) {
        Point point;
        for (const auto& c : chart->coordinates()) point[c] = value;
        if (state->det.evaluate(point).is_zero()) continue;
        RationalMatrix numeric(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) numeric[i][j] = g[i][j].evaluate(point);
        const auto counts = inertia(std::move(numeric));
        if (counts[0] != signature.plus || counts[1] != signature.minus)
            throw MetricError("declared signature (" + std::to_string(signature.plus) + "," +
                              std::to_string(signature.minus) + ") of '" + chart->name() +
                              "' does not match (" + std::to_string(counts[0]) + "," +
                              std::to_string(counts[1]) + ")");
        break;
    }

    state->g = std::move(g);
    state->inverse_columns.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (!state->g_inv[i][j].is_zero()) state->inverse_columns[j].emplace_back(i, state->g_inv[i][j]);
    return ChartMetric(std::move(state));
}

ChartMetric diagonal_metric(ChartPtr chart, const std::vector<Rational>& diagonal) {
    const std::size_t n = chart->dimension();
    if (diagonal.size() != n) throw MetricError("diagonal size does not match chart");
    PolyMatrix g(n, std::vector<Polynomial>(n));
    Signature sig;
    for (std::size_t i = 0; i < n; ++i) {
        g[i][i] = Polynomial(diagonal[i]);
        if (diagonal[i].sign() > 0)
            ++sig.plus;
        else
            ++sig.minus;
    }
    return make_metric(std::move(chart), std::move(g), sig);
}

namespace {

void require_chart(const ChartMetric& m, const ChartPtr& c, const char* what) {
    if (!same_chart(m.chart(), c))
        throw ChartMismatch(std::string(what) + ": chart '" + c->name() + "' differs from metric chart '" +
                            m.chart()->name() + "'");
}

}  // namespace

DifferentialForm flat(const ChartMetric& m, const VectorField& v) {
    require_chart(m, v.chart(), "flat");
    DifferentialForm out(m.chart(), 1);
    for (const auto& [j, vj] : v.components())
        for (std::size_t i = 0; i < m.dimension(); ++i)
            if (!m.g(i, j).is_zero()) out.add(IndexMask{1} << i, m.g(i, j) * vj);
    return out;
}

VectorField sharp(const ChartMetric& m, const DifferentialForm& one_form) {
    require_chart(m, one_form.chart(), "sharp");
    if (one_form.degree() != 1) throw DegreeError("sharp expects a 1-form");
    VectorField out(m.chart());
    for (const auto& [mask, c] : one_form.components()) {
        const auto j = mask_indices(mask).front();
        for (const auto& [i, gij] : m.inverse_column(j)) out.add(i, gij * c);
    }
    return out;
}

Polynomial metric_pairing(const ChartMetric& m, const VectorField& a, const VectorField& b) {
    require_chart(m, a.chart(), "metric pairing");
    require_chart(m, b.chart(), "metric pairing");
    Polynomial sum;
    for (const auto& [i, ai] : a.components())
        for (const auto& [j, bj] : b.components())
            if (!m.g(i, j).is_zero()) sum += m.g(i, j) * ai * bj;
    return sum;
}

std::map<IndexMask, Polynomial> raise_indices(const ChartMetric& m, const DifferentialForm& a) {
    require_chart(m, a.chart(), "raise indices");
    std::map<IndexMask, Polynomial> out;
    for (const auto& [mask, c] : a.components()) {
        const auto cols = mask_indices(mask);
        // Choose a distinct row for every column; the sign is the parity of
        // the row sequence.
        std::function<void(std::size_t, IndexMask, unsigned, const Polynomial&)> visit =
            [&](std::size_t k, IndexMask used, unsigned inversions, const Polynomial& acc) {
                if (k == cols.size()) {
                    auto& slot = out[used];
                    if (inversions % 2)
                        slot -= acc;
                    else
                        slot += acc;
                    return;
                }
                for (const auto& [row, value] : m.inverse_column(cols[k])) {
                    const IndexMask b = IndexMask{1} << row;
                    if (used & b) continue;
                    const auto above = static_cast<unsigned>(std::popcount(used & ~((b << 1) - 1)));
                    visit(k + 1, used | b, inversions + above, acc * value);
                }
            };
        visit(0, 0, 0, c);
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

Polynomial inner_product_forms(const ChartMetric& m, const DifferentialForm& a, const DifferentialForm& b) {
    require_chart(m, a.chart(), "inner product");
    require_chart(m, b.chart(), "inner product");
    if (a.degree() != b.degree() && !a.is_zero() && !b.is_zero())
        throw DegreeError("inner product of forms of degrees " + std::to_string(a.degree()) + " and " +
                          std::to_string(b.degree()));
    const bool raise_b = b.components().size() <= a.components().size();
    const auto& lowered = raise_b ? a : b;
    const auto raised = raise_indices(m, raise_b ? b : a);
    Polynomial sum;
    for (const auto& [mask, c] : lowered.components()) {
        const auto it = raised.find(mask);
        if (it != raised.end()) sum += c * it->second;
    }
    return sum;
}

Polynomial norm_squared(const ChartMetric& m, const DifferentialForm& a) {
    return inner_product_forms(m, a, a);
}

DifferentialForm volume_form(const ChartMetric& m) {
    const std::size_t n = m.dimension();
    DifferentialForm vol(m.chart(), static_cast<unsigned>(n));
    const IndexMask all = n == 32 ? ~IndexMask{0} : (IndexMask{1} << n) - 1;
    vol.add(all, m.sqrt_abs_det());
    return vol;
}

DifferentialForm hodge_star(const ChartMetric& m, const DifferentialForm& a) {
    require_chart(m, a.chart(), "hodge star");
    const std::size_t n = m.dimension();
    if (a.degree() > n) throw DegreeError("hodge star of a form above top degree");
    const IndexMask all = n == 32 ? ~IndexMask{0} : (IndexMask{1} << n) - 1;
    DifferentialForm out(m.chart(), static_cast<unsigned>(n - a.degree()));
    for (const auto& [mask, c] : raise_indices(m, a)) {
        const IndexMask complement = all & ~mask;
        const Polynomial value = m.sqrt_abs_det() * c;
        out.add(complement, merge_sign(mask, complement) > 0 ? value : -value);
    }
    return out;
}

bool is_null(const ChartMetric& m, const DifferentialForm& a) { return norm_squared(m, a).is_zero(); }

}  // namespace fluxcheck
