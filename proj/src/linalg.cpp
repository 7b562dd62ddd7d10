#include "latmove/linalg.hpp"

#include <algorithm>

namespace latmove {

Int det(std::vector<Vec> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    for (const Vec& row : m)
        if (row.size() != n) fail(ErrorCode::InvalidInput, "det: matrix not square");

    // Bareiss fraction-free elimination; every division below is exact.
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

int linear_rank(std::vector<Vec> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            Int f1 = rows[r][c];
            Int f2 = rows[i][c];
            Int g = boost::multiprecision::gcd(f1, f2);
            f1 /= g;
            f2 /= g;
            for (std::size_t j = c; j < cols; ++j) rows[i][j] = rows[i][j] * f1 - rows[r][j] * f2;
        }
        ++r;
    }
    return static_cast<int>(r);
}

int affine_rank(const std::vector<Vec>& pts) {
    if (pts.empty()) return -1;
    std::vector<Vec> diffs;
    diffs.reserve(pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    return linear_rank(std::move(diffs));
}

Vec generalized_cross(const std::vector<Vec>& diffs, int d) {
    if (static_cast<int>(diffs.size()) != d - 1)
        fail(ErrorCode::InvalidInput, "generalized_cross: needs d-1 vectors");
    Vec normal(d);
    std::vector<Vec> minor(d - 1, Vec(d - 1));
    for (int skip = 0; skip < d; ++skip) {
        for (int i = 0; i < d - 1; ++i) {
            int cc = 0;
            for (int j = 0; j < d; ++j) {
                if (j == skip) continue;
                minor[i][cc++] = diffs[i][j];
            }
        }
        Int m = det(minor);
        normal[skip] = (skip % 2 == 0) ? m : -m;
    }
    return normal;
}

std::optional<std::pair<Vec, Int>> hyperplane_through(const std::vector<Vec>& pts) {
    const int d = static_cast<int>(pts[0].size());
    if (static_cast<int>(pts.size()) != d)
        fail(ErrorCode::InvalidInput, "hyperplane_through: needs exactly d points");
    if (d == 1) return std::make_pair(Vec{1}, pts[0][0]);
    std::vector<Vec> diffs;
    for (int i = 1; i < d; ++i) diffs.push_back(sub(pts[i], pts[0]));
    Vec a = generalized_cross(diffs, d);
    if (is_zero(a)) return std::nullopt;
    a = make_primitive(std::move(a));
    return std::make_pair(a, dot(a, pts[0]));
}

std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

std::optional<Vec> integer_kernel_vector(const std::vector<Vec>& rows, int d) {
    // Rational RREF, then read one kernel vector off the first free column.
    std::vector<std::vector<Rat>> m;
    m.reserve(rows.size());
    for (const Vec& r : rows) {
        if (static_cast<int>(r.size()) != d) fail(ErrorCode::InvalidInput, "kernel: bad row size");
        std::vector<Rat> q(d);
        for (int j = 0; j < d; ++j) q[j] = Rat(r[j]);
        m.push_back(std::move(q));
    }
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (int c = 0; c < d && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        Rat pv = m[r][c];
        for (int j = 0; j < d; ++j) m[r][j] /= pv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = 0; j < d; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    int free_col = -1;
    for (int c = 0; c < d; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
            free_col = c;
            break;
        }
    }
    if (free_col < 0) return std::nullopt;

    std::vector<Rat> x(d, Rat(0));
    x[free_col] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = -m[i][free_col];

    Int lcm = 1;
    for (const Rat& q : x) {
        Int den = boost::multiprecision::denominator(q);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    Vec out(d);
    for (int j = 0; j < d; ++j)
        out[j] = boost::multiprecision::numerator(x[j]) * (lcm / boost::multiprecision::denominator(x[j]));
    return make_primitive(std::move(out));
}

}  // namespace latmove
