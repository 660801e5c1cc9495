#ifndef REGEN_GF2_HPP
#define REGEN_GF2_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace regen::gf2 {

// Dense GF(2) matrix with one uint32_t mask per row; wide enough for
// every system in this project (at most 16 columns).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint32_t> row;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), row(static_cast<size_t>(r), 0u) {
        if (c < 0 || c > 32) throw std::invalid_argument("gf2 column count out of range");
    }

    bool get(int r, int c) const { return (row[static_cast<size_t>(r)] >> c) & 1u; }
    void set(int r, int c, bool v) {
        std::uint32_t bit = 1u << c;
        if (v) row[static_cast<size_t>(r)] |= bit; else row[static_cast<size_t>(r)] &= ~bit;
    }
};

inline int rank(Matrix m) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.get(i, c)) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(m.row[static_cast<size_t>(pivot)], m.row[static_cast<size_t>(r)]);
        for (int i = 0; i < m.rows; ++i)
            if (i != r && m.get(i, c)) m.row[static_cast<size_t>(i)] ^= m.row[static_cast<size_t>(r)];
        ++r;
    }
    return r;
}

// For a full-column-rank A (rows x cols), returns R (cols x rows) with
// R.A = I, so x = R.s solves A.x = s for consistent s. Callers detect
// inconsistent s by re-multiplying. Empty result if A is column-rank
// deficient.
inline std::optional<Matrix> left_inverse(const Matrix& a) {
    if (a.rows > 32) throw std::invalid_argument("gf2 left_inverse: too many rows");
    // Augmented rows: [A | I], reduced until the A part is the identity
    // on pivot rows.
    std::vector<std::uint64_t> aug(static_cast<size_t>(a.rows));
    for (int i = 0; i < a.rows; ++i)
        aug[static_cast<size_t>(i)] =
            static_cast<std::uint64_t>(a.row[static_cast<size_t>(i)]) |
            (static_cast<std::uint64_t>(1) << (a.cols + i));
    int r = 0;
    std::vector<int> pivot_row_of_col(static_cast<size_t>(a.cols), -1);
    for (int c = 0; c < a.cols; ++c) {
        int pivot = -1;
        for (int i = r; i < a.rows; ++i)
            if ((aug[static_cast<size_t>(i)] >> c) & 1u) { pivot = i; break; }
        if (pivot < 0) return std::nullopt;
        std::swap(aug[static_cast<size_t>(pivot)], aug[static_cast<size_t>(r)]);
        for (int i = 0; i < a.rows; ++i)
            if (i != r && ((aug[static_cast<size_t>(i)] >> c) & 1u))
                aug[static_cast<size_t>(i)] ^= aug[static_cast<size_t>(r)];
        pivot_row_of_col[static_cast<size_t>(c)] = r;
        ++r;
    }
    Matrix inv(a.cols, a.rows);
    for (int c = 0; c < a.cols; ++c) {
        std::uint64_t line = aug[static_cast<size_t>(pivot_row_of_col[static_cast<size_t>(c)])];
        inv.row[static_cast<size_t>(c)] = static_cast<std::uint32_t>(line >> a.cols);
    }
    return inv;
}

inline std::uint32_t apply(const Matrix& m, std::uint32_t x) {
    std::uint32_t y = 0;
    for (int i = 0; i < m.rows; ++i)
        y |= static_cast<std::uint32_t>(__builtin_parity(m.row[static_cast<size_t>(i)] & x)) << i;
    return y;
}

}  // namespace regen::gf2

#endif
