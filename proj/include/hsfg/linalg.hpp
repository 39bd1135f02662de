#ifndef HSFG_LINALG_HPP
#define HSFG_LINALG_HPP

#include "hsfg/mpoly.hpp"

namespace hsfg {

/// Dense matrix over an exact field (Fq or RatFunc), row-major.
template <class K>
struct Matrix {
    size_t rows = 0, cols = 0;
    std::vector<K> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, const K &zero) : rows(r), cols(c), data(r * c, zero) {}
    K &at(size_t i, size_t j) { return data[i * cols + j]; }
    const K &at(size_t i, size_t j) const { return data[i * cols + j]; }
};

/// Reduces in place; returns the pivot columns.
template <class K>
std::vector<size_t> row_reduce(Matrix<K> &m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t sel = row;
        while (sel < m.rows && ring_is_zero(m.at(sel, col)))
            ++sel;
        if (sel == m.rows)
            continue;
        for (size_t j = 0; j < m.cols; ++j)
            std::swap(m.at(row, j), m.at(sel, j));
        K inv = *ring_inverse(m.at(row, col));
        for (size_t j = col; j < m.cols; ++j)
            m.at(row, j) = m.at(row, j) * inv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || ring_is_zero(m.at(i, col)))
                continue;
            K f = m.at(i, col);
            for (size_t j = col; j < m.cols; ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
size_t matrix_rank(Matrix<K> m) {
    return row_reduce(m).size();
}

/// Basis of the right kernel {x : M x = 0}, columns as coordinate vectors.
template <class K>
std::vector<std::vector<K>> kernel_basis(Matrix<K> m, const K &zero, const K &one) {
    auto pivots = row_reduce(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<K>> basis;
    for (size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col])
            continue;
        std::vector<K> v(m.cols, zero);
        v[free_col] = one;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = zero - m.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Does M x = b have a solution?
template <class K>
bool is_solvable(Matrix<K> m, const std::vector<K> &b) {
    if (b.size() != m.rows)
        throw argument_error("is_solvable: dimension mismatch");
    if (m.rows == 0)
        return true;
    Matrix<K> aug(m.rows, m.cols + 1, b[0]);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    size_t r1 = matrix_rank(m);
    size_t r2 = matrix_rank(aug);
    return r1 == r2;
}

/// Is the vector v in the span of the given vectors?
template <class K>
bool in_span(const std::vector<std::vector<K>> &vectors, const std::vector<K> &v, const K &zero) {
    if (vectors.empty())
        return std::all_of(v.begin(), v.end(), [](const K &x) { return ring_is_zero(x); });
    Matrix<K> m(v.size(), vectors.size(), zero);
    for (size_t j = 0; j < vectors.size(); ++j)
        for (size_t i = 0; i < v.size(); ++i)
            m.at(i, j) = vectors[j][i];
    return is_solvable(m, v);
}

} // namespace hsfg

#endif
