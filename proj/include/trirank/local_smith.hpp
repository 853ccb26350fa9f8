#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace trirank {

template <class T>
struct BasicMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    BasicMatrix() = default;
    BasicMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

    static BasicMatrix identity(std::size_t n) {
        BasicMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Valuation-pivoted diagonalization over a truncated local ring Z/p^e.
///
/// `Ring` supplies value_type, exponent(), reduce, add, sub, mul, valuation
/// (exponent() for zero) and divide(a, b) solving q*b == a when
/// valuation(b) <= valuation(a). Returns the valuations of the min(rows, cols)
/// diagonal entries in pivot order. Pivot ties go to the smallest row index,
/// then the smallest column index.
///
/// If `left_inverse` is non-null (rows x rows, usually the identity on entry),
/// each row operation E on `a` is mirrored as W <- W E^{-1}; column t of W then
/// expresses the t-th cyclic generator of coker(a) in the original generators.
template <class Ring>
std::vector<int> local_smith_valuations(BasicMatrix<typename Ring::value_type> a, const Ring& ring,
                                        BasicMatrix<typename Ring::value_type>* left_inverse = nullptr) {
    using T = typename Ring::value_type;
    const std::size_t rows = a.rows;
    const std::size_t cols = a.cols;
    const std::size_t steps = std::min(rows, cols);
    const int e = ring.exponent();
    std::vector<int> out;
    out.reserve(steps);

    for (auto& x : a.data) x = ring.reduce(x);

    for (std::size_t t = 0; t < steps; ++t) {
        int best = e;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < rows && best > 0; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                const T& x = a(i, j);
                if (x == 0) continue;
                int v = ring.valuation(x);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        }
        if (best == e) {
            out.insert(out.end(), steps - t, e);
            break;
        }
        if (bi != t) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(t, j), a(bi, j));
            if (left_inverse) {
                auto& w = *left_inverse;
                for (std::size_t r = 0; r < w.rows; ++r) std::swap(w(r, t), w(r, bi));
            }
        }
        if (bj != t) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, t), a(i, bj));
        }
        const T pivot = a(t, t);
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (a(i, t) == 0) continue;
            const T f = ring.divide(a(i, t), pivot);
            for (std::size_t j = t; j < cols; ++j) {
                if (a(t, j) != 0) a(i, j) = ring.sub(a(i, j), ring.mul(f, a(t, j)));
            }
            if (left_inverse) {
                auto& w = *left_inverse;
                for (std::size_t r = 0; r < w.rows; ++r) {
                    if (w(r, i) != 0) w(r, t) = ring.add(w(r, t), ring.mul(f, w(r, i)));
                }
            }
        }
        // column operations would only touch row t now
        for (std::size_t j = t + 1; j < cols; ++j) a(t, j) = T(0);
        out.push_back(best);
    }
    return out;
}

} // namespace trirank
