#include "trirank/plinalg.hpp"

#include "trirank/errors.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace trirank {

std::vector<int> smith_valuations(DenseMatrix a, const Modulus& mod, DenseMatrix* left_inverse) {
    return local_smith_valuations(std::move(a), mod, left_inverse);
}

TriMatrix::TriMatrix(std::size_t n, const Modulus& mod) : n_(n), mod_(mod), data_(offset(n), 0) {}

TriMatrix TriMatrix::identity(std::size_t n, const Modulus& mod) {
    TriMatrix m(n, mod);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

TriMatrix TriMatrix::from_rows(const std::vector<std::vector<u64>>& rows, const Modulus& mod) {
    TriMatrix m(rows.size(), mod);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == i + 1, fmt::format("row {} must have {} entries", i, i + 1));
        for (std::size_t j = 0; j <= i; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

void TriMatrix::set(std::size_t i, std::size_t j, u64 value) {
    require(i < n_ && j <= i, "TriMatrix::set outside the lower triangle");
    data_[offset(i) + j] = mod_.reduce(value);
}

DenseMatrix TriMatrix::to_dense() const {
    DenseMatrix d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) d(i, j) = at(i, j);
    }
    return d;
}

CokernelType::CokernelType(std::size_t n_, int precision_, std::vector<int> valuations_)
    : n(n_), precision(precision_), valuations(std::move(valuations_)) {
    require(valuations.size() == n, "cokernel type must list one valuation per row");
    for (auto& v : valuations) {
        if (v >= precision) v = kInfinite;
    }
    std::sort(valuations.begin(), valuations.end());
}

std::size_t CokernelType::count_below(int i) const {
    return static_cast<std::size_t>(std::lower_bound(valuations.begin(), valuations.end(), i) -
                                    valuations.begin());
}

std::size_t corank_mod_p_generic(const TriMatrix& m) {
    const u64 p = m.modulus().p();
    const Modulus field(p, 1);
    const std::size_t n = m.n();
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = m.at(i, j) % p;
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n) continue;
        if (pivot != rank) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(rank, j), a(pivot, j));
        }
        const u64 inv = field.inverse_unit(a(rank, col));
        for (std::size_t i = rank + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            const u64 f = field.mul(a(i, col), inv);
            for (std::size_t j = col; j < n; ++j) {
                if (a(rank, j) != 0) a(i, j) = field.sub(a(i, j), field.mul(f, a(rank, j)));
            }
        }
        ++rank;
    }
    return n - rank;
}

std::size_t corank_mod_2_packed(const TriMatrix& m) {
    require(m.modulus().p() == 2, "bit-packed elimination requires p = 2");
    const std::size_t n = m.n();
    const std::size_t words = (n + 63) / 64;
    // Rows are inserted top-down into an echelon basis keyed by leading column.
    // Row i is supported on columns 0..i, so every reduction only touches the
    // words at or below the current leading column.
    std::vector<u64> basis(n * words, 0);
    std::vector<char> has_pivot(n, 0);
    std::vector<u64> row(words);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t used = i / 64 + 1;
        std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(used), 0);
        auto src = m.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            if (src[j] & 1) row[j / 64] |= u64{1} << (j % 64);
        }
        std::size_t top = used;
        while (top > 0) {
            const u64 w = row[top - 1];
            if (w == 0) {
                --top;
                continue;
            }
            const std::size_t lead = (top - 1) * 64 + (63 - static_cast<std::size_t>(std::countl_zero(w)));
            if (!has_pivot[lead]) {
                std::copy(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(top),
                          basis.begin() + static_cast<std::ptrdiff_t>(lead * words));
                has_pivot[lead] = 1;
                ++rank;
                break;
            }
            const u64* b = basis.data() + lead * words;
            for (std::size_t k = 0; k < top; ++k) row[k] ^= b[k];
        }
    }
    return n - rank;
}

std::size_t corank_mod_p(const TriMatrix& m) {
    return m.modulus().p() == 2 ? corank_mod_2_packed(m) : corank_mod_p_generic(m);
}

CokernelType invariant_valuations(const TriMatrix& m) {
    return CokernelType(m.n(), m.modulus().exponent(), smith_valuations(m.to_dense(), m.modulus()));
}

std::vector<std::size_t> rank_profile(const CokernelType& ct, int d) {
    require(d >= 1, "rank profile depth must be positive");
    require(d <= ct.precision, fmt::format("rank profile depth d = {} exceeds precision E = {}", d, ct.precision));
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) out.push_back(ct.rank_of_multiple(i));
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] > out[i - 1]) throw NumericalError("rank profile is not weakly decreasing");
    }
    return out;
}

void write_matrix(std::ostream& out, const TriMatrix& m) {
    out << m.modulus().p() << ' ' << m.modulus().exponent() << ' ' << m.n() << '\n';
    for (std::size_t i = 0; i < m.n(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j <= i; ++j) out << (j ? " " : "") << r[j];
        out << '\n';
    }
}

TriMatrix read_matrix(std::istream& in) {
    u64 p = 0;
    int e = 0;
    std::size_t n = 0;
    require(static_cast<bool>(in >> p >> e >> n), "matrix dump: expected header 'p E n'");
    TriMatrix m(n, Modulus(p, e));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            u64 x = 0;
            require(static_cast<bool>(in >> x), fmt::format("matrix dump: row {} is truncated", i));
            require(x < m.modulus().value(), fmt::format("matrix dump: residue {} out of range", x));
            m.set(i, j, x);
        }
    }
    return m;
}

} // namespace trirank
