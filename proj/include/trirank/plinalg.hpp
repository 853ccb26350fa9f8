#pragma once

#include "trirank/local_smith.hpp"
#include "trirank/modular.hpp"

#include <climits>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace trirank {

/// Dense u64 matrix of residues; used for small presentations and as the
/// working copy of elimination.
using DenseMatrix = BasicMatrix<u64>;

/// Smith valuations over Z/p^e; see local_smith_valuations for the contract.
std::vector<int> smith_valuations(DenseMatrix a, const Modulus& mod, DenseMatrix* left_inverse = nullptr);

/// Lower triangular n x n matrix with entries mod p^E, row i holding columns 0..i.
class TriMatrix {
public:
    TriMatrix(std::size_t n, const Modulus& mod);

    static TriMatrix identity(std::size_t n, const Modulus& mod);
    static TriMatrix zero(std::size_t n, const Modulus& mod) { return TriMatrix(n, mod); }
    /// Builds from explicit rows; row i must have i + 1 entries. Entries are reduced.
    static TriMatrix from_rows(const std::vector<std::vector<u64>>& rows, const Modulus& mod);

    std::size_t n() const { return n_; }
    const Modulus& modulus() const { return mod_; }

    u64 at(std::size_t i, std::size_t j) const { return j > i ? 0 : data_[offset(i) + j]; }
    void set(std::size_t i, std::size_t j, u64 value);
    std::span<u64> row(std::size_t i) { return {data_.data() + offset(i), i + 1}; }
    std::span<const u64> row(std::size_t i) const { return {data_.data() + offset(i), i + 1}; }

    DenseMatrix to_dense() const;

    friend bool operator==(const TriMatrix& a, const TriMatrix& b) {
        return a.mod_ == b.mod_ && a.n_ == b.n_ && a.data_ == b.data_;
    }

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }

    std::size_t n_;
    Modulus mod_;
    std::vector<u64> data_;
};

/// p-adic valuations of the invariant factors of an n x n matrix, capped at
/// the working precision: every valuation >= precision is stored as kInfinite.
struct CokernelType {
    static constexpr int kInfinite = INT_MAX;

    std::size_t n = 0;
    int precision = 0;
    std::vector<int> valuations; // ascending, size n

    CokernelType() = default;
    CokernelType(std::size_t n, int precision, std::vector<int> valuations);

    /// #{valuations < i}
    std::size_t count_below(int i) const;
    /// n - #{valuations < i} = rank(p^{i-1} Γ) for 1 <= i <= precision.
    std::size_t rank_of_multiple(int i) const { return n - count_below(i); }

    friend bool operator==(const CokernelType&, const CokernelType&) = default;
};

/// dim ker(M mod p). Uses bit-packed rows for p = 2.
std::size_t corank_mod_p(const TriMatrix& m);
/// Dense Gaussian elimination over F_p for any p; reference path.
std::size_t corank_mod_p_generic(const TriMatrix& m);
/// Word-wide XOR elimination; requires p = 2.
std::size_t corank_mod_2_packed(const TriMatrix& m);

/// Valuations of the Smith normal form of M over Z/p^E.
CokernelType invariant_valuations(const TriMatrix& m);

/// (rank(p^{i-1} Γ))_{i=1..d}; requires d <= ct.precision. The tuple is weakly decreasing.
std::vector<std::size_t> rank_profile(const CokernelType& ct, int d);

/// Debug dump: header "p E n", then row i as i+1 space-separated residues.
void write_matrix(std::ostream& out, const TriMatrix& m);
TriMatrix read_matrix(std::istream& in);

} // namespace trirank
