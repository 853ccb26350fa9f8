#include "trirank/oracles.hpp"

#include "trirank/errors.hpp"

#include <algorithm>
#include <utility>

namespace trirank {

std::vector<int> integer_smith_valuations(std::vector<std::vector<BigInt>> a, u64 p, int cap) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    const std::size_t diag = std::min(rows, cols);
    for (std::size_t t = 0; t < diag; ++t) {
        // bring the smallest nonzero entry of the trailing block to (t, t),
        // reduce its row and column, and repeat until both are clear and the
        // pivot divides the whole block
        while (true) {
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (pr == rows) break;
            std::swap(a[t], a[pr]);
            for (auto& row : a) std::swap(row[t], row[pc]);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const BigInt q = a[i][t] / a[t][t];
                if (q != 0) {
                    for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                }
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const BigInt q = a[t][j] / a[t][t];
                if (q != 0) {
                    for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                }
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad_row = rows;
            for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (a[i][j] % a[t][t] != 0) {
                        bad_row = i;
                        break;
                    }
                }
            }
            if (bad_row == rows) break;
            for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad_row][j];
        }
    }

    std::vector<int> out;
    for (std::size_t t = 0; t < diag; ++t) {
        BigInt x = abs(a[t][t]);
        if (x == 0) {
            out.push_back(CokernelType::kInfinite);
            continue;
        }
        int v = 0;
        while (x % p == 0 && v < cap) {
            x /= p;
            ++v;
        }
        out.push_back(v >= cap ? CokernelType::kInfinite : v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CokernelType exact_cokernel_type(const TriMatrix& m) {
    const std::size_t n = m.n();
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) a[i][j] = m.at(i, j);
    }
    const int cap = m.modulus().exponent();
    return CokernelType(n, cap, integer_smith_valuations(std::move(a), m.modulus().p(), cap));
}

double tau_by_convolution(const EntryDist& dist, const Partition& group, std::span<const std::size_t> v) {
    const AbelianPGroup g(group, dist.p());
    require(group.largest() <= dist.precision(), "group exponent exceeds the precision of the law");
    const auto law = dist.reduced(std::max(group.largest(), 1)).support();
    std::vector<double> current(g.order(), 0.0);
    current[0] = 1.0;
    std::vector<double> next(g.order());
    for (std::size_t x : v) {
        require(x < g.order(), "element is not in the group");
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < g.order(); ++s) {
            if (current[s] == 0) continue;
            for (auto [r, q] : law) next[g.add(s, g.scale(r, x))] += current[s] * q;
        }
        current.swap(next);
    }
    return current[0];
}

EntryDist valuation_heavy_law(u64 p, int precision) {
    const Modulus mod(p, precision);
    std::vector<std::pair<u64, double>> w{{0, 0.25}, {1, 0.2}, {p - 1, 0.1}};
    for (int k = 1; k < precision; ++k) {
        w.emplace_back(mod.power(k), 0.15);
        w.emplace_back(mod.add(mod.mul(mod.power(k), p - 1), 1), 0.05);
        w.emplace_back(mod.mul(mod.power(k), p - 1), 0.1);
    }
    return EntryDist(p, precision, std::move(w));
}

} // namespace trirank
