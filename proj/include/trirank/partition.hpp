#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace trirank {

/// A weakly decreasing tuple of positive integers.
///
/// Doubles as the type of the abelian p-group G_λ = ⊕ Z/p^{λ_i} and as a
/// nonnegative signature with at most `length()` nonzero parts.
class Partition {
public:
    Partition() = default;
    /// Throws ValidationError unless `parts` is weakly decreasing and positive.
    explicit Partition(std::vector<int> parts);

    /// Sorts into decreasing order and discards zeros.
    static Partition from_unsorted(std::vector<int> parts);
    /// Parses "3,1,1"; the empty string (or "0") is the empty partition.
    static Partition parse(std::string_view text);

    const std::vector<int>& parts() const { return parts_; }
    std::size_t length() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
    int largest() const { return parts_.empty() ? 0 : parts_.front(); }
    /// |λ|
    int size() const;

    std::string to_string() const;

    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

/// λ'_i = #{j : λ_j >= i}.
Partition conjugate(const Partition& lambda);

/// ℓ with |G_λ| = p^ℓ.
int group_order_exponent(const Partition& lambda);

/// Every partition of n, in reverse lexicographic order.
std::vector<Partition> partitions_of(int n);

} // namespace trirank
