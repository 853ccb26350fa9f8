#include "trirank/partition.hpp"

#include "trirank/errors.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace trirank {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        require(parts_[i] >= 1, fmt::format("partition parts must be positive: {}", to_string()));
        require(i == 0 || parts_[i - 1] >= parts_[i],
                fmt::format("partition parts must be weakly decreasing: {}", to_string()));
    }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
    std::erase(parts, 0);
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

Partition Partition::parse(std::string_view text) {
    std::vector<int> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        auto token = text.substr(start, end - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) {
            int value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            require(ec == std::errc() && ptr == token.data() + token.size(),
                    fmt::format("cannot parse partition part '{}'", token));
            require(value >= 0, "partition parts must be nonnegative");
            if (value > 0) parts.push_back(value);
        } else {
            require(text.find_first_not_of(' ') == std::string_view::npos,
                    fmt::format("empty part in partition '{}'", text));
        }
        start = end + 1;
    }
    return Partition(std::move(parts));
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::string Partition::to_string() const { return fmt::format("{}", fmt::join(parts_, ",")); }

Partition conjugate(const Partition& lambda) {
    std::vector<int> columns(static_cast<std::size_t>(lambda.largest()), 0);
    for (int part : lambda.parts()) {
        for (int i = 0; i < part; ++i) ++columns[static_cast<std::size_t>(i)];
    }
    return Partition(std::move(columns));
}

int group_order_exponent(const Partition& lambda) { return lambda.size(); }

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int part = std::min(remaining, cap); part >= 1; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    rec(n, n);
    return out;
}

} // namespace trirank
