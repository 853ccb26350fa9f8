#include "trirank/entry_dist.hpp"

#include "trirank/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

namespace trirank {

namespace {

constexpr std::size_t kMaxMaterialized = std::size_t{1} << 24;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, std::string_view what) {
    s = trim(s);
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    require(ec == std::errc() && ptr == s.data() + s.size(), fmt::format("cannot parse {} '{}'", what, s));
    return out;
}

u64 parse_u64(std::string_view s, std::string_view what) {
    s = trim(s);
    u64 out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    require(ec == std::errc() && ptr == s.data() + s.size(), fmt::format("cannot parse {} '{}'", what, s));
    return out;
}

} // namespace

EntryDist::EntryDist(u64 p, int precision, std::vector<std::pair<u64, double>> weights)
    : p_(p), precision_(precision) {
    const Modulus mod(p, precision);
    std::map<u64, double> acc;
    double total = 0;
    for (auto [r, w] : weights) {
        require(std::isfinite(w) && w >= 0, fmt::format("weight for residue {} must be a nonnegative number", r));
        require(r < mod.value(), fmt::format("residue {} is not below p^E = {}", r, mod.value()));
        if (w == 0) continue;
        acc[r] += w;
        total += w;
    }
    require(total > 0, "distribution has no mass");
    for (auto [r, w] : acc) weights_.emplace_back(r, w / total);
    validate();
    // equal mass on every residue is the uniform law, which samples a word at a time
    const double even = 1.0 / static_cast<double>(mod.value());
    if (weights_.size() == mod.value() &&
        std::all_of(weights_.begin(), weights_.end(), [&](const auto& rw) { return std::fabs(rw.second - even) <= 1e-15 * even; })) {
        weights_.clear();
        uniform_ = true;
    }
}

EntryDist EntryDist::symmetric(u64 p, double alpha) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(alpha > 0 && alpha < 1, fmt::format("alpha = {} must lie in (0, 1)", alpha));
    std::vector<std::pair<u64, double>> w;
    w.emplace_back(0, alpha);
    for (u64 r = 1; r < p; ++r) w.emplace_back(r, (1 - alpha) / static_cast<double>(p - 1));
    return EntryDist(p, 1, std::move(w));
}

EntryDist EntryDist::uniform(u64 p, int precision) {
    (void)Modulus(p, precision);
    EntryDist d;
    d.p_ = p;
    d.precision_ = precision;
    d.uniform_ = true;
    return d;
}

EntryDist EntryDist::parse(std::string_view text, u64 p, int precision) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    text = trim(text);
    if (text == "uniform") return uniform(p, precision);
    if (text.starts_with("symmetric")) {
        auto rest = trim(text.substr(9));
        require(rest.starts_with(":"), "expected 'symmetric:alpha=A'");
        rest = trim(rest.substr(1));
        require(rest.starts_with("alpha="), "expected 'symmetric:alpha=A'");
        return symmetric(p, parse_double(rest.substr(6), "alpha"));
    }
    std::vector<std::pair<u64, double>> weights;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        const auto colon = item.find(':');
        require(colon != std::string_view::npos, fmt::format("distribution item '{}' is not 'residue:weight'", item));
        weights.emplace_back(parse_u64(item.substr(0, colon), "residue"),
                             parse_double(item.substr(colon + 1), "weight"));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
        require(!trim(text).empty(), "trailing comma in distribution");
    }
    require(!weights.empty(), "empty distribution");
    return EntryDist(p, precision, std::move(weights));
}

void EntryDist::validate() const {
    const double q = prob_divisible_by_p();
    require(q > 1e-15 && q < 1 - 1e-15,
            fmt::format("P(p | xi) = {} must lie strictly between 0 and 1", q));
}

std::vector<std::pair<u64, double>> EntryDist::support() const {
    if (!uniform_) return weights_;
    const u64 size = modulus().value();
    if (size > kMaxMaterialized) {
        throw ResourceError(fmt::format("uniform law on {} residues is too large to tabulate", size));
    }
    std::vector<std::pair<u64, double>> out;
    out.reserve(size);
    for (u64 r = 0; r < size; ++r) out.emplace_back(r, 1.0 / static_cast<double>(size));
    return out;
}

double EntryDist::prob_divisible_by_p() const {
    if (uniform_) return 1.0 / static_cast<double>(p_);
    double q = 0;
    for (auto [r, w] : weights_) {
        if (r % p_ == 0) q += w;
    }
    return q;
}

EntryDist EntryDist::reduced(int k) const {
    require(k >= 1 && k <= precision_, fmt::format("cannot reduce precision {} to {}", precision_, k));
    if (uniform_) return uniform(p_, k);
    const u64 m = Modulus(p_, k).value();
    std::vector<std::pair<u64, double>> w;
    for (auto [r, q] : weights_) w.emplace_back(r % m, q);
    return EntryDist(p_, k, std::move(w));
}

EntryDist EntryDist::at_precision(int k) const {
    if (k <= precision_) return reduced(k);
    if (uniform_) return uniform(p_, k);
    const Modulus target(p_, k);
    const u64 step = modulus().value();
    const u64 lifts = target.value() / step;
    if (lifts * weights_.size() > kMaxMaterialized) {
        throw ResourceError("lifted distribution is too large to tabulate");
    }
    std::vector<std::pair<u64, double>> w;
    for (auto [r, q] : weights_) {
        for (u64 j = 0; j < lifts; ++j) w.emplace_back(r + j * step, q / static_cast<double>(lifts));
    }
    return EntryDist(p_, k, std::move(w));
}

std::string EntryDist::describe() const {
    if (uniform_) return "uniform";
    std::string out;
    for (auto [r, q] : weights_) out += fmt::format("{}{}:{:.17g}", out.empty() ? "" : ",", r, q);
    return out;
}

EntrySampler::EntrySampler(const EntryDist& dist) : uniform_(dist.is_uniform()) {
    if (uniform_) {
        uniform_draw_ = std::uniform_int_distribution<u64>(0, dist.modulus().value() - 1);
        return;
    }
    std::vector<double> w;
    for (auto [r, q] : dist.support()) {
        residues_.push_back(r);
        w.push_back(q);
    }
    pick_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

CharacterTable::CharacterTable(const EntryDist& dist, const Partition& group)
    : type_(group), p_(dist.p()) {
    require(group.largest() <= dist.precision(),
            fmt::format("group exponent p^{} exceeds the precision p^{} of the entry law", group.largest(),
                        dist.precision()));
    if (group.empty()) {
        top_ = 1;
        psi_.assign(1, 1.0);
        roots_.assign(1, 1.0);
        return;
    }
    const Modulus top(p_, group.largest());
    top_ = top.value();
    for (int part : group.parts()) {
        const u64 m = top.power(part);
        moduli_.push_back(m);
        scale_.push_back(top_ / m);
        if (static_cast<double>(order_) * static_cast<double>(m) > 1e9) {
            throw ResourceError("character group too large");
        }
        order_ *= m;
    }
    if (top_ > kMaxMaterialized) throw ResourceError("character table too large");
    roots_.resize(top_);
    for (u64 s = 0; s < top_; ++s) {
        const double angle = 2 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(top_);
        roots_[s] = {std::cos(angle), std::sin(angle)};
    }
    psi_.assign(top_, 0.0);
    const auto law = dist.reduced(group.largest()).support();
    for (u64 s = 0; s < top_; ++s) {
        std::complex<double> acc = 0;
        for (auto [r, q] : law) acc += q * roots_[static_cast<u64>((static_cast<u128>(r) * s) % top_)];
        psi_[s] = acc;
    }
    psi_[0] = 1.0;
}

u64 CharacterTable::pairing(std::size_t w, std::size_t g) const {
    u128 s = 0;
    for (std::size_t t = 0; t < moduli_.size(); ++t) {
        const u64 m = moduli_[t];
        s += static_cast<u128>(w % m) * (g % m) % m * scale_[t];
        w /= m;
        g /= m;
    }
    return static_cast<u64>(s % top_);
}

double CharacterTable::spectral_gap() const {
    double gap = 0;
    for (u64 s = 1; s < top_; ++s) gap = std::max(gap, std::abs(psi_[s]));
    return gap;
}

double vanishing_probability(const CharacterTable& table, std::span<const std::size_t> v, std::size_t target) {
    require(target < table.order(), "target is not an element of the group");
    std::complex<double> total = 0;
    for (std::size_t w = 0; w < table.order(); ++w) {
        std::complex<double> prod = std::conj(table.character(w, target));
        for (std::size_t x : v) {
            prod *= table.phi(w, x);
            if (prod == 0.0) break;
        }
        total += prod;
    }
    return std::max(0.0, total.real() / static_cast<double>(table.order()));
}

double tau(const CharacterTable& table, std::span<const std::size_t> v) { return vanishing_probability(table, v, 0); }

double tau(const EntryDist& dist, const Partition& group, std::span<const std::size_t> v) {
    return tau(CharacterTable(dist, group), v);
}

TauAccumulator::TauAccumulator(const CharacterTable& table) : table_(&table), products_(table.order(), 1.0) {}

double TauAccumulator::push(std::size_t element) {
    require(element < table_->order(), "element is not in the group");
    ++length_;
    if (element != 0) {
        for (std::size_t w = 1; w < products_.size(); ++w) products_[w] *= table_->phi(w, element);
    }
    return value();
}

double TauAccumulator::value() const {
    std::complex<double> total = 0;
    for (const auto& z : products_) total += z;
    return std::max(0.0, total.real() / static_cast<double>(products_.size()));
}

void TauAccumulator::reset() {
    std::fill(products_.begin(), products_.end(), 1.0);
    length_ = 0;
}

} // namespace trirank
