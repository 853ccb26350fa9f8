#include "trirank/canonical_json.hpp"

#include "trirank/errors.hpp"

#include <cmath>

#include <fmt/format.h>

namespace trirank {

namespace {

void emit(const Json& v, std::string& out) {
    switch (v.type()) {
    case Json::value_t::object: {
        out += '{';
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) out += ',';
            first = false;
            out += Json(key).dump();
            out += ':';
            emit(item, out);
        }
        out += '}';
        break;
    }
    case Json::value_t::array: {
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            emit(v[i], out);
        }
        out += ']';
        break;
    }
    case Json::value_t::number_float: {
        const double x = v.get<double>();
        out += std::isfinite(x) ? fmt::format("{:.17g}", x) : "null";
        break;
    }
    default:
        out += v.dump();
    }
}

template <typename T>
T field(const Json& j, const char* key) {
    require(j.is_object() && j.contains(key), fmt::format("missing field '{}'", key));
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ValidationError(fmt::format("field '{}': {}", key, e.what()));
    }
}

double number_or_zero(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return 0.0;
    return field<double>(j, key);
}

Json partition_json(const Partition& l) { return Json(l.parts()); }

} // namespace

std::string to_canonical(const Json& value) {
    std::string out;
    emit(value, out);
    return out;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ValidationError(fmt::format("malformed JSON: {}", e.what()));
    }
}

Json histogram_to_json(const FluctuationHistogram& h) {
    Json counts = Json::array();
    for (const auto& [x, c] : h.counts) counts.push_back({{"x", x}, {"count", c}});
    return {
        {"p", h.p},
        {"d", h.d},
        {"n", h.n},
        {"zeta", h.zeta},
        {"zeta_policy", h.zeta_policy},
        {"trials", h.trials},
        {"seed", h.seed},
        {"E", h.precision},
        {"dist", h.dist},
        {"centering", h.centering},
        {"counts", counts},
    };
}

FluctuationHistogram histogram_from_json(const Json& j) {
    require(j.is_object(), "histogram must be a JSON object");
    FluctuationHistogram h;
    h.p = field<u64>(j, "p");
    h.d = field<int>(j, "d");
    h.n = field<std::size_t>(j, "n");
    h.zeta = field<double>(j, "zeta");
    h.trials = field<u64>(j, "trials");
    h.seed = field<u64>(j, "seed");
    h.zeta_policy = j.contains("zeta_policy") ? field<std::string>(j, "zeta_policy") : "explicit";
    h.precision = j.contains("E") ? field<int>(j, "E") : 0;
    h.dist = j.contains("dist") ? field<std::string>(j, "dist") : "";
    h.centering = j.contains("centering") ? field<std::int64_t>(j, "centering") : 0;
    require(is_prime(h.p), fmt::format("histogram p = {} is not prime", h.p));
    require(h.d >= 1, "histogram d must be positive");

    const Json& counts = j.at("counts");
    require(counts.is_array(), "'counts' must be an array");
    u64 total = 0;
    for (const auto& item : counts) {
        auto x = field<std::vector<std::int64_t>>(item, "x");
        const auto c = field<u64>(item, "count");
        require(x.size() == static_cast<std::size_t>(h.d), fmt::format("count key has {} coordinates, expected d = {}", x.size(), h.d));
        require(!h.counts.contains(x), "duplicate count key");
        h.counts.emplace(std::move(x), c);
        total += c;
    }
    require(total == h.trials, fmt::format("counts sum to {} but trials = {}", total, h.trials));
    return h;
}

Json report_to_json(const FitReport& r) {
    Json moments = Json::array();
    for (const auto& m : r.moments) {
        moments.push_back({
            {"lambda", partition_json(m.lambda)},
            {"empirical", m.empirical},
            {"stderr", m.std_error},
            {"theory", m.theory},
            {"median_of_means", m.median_of_means},
        });
    }
    Json points = Json::array();
    for (const auto& pt : r.points) points.push_back({{"x", pt.x}, {"empirical", pt.empirical}, {"theory", pt.theory}});
    Json j = {
        {"params", {{"p", r.params.p}, {"d", r.params.d}, {"zeta", r.params.zeta}, {"chi0", r.params.chi0}, {"chi", r.params.chi}}},
        {"has_pmf", r.has_pmf},
        {"moments", moments},
        {"points", points},
    };
    if (r.has_pmf) {
        j["tv"] = r.tv;
        j["chi2"] = r.chi2;
        j["dof"] = r.dof;
        j["chi2_pvalue"] = r.chi2_pvalue;
    } else {
        j["tv"] = nullptr;
        j["chi2"] = nullptr;
        j["dof"] = nullptr;
        j["chi2_pvalue"] = nullptr;
    }
    return j;
}

FitReport report_from_json(const Json& j) {
    require(j.is_object(), "report must be a JSON object");
    FitReport r;
    const Json params = field<Json>(j, "params");
    r.params.p = field<u64>(params, "p");
    r.params.d = field<int>(params, "d");
    r.params.zeta = field<double>(params, "zeta");
    r.params.chi0 = field<double>(params, "chi0");
    r.params.chi = field<double>(params, "chi");
    r.has_pmf = field<bool>(j, "has_pmf");
    r.tv = number_or_zero(j, "tv");
    r.chi2 = number_or_zero(j, "chi2");
    r.chi2_pvalue = j.contains("chi2_pvalue") && !j.at("chi2_pvalue").is_null() ? field<double>(j, "chi2_pvalue") : 1.0;
    r.dof = j.contains("dof") && !j.at("dof").is_null() ? field<int>(j, "dof") : 0;
    for (const auto& m : field<Json>(j, "moments")) {
        MomentRow row;
        row.lambda = Partition(field<std::vector<int>>(m, "lambda"));
        row.empirical = number_or_zero(m, "empirical");
        row.std_error = number_or_zero(m, "stderr");
        row.theory = number_or_zero(m, "theory");
        row.median_of_means = number_or_zero(m, "median_of_means");
        r.moments.push_back(row);
    }
    for (const auto& pt : field<Json>(j, "points")) {
        r.points.push_back({field<std::int64_t>(pt, "x"), number_or_zero(pt, "empirical"), number_or_zero(pt, "theory")});
    }
    return r;
}

std::string report_to_csv(const FitReport& r) {
    std::string out = "x,empirical,theory\n";
    for (const auto& pt : r.points) out += fmt::format("{},{:.17g},{:.17g}\n", pt.x, pt.empirical, pt.theory);
    return out;
}

} // namespace trirank
