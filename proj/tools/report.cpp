#include "report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "bowtie/errors.hpp"

namespace bowtie::cli {

using nlohmann::json;

Format format_from_string(std::string_view s)
{
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "text") return Format::Text;
    throw OutOfRange("unknown output format '" + std::string(s) + "'");
}

namespace {

double parse_double(std::string_view s, std::string_view whole)
{
    double x = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(x))
        throw OutOfRange("cannot read radius '" + std::string(whole) + "'");
    return x;
}

}  // namespace

Radius parse_radius(std::string_view text)
{
    if (text == "inf" || text == "infinity") return Radius::infinity();
    if (text.starts_with("2^")) return Radius::from_log2(parse_double(text.substr(2), text));
    if (text.starts_with("e^")) return Radius::from_ln(parse_double(text.substr(2), text));
    const double r = parse_double(text, text);
    if (r < 0) throw OutOfRange("radius must be nonnegative, got " + std::string(text));
    return Radius::from_value(r);
}

json num(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json radius(Radius r) { return {{"value", num(r.value())}, {"log2", num(r.log2())}}; }

json window(const Window& w) { return {{"lo", radius(w.lo)}, {"hi", radius(w.hi)}}; }

namespace {

json exponent(const Exponent& p) { return {{"text", p.to_string()}, {"value", num(p.value())}}; }

json numbers(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) out.push_back(num(x));
    return out;
}

json samples(const std::vector<LimitSample>& v)
{
    json out = json::array();
    for (const auto& s : v) out.push_back({{"inner", radius(s.inner)}, {"log_value", num(s.log_value)}});
    return out;
}

}  // namespace

json to_json(const CapacityResult& r)
{
    json j{{"value", num(r.value)},
           {"log_value", num(r.log_value)},
           {"log_full_space", num(r.log_full_space)},
           {"domain", to_string(r.domain)},
           {"method", r.method}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const OracleResult& r)
{
    return {{"log_value", num(r.log_value)},
            {"log_series", num(r.log_series)},
            {"log_descent", num(r.log_descent)},
            {"nodes", r.nodes},
            {"iterations", r.iterations}};
}

json to_json(const PointCapacityLimit& r)
{
    return {{"sequence", samples(r.sequence)},
            {"converged", r.converged},
            {"log_limit", num(r.log_limit)}};
}

json to_json(const CapacityConditionReport& r)
{
    json s = json::array();
    for (const auto& x : r.ratio_samples) s.push_back({{"r", radius(x.r)}, {"log_ratio", num(x.log_ratio)}});
    json j{{"p", exponent(r.p)},
           {"window", window(r.window)},
           {"verdict", to_string(r.verdict)},
           {"fitted_slope", num(r.fitted_slope)},
           {"log_spread", num(r.log_spread)},
           {"decrements", numbers(r.decrements)},
           {"upper_bound_ok", r.upper_bound_ok},
           {"ratio_samples", s}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const ApReport& r)
{
    json j{{"p", exponent(r.p)},
           {"space", to_string(r.space)},
           {"window", window(r.window)},
           {"sets_scanned", r.sets_scanned},
           {"log_sup_ratio", num(r.log_sup_ratio)},
           {"witness",
            {{"t", radius(r.witness.t)}, {"r", radius(r.witness.r)}, {"log_ratio", num(r.witness.log_ratio)}}},
           {"stage_log_sup", numbers(r.stage_log_sup)},
           {"growth", numbers(r.growth)},
           {"verdict", to_string(r.verdict)}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const ExponentEstimate& r)
{
    json s = json::array();
    for (const auto& x : r.slope_samples)
        s.push_back({{"rho", radius(x.rho)}, {"r", radius(x.r)}, {"slope", num(x.slope)}});
    return {{"Q_hat", num(r.Q_hat)},
            {"Q_hat_extended", num(r.Q_hat_extended)},
            {"saturated", r.saturated},
            {"r_min", radius(r.r_min)},
            {"r0", radius(r.r0)},
            {"r0_proxied", r.r0_proxied},
            {"max_pair", {{"rho", radius(r.max_pair.rho)}, {"r", radius(r.max_pair.r)}, {"slope", num(r.max_pair.slope)}}},
            {"notes", r.notes},
            {"slope_samples", s}};
}

json to_json(const ExponentComparison& r)
{
    json j{{"verdict", to_string(r.verdict)},
           {"delta_q", num(r.delta_q)},
           {"estimate", to_json(r.estimate)},
           {"notes", r.notes}};
    j["tie_break"] = r.tie_break ? json(to_string(*r.tie_break)) : json(nullptr);
    return j;
}

json to_json(const P1SlopeReport& r)
{
    json j{{"verdict", to_string(r.verdict)},
           {"Q_hat", num(r.Q_hat)},
           {"log_min_half", num(r.log_min_half)},
           {"log_min_full", num(r.log_min_full)}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const DoublingReport& r)
{
    json g = json::array();
    for (const auto& s : r.grid)
        g.push_back({{"center_ratio", num(s.center_ratio)}, {"r", radius(s.r)}, {"ratio", num(s.ratio)}});
    return {{"constant_estimate", num(r.constant_estimate)},
            {"refined_estimate", num(r.refined_estimate)},
            {"doubling", r.doubling},
            {"witness",
             {{"center_ratio", num(r.witness.center_ratio)}, {"r", radius(r.witness.r)}, {"ratio", num(r.witness.ratio)}}},
            {"grid", g}};
}

json to_json(const DecisionReport& r)
{
    auto opt = [](const auto& o) { return o ? to_json(*o) : json(nullptr); };
    const bool p1 = r.p.value() == 1.0;
    return {{"p", exponent(r.p)},
            {"weight", r.weight},
            {"window", window(r.window)},
            {"final", to_string(r.final)},
            {"routes",
             {{"condition_v", to_string(r.condition_v)},
              {"condition_iv", to_string(r.condition_iv)},
              {"exponent", p1 ? "not_applicable" : to_string(r.exponent_route)},
              {"p1_slope", p1 ? to_string(r.p1_route) : "not_applicable"}}},
            {"line_ap", opt(r.line_ap)},
            {"rn_ap", opt(r.rn_ap)},
            {"capacity_condition", opt(r.capacity)},
            {"exponent", opt(r.exponent)},
            {"p1_slope", opt(r.p1)},
            {"notes", r.notes}};
}

namespace {

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, const json*>>& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
    } else {
        out.emplace_back(path, &j);
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string text_value(const json& v)
{
    if (v.is_number_float()) return fmt::format("{:.6g}", v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// Long sample arrays are summarised in text output.
json trimmed(const json& j)
{
    if (j.is_array() && j.size() > 12) return fmt::format("<{} entries>", j.size());
    if (j.is_array()) {
        json out = json::array();
        for (const auto& x : j) out.push_back(trimmed(x));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = trimmed(it.value());
        return out;
    }
    return j;
}

}  // namespace

std::string render(const json& report, Format f)
{
    if (f == Format::Json) return report.dump(2) + "\n";
    std::vector<std::pair<std::string, const json*>> leaves;
    const json shown = f == Format::Text ? trimmed(report) : report;
    flatten(f == Format::Text ? shown : report, "", leaves);
    std::ostringstream os;
    if (f == Format::Csv) {
        os << "key,value\n";
        for (const auto& [k, v] : leaves)
            os << csv_field(k) << ',' << csv_field(v->is_string() ? v->get<std::string>() : v->dump()) << '\n';
    } else {
        for (const auto& [k, v] : leaves) os << k << ": " << text_value(*v) << '\n';
    }
    return os.str();
}

}  // namespace bowtie::cli
