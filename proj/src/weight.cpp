#include "bowtie/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "bowtie/errors.hpp"
#include "bowtie/quadrature.hpp"

namespace bowtie {

std::string to_string(Family family)
{
    switch (family) {
    case Family::PowerLog: return "power_log";
    case Family::DyadicStaircase: return "dyadic_staircase";
    case Family::PiecewiseSegments: return "piecewise";
    case Family::Tabulated: return "tabulated";
    }
    return "unknown";
}

WeightSpec WeightSpec::power_log(int n, double alpha, double beta)
{
    return WeightSpec{n, PowerLogParams{alpha, beta}};
}

WeightSpec WeightSpec::dyadic_staircase(double log2_rho_min)
{
    return WeightSpec{2, DyadicStaircaseParams{log2_rho_min}};
}

WeightSpec WeightSpec::piecewise(int n, std::vector<Segment> segments)
{
    return WeightSpec{n, PiecewiseParams{std::move(segments)}};
}

WeightSpec WeightSpec::tabulated(int n, std::vector<std::pair<double, double>> samples)
{
    return WeightSpec{n, TabulatedParams{std::move(samples)}};
}

WeightSpec WeightSpec::inner_power(int n, double alpha)
{
    return piecewise(n, {Segment{0.0, 1.0, 1.0, alpha}, Segment{1.0, kInf, 1.0, 0.0}});
}

double log_sphere_area(int n)
{
    const double h = 0.5 * n;
    return std::log(2.0) + h * std::log(std::numbers::pi) - std::lgamma(h);
}

double log_power_integral(double e, double ln_lo, double ln_hi)
{
    if (!(ln_lo < ln_hi)) return -kInf;
    const double lam = e + 1.0;
    if (lam == 0.0) {
        if (ln_lo == -kInf || ln_hi == kInf) return kInf;
        return std::log(ln_hi - ln_lo);
    }
    if (lam > 0.0) {
        if (ln_hi == kInf) return kInf;
        if (ln_lo == -kInf) return lam * ln_hi - std::log(lam);
        return lam * ln_hi + std::log(-std::expm1(-lam * (ln_hi - ln_lo))) - std::log(lam);
    }
    if (ln_lo == -kInf) return kInf;
    if (ln_hi == kInf) return lam * ln_lo - std::log(-lam);
    return lam * ln_lo + std::log(-std::expm1(lam * (ln_hi - ln_lo))) - std::log(-lam);
}

namespace {

// ln ∫_{u1}^{u2} e^{-λu} u^d du for 1 ≤ u1 < u2 ≤ ∞, integrated in v = ln u.
// The log integrand is monotone on either side of its one critical point;
// each monotone piece is cut where it has dropped by e^80 from its top.
double log_exp_power_integral(double lam, double d, double u1, double u2)
{
    const double v1 = std::log(u1);
    const double v2 = std::log(u2);
    auto g = [&](double v) {
        const double t = lam * std::exp(v);
        return -t + (d + 1.0) * v;
    };
    std::vector<double> cuts{v1};
    if (lam != 0.0 && (d + 1.0) / lam > 0.0) {
        const double vc = std::log((d + 1.0) / lam);
        if (vc > v1 && vc < v2) cuts.push_back(vc);
    }
    cuts.push_back(v2);

    LogSum total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double l = cuts[i], r = cuts[i + 1];
        if (r == kInf) {
            // only reached for λ > 0; walk out until the integrand is negligible
            double h = 1.0;
            while (g(l + h) > g(l) - 80.0 || g(l + 2 * h) > g(l + h)) h *= 2.0;
            r = l + h;
        }
        const double gl = g(l), gr = g(r);
        const bool rising = gr > gl;
        const double floor = std::max(gl, gr) - 80.0;
        if (std::min(gl, gr) < floor) {
            double lo = l, hi = r;  // bisect for g = floor on the monotone piece
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                ((g(mid) < floor) == rising ? lo : hi) = mid;
            }
            (rising ? l : r) = rising ? lo : hi;
        }
        // relative to the top end, so that large values of g keep their precision
        const double vr = rising ? r : l;
        const double scale = lam * std::exp(vr);
        auto rel = [&](double s) { return -scale * std::expm1(s) + (d + 1.0) * s; };
        total.add(g(vr) + quad::log_integrate1(rel, l - vr, r - vr));
    }
    return total.value();
}

}  // namespace

double log_power_log_integral(double c, double d, Radius a, Radius b)
{
    if (!(a < b)) return -kInf;
    LogSum total;
    // φ ≡ 1 on [1/e, ∞).
    const double upper_lo = std::max(a.ln(), -1.0);
    if (upper_lo < b.ln()) total.add(log_power_integral(c, upper_lo, b.ln()));

    const double lower_hi = std::min(b.ln(), -1.0);
    if (a.ln() < lower_hi) {
        if (d == 0.0) {
            total.add(log_power_integral(c, a.ln(), lower_hi));
        } else {
            const double u1 = -lower_hi;
            const double u2 = -a.ln();
            const double lam = c + 1.0;
            if (lam == 0.0) {
                total.add(log_power_integral(d, std::log(u1), std::log(u2)));
            } else if (lam < 0.0 && u2 == kInf) {
                return kInf;
            } else {
                total.add(log_exp_power_integral(lam, d, u1, u2));
            }
        }
    }
    return total.value();
}

namespace detail {
namespace {

constexpr double kDefaultHalfSpan = 31.0;
constexpr double kLogFloor = 1024.0;

Window default_window()
{
    return {Radius::from_ln(-kDefaultHalfSpan), Radius::from_ln(kDefaultHalfSpan)};
}

class PowerLogProfile final : public Profile {
public:
    PowerLogProfile(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

    double log_w(Radius rho) const override
    {
        return alpha_.value() * rho.ln() + beta_.value() * std::log(phi_from_ln(rho.ln()));
    }

    double log_moment(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const override
    {
        const Exponent c = alpha_ * gamma + kappa;
        const Exponent d = beta_ * gamma;
        return log_power_log_integral(c.value(), d.value(), a, b);
    }

    double log_essinf(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const override
    {
        const Exponent ce = alpha_ * gamma + kappa;
        const Exponent de = beta_ * gamma;
        const double c = ce.value(), d = de.value();
        auto f = [&](double ln_rho) { return c * ln_rho + d * std::log(phi_from_ln(ln_rho)); };

        double best = kInf;
        if (b.is_infinite()) {
            best = std::min(best, ce.sign() > 0 ? kInf : ce.sign() < 0 ? -kInf : 0.0);
        } else {
            best = std::min(best, f(b.ln()));
        }
        if (a.is_zero()) {
            // -c u + d ln u as u → ∞
            const int s = ce.sign() != 0 ? -ce.sign() : de.sign();
            best = std::min(best, s > 0 ? kInf : s < 0 ? -kInf : 0.0);
        } else {
            best = std::min(best, f(a.ln()));
        }
        if (a.ln() < -1.0 && -1.0 < b.ln()) best = std::min(best, f(-1.0));
        if (c != 0.0) {
            const double u = d / c;  // critical point of -c u + d ln u
            if (u > 1.0 && a.ln() < -u && -u < b.ln()) best = std::min(best, f(-u));
        }
        return best;
    }

    std::vector<Radius> breakpoints(Radius a, Radius b) const override
    {
        std::vector<Radius> out;
        for (double x : {-1.0, 0.0})
            if (a.ln() < x && x < b.ln()) out.push_back(Radius::from_ln(x));
        return out;
    }

    // φ^β corrections die off like β/ln(1/r); trends only show once ln(1/r)
    // is far past that scale. Above r = 1/e the weight is a pure power.
    Window natural_window() const override
    {
        if (beta_.is_zero()) return default_window();
        return {Radius::from_ln(-kLogFloor), Radius::from_ln(kDefaultHalfSpan)};
    }

private:
    Exponent alpha_;
    Exponent beta_;
};

// w = C ρ^m on (lo, hi], all in logs. Pieces of the staircase also carry an
// exact description: ln lo = q_lo·S, ln hi = q_hi·S, ln C = q_c·S.
struct Piece {
    double ln_lo = -kInf;
    double ln_hi = kInf;
    double ln_coef = 0.0;
    Exponent m;
    struct Exact {
        Rational q_lo, q_hi, q_c;
        double scale;
    };
    std::optional<Exact> exact;
};

class PowerPiecesProfile final : public Profile {
public:
    PowerPiecesProfile(std::vector<Piece> pieces, Window window)
        : pieces_(std::move(pieces)), window_(window)
    {
    }

    double log_w(Radius rho) const override
    {
        const Piece& p = find(rho.ln());
        return p.ln_coef + p.m.value() * rho.ln();
    }

    double log_moment(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const override
    {
        LogSum total;
        for (std::size_t i = first_overlap(a.ln()); i < pieces_.size(); ++i) {
            const Piece& p = pieces_[i];
            if (p.ln_lo >= b.ln()) break;
            const double lo = std::max(p.ln_lo, a.ln());
            const double hi = std::min(p.ln_hi, b.ln());
            if (!(lo < hi)) continue;
            const bool whole = lo == p.ln_lo && hi == p.ln_hi && std::isfinite(lo) &&
                               std::isfinite(hi);
            if (whole && p.exact) {
                total.add(exact_piece(p, gamma, kappa));
            } else {
                const Exponent e = p.m * gamma + kappa;
                const double coef = gamma.is_zero() ? 0.0 : gamma.value() * p.ln_coef;
                total.add(coef + log_power_integral(e.value(), lo, hi));
            }
            if (total.value() == kInf) return kInf;
        }
        return total.value();
    }

    double log_essinf(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const override
    {
        double best = kInf;
        for (std::size_t i = first_overlap(a.ln()); i < pieces_.size(); ++i) {
            const Piece& p = pieces_[i];
            if (p.ln_lo >= b.ln()) break;
            const double lo = std::max(p.ln_lo, a.ln());
            const double hi = std::min(p.ln_hi, b.ln());
            if (!(lo < hi)) continue;
            const Exponent e = p.m * gamma + kappa;
            const double coef = gamma.is_zero() ? 0.0 : gamma.value() * p.ln_coef;
            double v;
            if (e.is_zero()) {
                v = coef;
            } else {
                const double at = e.sign() > 0 ? lo : hi;
                v = std::isfinite(at) ? coef + e.value() * at : -kInf;
            }
            best = std::min(best, v);
        }
        return best;
    }

    std::vector<Radius> breakpoints(Radius a, Radius b) const override
    {
        std::vector<Radius> out;
        for (std::size_t i = first_overlap(a.ln()); i < pieces_.size(); ++i) {
            const double x = pieces_[i].ln_hi;
            if (x >= b.ln()) break;
            if (x > a.ln()) out.push_back(Radius::from_ln(x));
        }
        return out;
    }

    Window natural_window() const override { return window_; }

private:
    static double exact_piece(const Piece& p, const Exponent& gamma, const Exponent& kappa)
    {
        const auto& x = *p.exact;
        const Exponent c = p.m * gamma + kappa + Exponent(1.0);
        const double delta = p.ln_hi - p.ln_lo;
        if (c.is_zero()) {
            const Exponent E = gamma * Exponent(x.q_c);
            return E.value() * x.scale + std::log(delta);
        }
        if (c.sign() > 0) {
            const Exponent E = gamma * Exponent(x.q_c) + c * Exponent(x.q_hi);
            return E.value() * x.scale + std::log(-std::expm1(-c.value() * delta)) -
                   std::log(c.value());
        }
        const Exponent E = gamma * Exponent(x.q_c) + c * Exponent(x.q_lo);
        return E.value() * x.scale + std::log(-std::expm1(c.value() * delta)) -
               std::log(-c.value());
    }

    std::size_t first_overlap(double ln_a) const
    {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), ln_a,
                                   [](double v, const Piece& p) { return v < p.ln_hi; });
        return std::size_t(it - pieces_.begin());
    }

    const Piece& find(double ln_rho) const
    {
        auto i = first_overlap(ln_rho);
        // ρ exactly on a boundary belongs to the piece below; both agree for
        // continuous profiles.
        if (i > 0 && pieces_[i - 1].ln_hi == ln_rho) --i;
        return pieces_[std::min(i, pieces_.size() - 1)];
    }

    std::vector<Piece> pieces_;
    Window window_;
};

std::vector<Piece> staircase_pieces(double log2_rho_min)
{
    const double floor_ln = log2_rho_min * kLn2;
    std::vector<Piece> desc;  // built from the top down
    desc.push_back(Piece{-kLn2, kInf, 0.0, Exponent(1.0),
                         Piece::Exact{Rational(-1), Rational(0), Rational(0), kLn2}});

    bool done = false;
    for (int k = 0; !done && k < 1100; ++k) {
        const double scale = std::ldexp(kLn2, k);  // 2^k ln 2
        // ρ²/α_k on [β_k, α_k], then α_{k+1} on [α_{k+1}, β_k].
        const Piece::Exact middle{Rational(-3, 2), Rational(-1), Rational(1), scale};
        const Piece::Exact flat{Rational(-2), Rational(-3, 2), Rational(-2), scale};
        for (auto [x, m] : {std::pair{middle, 2.0}, std::pair{flat, 0.0}}) {
            Piece p{x.q_lo.value() * scale, x.q_hi.value() * scale, x.q_c.value() * scale,
                    Exponent(m), x};
            if (p.ln_hi <= floor_ln) {
                done = true;
                break;
            }
            if (p.ln_lo < floor_ln) {
                p.ln_lo = floor_ln;
                p.exact.reset();
                desc.push_back(p);
                done = true;
                break;
            }
            desc.push_back(p);
        }
    }
    const Piece& last = desc.back();
    desc.push_back(Piece{-kInf, last.ln_lo, last.ln_coef + last.m.value() * last.ln_lo,
                         Exponent(0.0), std::nullopt});
    std::reverse(desc.begin(), desc.end());
    return desc;
}

}  // namespace
}  // namespace detail

namespace {

bool finite(double x) { return std::isfinite(x); }

std::shared_ptr<const detail::Profile> make_profile(const WeightSpec& spec)
{
    const int n = spec.n;
    if (n < 1 || n > 64) throw MalformedSpec("dimension n must be in [1, 64]");

    if (auto* pl = std::get_if<PowerLogParams>(&spec.params)) {
        if (!finite(pl->alpha) || !finite(pl->beta))
            throw MalformedSpec("alpha and beta must be finite");
        if (pl->alpha <= -n)
            throw NonIntegrable("alpha <= -n: the radial density is not integrable at 0");
        return std::make_shared<detail::PowerLogProfile>(pl->alpha, pl->beta);
    }

    if (auto* st = std::get_if<DyadicStaircaseParams>(&spec.params)) {
        const double l = st->log2_rho_min;
        if (!finite(l) || l > -2.0 || l < -std::ldexp(1.0, 1020))
            throw MalformedSpec("log2_rho_min must lie in [-2^1020, -2]");
        auto pieces = detail::staircase_pieces(l);
        const double ln_alpha8 = -256.0 * kLn2;
        Window window{Radius::from_ln(std::max(ln_alpha8, l * kLn2)),
                      Radius::from_ln(detail::kDefaultHalfSpan)};
        return std::make_shared<detail::PowerPiecesProfile>(std::move(pieces), window);
    }

    if (auto* pw = std::get_if<PiecewiseParams>(&spec.params)) {
        const auto& segs = pw->segments;
        if (segs.empty()) throw MalformedSpec("piecewise weight needs at least one segment");
        if (segs.front().from != 0.0) throw MalformedSpec("first segment must start at 0");
        if (segs.back().to != kInf) throw MalformedSpec("last segment must extend to infinity");
        std::vector<detail::Piece> pieces;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const Segment& s = segs[i];
            if (!(s.from < s.to) || s.from < 0.0)
                throw MalformedSpec("segment " + std::to_string(i) + " is empty or reversed");
            if (i > 0 && s.from != segs[i - 1].to)
                throw MalformedSpec("segments " + std::to_string(i - 1) + " and " +
                                    std::to_string(i) + " leave a gap or overlap");
            if (!(s.coef > 0.0) || !finite(s.coef))
                throw MalformedSpec("segment coefficients must be positive and finite");
            if (!finite(s.exponent)) throw MalformedSpec("segment exponents must be finite");
            pieces.push_back(detail::Piece{std::log(s.from), std::log(s.to), std::log(s.coef),
                                           Exponent(s.exponent), std::nullopt});
        }
        if (segs.front().exponent <= -n)
            throw NonIntegrable("first segment exponent <= -n: not integrable at 0");
        return std::make_shared<detail::PowerPiecesProfile>(std::move(pieces),
                                                            detail::default_window());
    }

    const auto& tab = std::get<TabulatedParams>(spec.params);
    auto samples = tab.samples;
    if (samples.size() < 2) throw MalformedSpec("tabulated weight needs at least 2 samples");
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [rho, w] = samples[i];
        if (!(rho > 0.0) || !finite(rho)) throw MalformedSpec("sample radii must be positive");
        if (!(w > 0.0) || !finite(w)) throw MalformedSpec("sample values must be positive");
        if (i > 0 && rho == samples[i - 1].first)
            throw MalformedSpec("duplicate sample radius");
    }
    std::vector<detail::Piece> pieces;
    const std::size_t k = samples.size();
    auto slope = [&](std::size_t i) {
        return (std::log(samples[i + 1].second) - std::log(samples[i].second)) /
               (std::log(samples[i + 1].first) - std::log(samples[i].first));
    };
    for (std::size_t i = 0; i <= k; ++i) {
        const std::size_t j = std::min(i == 0 ? 0 : i - 1, k - 2);  // segment slope source
        const double m = slope(j);
        const double ln_lo = i == 0 ? -kInf : std::log(samples[i - 1].first);
        const double ln_hi = i == k ? kInf : std::log(samples[i].first);
        const auto& anchor = samples[i == 0 ? 0 : i - 1];
        const double ln_coef = std::log(anchor.second) - m * std::log(anchor.first);
        pieces.push_back(detail::Piece{ln_lo, ln_hi, ln_coef, Exponent(m), std::nullopt});
    }
    if (pieces.front().m.value() <= -n)
        throw NonIntegrable("tabulated weight decays too fast at 0: not integrable");
    return std::make_shared<detail::PowerPiecesProfile>(std::move(pieces),
                                                        detail::default_window());
}

}  // namespace

RadialWeight::RadialWeight(WeightSpec spec, std::shared_ptr<const detail::Profile> profile)
    : spec_(std::move(spec)), profile_(std::move(profile)), log_omega_(log_sphere_area(spec_.n))
{
}

RadialWeight RadialWeight::build(const WeightSpec& spec)
{
    return RadialWeight(spec, make_profile(spec));
}

Family RadialWeight::family() const noexcept
{
    switch (spec_.params.index()) {
    case 0: return Family::PowerLog;
    case 1: return Family::DyadicStaircase;
    case 2: return Family::PiecewiseSegments;
    default: return Family::Tabulated;
    }
}

ProfileValues RadialWeight::eval(Radius rho) const
{
    ProfileValues v;
    v.log_w = log_w(rho);
    v.log_w_tilde = v.log_w + (spec_.n - 1) * rho.ln();
    if (spec_.n == 1) v.log_w_tilde = v.log_w;
    v.log_w_hat = log_omega_ + v.log_w_tilde;
    v.w = std::exp(v.log_w);
    v.w_tilde = std::exp(v.log_w_tilde);
    v.w_hat = std::exp(v.log_w_hat);
    return v;
}

double RadialWeight::log_hat_moment(const Exponent& gamma, Radius a, Radius b) const
{
    const double m = log_tilde_moment(gamma, a, b);
    if (!std::isfinite(m) || gamma.is_zero()) return m;
    return gamma.value() * log_omega_ + m;
}

double RadialWeight::log_tilde_moment(const Exponent& gamma, Radius a, Radius b) const
{
    return profile_->log_moment(gamma, Exponent(double(spec_.n - 1)) * gamma, a, b);
}

double RadialWeight::log_hat_essinf(Radius a, Radius b) const
{
    return log_omega_ + log_tilde_essinf(Exponent(1.0), a, b);
}

double RadialWeight::log_tilde_essinf(const Exponent& gamma, Radius a, Radius b) const
{
    return profile_->log_essinf(gamma, Exponent(double(spec_.n - 1)) * gamma, a, b);
}

// JSON ---------------------------------------------------------------------

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw MalformedSpec("unknown key '" + key + "' in " + where);
    }
}

double number(const json& j, const char* key, std::optional<double> fallback = {})
{
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw MalformedSpec(std::string("missing key '") + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_number()) throw MalformedSpec(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

double upper_end(const json& v)
{
    if (v.is_null()) return kInf;
    if (v.is_string() && (v == "inf" || v == "infinity")) return kInf;
    if (v.is_number()) return v.get<double>();
    throw MalformedSpec("segment 'to' must be a number, null or \"inf\"");
}

int dimension(const json& j, std::optional<int> fallback)
{
    if (!j.contains("n")) {
        if (fallback) return *fallback;
        throw MalformedSpec("missing key 'n'");
    }
    const json& v = j.at("n");
    if (!v.is_number_integer()) throw MalformedSpec("'n' must be an integer");
    return v.get<int>();
}

}  // namespace

WeightSpec weight_spec_from_json(const json& j)
{
    if (!j.is_object()) throw MalformedSpec("weight spec must be a JSON object");
    if (!j.contains("family") || !j.at("family").is_string())
        throw MalformedSpec("weight spec needs a string 'family'");
    const auto family = j.at("family").get<std::string>();

    if (family == "power_log") {
        require_keys(j, {"family", "n", "alpha", "beta"}, family);
        return WeightSpec::power_log(dimension(j, {}), number(j, "alpha"),
                                     number(j, "beta", 0.0));
    }
    if (family == "constant") {
        require_keys(j, {"family", "n"}, family);
        return WeightSpec::constant(dimension(j, {}));
    }
    if (family == "dyadic_staircase") {
        require_keys(j, {"family", "n", "log2_rho_min"}, family);
        auto spec = WeightSpec::dyadic_staircase(
            number(j, "log2_rho_min", DyadicStaircaseParams::kDefaultLog2RhoMin));
        spec.n = dimension(j, 2);
        return spec;
    }
    if (family == "piecewise") {
        require_keys(j, {"family", "n", "segments"}, family);
        if (!j.contains("segments") || !j.at("segments").is_array())
            throw MalformedSpec("piecewise weight needs a 'segments' array");
        std::vector<Segment> segs;
        for (const auto& s : j.at("segments")) {
            if (!s.is_object()) throw MalformedSpec("each segment must be an object");
            require_keys(s, {"from", "to", "coef", "exponent"}, "segment");
            if (!s.contains("to")) throw MalformedSpec("segment needs 'to'");
            segs.push_back(Segment{number(s, "from"), upper_end(s.at("to")),
                                   number(s, "coef", 1.0), number(s, "exponent", 0.0)});
        }
        return WeightSpec::piecewise(dimension(j, {}), std::move(segs));
    }
    if (family == "tabulated") {
        require_keys(j, {"family", "n", "samples"}, family);
        if (!j.contains("samples") || !j.at("samples").is_array())
            throw MalformedSpec("tabulated weight needs a 'samples' array");
        std::vector<std::pair<double, double>> samples;
        for (const auto& s : j.at("samples")) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
                throw MalformedSpec("each sample must be [rho, w]");
            samples.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
        return WeightSpec::tabulated(dimension(j, {}), std::move(samples));
    }
    throw MalformedSpec("unknown weight family '" + family + "'");
}

json weight_spec_to_json(const WeightSpec& spec)
{
    json j;
    j["n"] = spec.n;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PowerLogParams>) {
                j["family"] = "power_log";
                j["alpha"] = p.alpha;
                j["beta"] = p.beta;
            } else if constexpr (std::is_same_v<T, DyadicStaircaseParams>) {
                j["family"] = "dyadic_staircase";
                j["log2_rho_min"] = p.log2_rho_min;
            } else if constexpr (std::is_same_v<T, PiecewiseParams>) {
                j["family"] = "piecewise";
                json segs = json::array();
                for (const auto& s : p.segments) {
                    json to = std::isinf(s.to) ? json("inf") : json(s.to);
                    segs.push_back(
                        {{"from", s.from}, {"to", to}, {"coef", s.coef}, {"exponent", s.exponent}});
                }
                j["segments"] = segs;
            } else {
                j["family"] = "tabulated";
                json samples = json::array();
                for (const auto& [rho, w] : p.samples) samples.push_back({rho, w});
                j["samples"] = samples;
            }
        },
        spec.params);
    return j;
}

}  // namespace bowtie
