#pragma once

// Sampled checks of weak local uniform differentiability and the
// analyticity certificates built on them. Every verdict holds for the
// sampled points only.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "number.hpp"
#include "series.hpp"

namespace levi {

struct SamplingPlan {
    std::uint64_t seed = 0xC0FFEE;
    /// Seeded multi-term offsets added to the deterministic grid.
    int random_points = 8;
    /// Cap on the pairs examined by one check; larger pair sets are thinned
    /// with a fixed stride.
    std::size_t max_pairs = 200;
    /// Cap on the identity checks of a certificate.
    std::size_t max_identity_checks = 24;
    /// Minimum horizon of sample points.
    Horizon horizon = Horizon(kDefaultHorizon);
};

enum class WludResult { pass, fail, inconclusive };

inline const char* to_string(WludResult r) {
    switch (r) {
    case WludResult::pass:
        return "pass";
    case WludResult::fail:
        return "fail";
    default:
        return "inconclusive";
    }
}

/// A sampled pair and both sides of |f(y) - T_k(x; y)| <= eps |y - x|^k.
struct WitnessPair {
    std::vector<LcNumber> x;
    std::vector<LcNumber> y;
    LcNumber lhs;
    LcNumber rhs;
};

struct WludReport {
    std::vector<LcNumber> x0;
    int k = 0;
    LcNumber epsilon;
    LcNumber delta;
    std::size_t samples = 0;
    /// Pairs where the two sides agree up to the horizon.
    std::size_t inconclusive = 0;
    WludResult result = WludResult::inconclusive;
    std::optional<WitnessPair> worst_pair;
    /// lambda(rhs) - lambda(lhs) at the worst pair; -inf when every lhs vanished.
    ExtendedQ margin = ExtendedQ::neg_infinity();
    /// True when every sampled lhs was exactly zero before noise filtering.
    bool lhs_all_zero = true;
};

enum class CertificateVerdict { certified_at_scale, refuted, inconclusive };

inline const char* to_string(CertificateVerdict v) {
    switch (v) {
    case CertificateVerdict::certified_at_scale:
        return "certified_at_scale";
    case CertificateVerdict::refuted:
        return "refuted";
    default:
        return "inconclusive";
    }
}

struct LadderEntry {
    int k = 0;
    LcNumber delta;
    Valuation lambda;
};

struct IdentityCheck {
    std::vector<LcNumber> x;
    std::vector<LcNumber> y;
    /// lambda of the residual above rounding noise; inf when invisible.
    Valuation residual_lambda;
    Horizon horizon;
    [[nodiscard]] bool visible() const { return !residual_lambda.is_pos_inf(); }
};

struct AnalyticityCertificate {
    std::vector<LcNumber> x0;
    int jmax = 0;
    int kmax = 0;
    std::int64_t window = 0;
    /// Trailing-window estimate and the estimate over all indices.
    ExtendedQ lambda0;
    ExtendedQ lambda0_head;
    std::vector<LadderEntry> delta_ladder;
    std::optional<ExpQ> t;
    std::optional<ExpQ> required_radius_lambda;
    std::optional<LcNumber> delta;
    std::vector<IdentityCheck> identity_checks;
    CertificateVerdict verdict = CertificateVerdict::inconclusive;
    std::string note;
};

/// {d^(m/2) : m = 0..8}, largest first.
inline std::vector<LcNumber> default_ladder() {
    std::vector<LcNumber> l;
    for (int m = 0; m <= 8; ++m) {
        l.push_back(LcNumber::monomial(1.0, ExpQ(m, 2)));
    }
    return l;
}

namespace detail {

inline void require_positive(const LcNumber& v, const char* what) {
    if (compare(v, LcNumber::zero()) != Ordering::greater) {
        throw domain_error(std::string(what) + " must be positive");
    }
}

/// Offsets inside the ball of radius delta: c d^m with c in {1, 1/2, 2},
/// both signs, m = lambda(delta)+1 .. lambda(delta)+4 in steps of 1/2,
/// followed by seeded multi-term offsets in the same exponent range.
inline std::vector<LcNumber> ball_offsets(const LcNumber& delta, const SamplingPlan& plan, const Horizon& h) {
    const ExpQ base = delta.lambda().value() + ExpQ(1);
    std::vector<LcNumber> out;
    for (int m = 0; m <= 6; ++m) {
        for (double c : {1.0, 0.5, 2.0}) {
            for (double s : {1.0, -1.0}) {
                out.push_back(LcNumber::monomial(s * c, base + ExpQ(m, 2), h));
            }
        }
    }
    std::mt19937_64 rng(plan.seed);
    for (int r = 0; r < plan.random_points; ++r) {
        const std::uint64_t count = 1 + rng() % 3;
        std::vector<Term> raw;
        for (std::uint64_t t = 0; t < count; ++t) {
            const ExpQ e = base + ExpQ(static_cast<std::int64_t>(rng() % 13), 4);
            double c = (static_cast<double>(rng() % 31) - 15.0) / 8.0;
            raw.push_back({e, c == 0.0 ? 0.125 : c});
        }
        LcNumber o = LcNumber::normalize(std::move(raw), h);
        out.push_back(o.is_zero() ? LcNumber::monomial(1.0, base, h) : o);
    }
    return out;
}

inline Horizon sample_horizon(const SamplingPlan& plan, int k, const LcNumber& delta) {
    const ExpQ top = delta.lambda().value() + ExpQ(4);
    return max(plan.horizon, Horizon(ExpQ(k + 2) * top + ExpQ(1)));
}

/// Coordinate i of point p is x0_i + offsets[(p + i * step) mod G], so the
/// points stay in the sup-norm ball and n = 1 reproduces the 1-d samples.
inline std::vector<std::vector<LcNumber>> ball_points(const std::vector<LcNumber>& x0,
                                                      const std::vector<LcNumber>& offsets) {
    constexpr std::size_t step = 7;
    const std::size_t g = offsets.size();
    std::vector<std::vector<LcNumber>> pts;
    for (std::size_t p = 0; p < g; ++p) {
        std::vector<LcNumber> pt;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            pt.push_back(x0[i] + offsets[(p + i * step) % g]);
        }
        pts.push_back(std::move(pt));
    }
    return pts;
}

inline bool same_point(const std::vector<LcNumber>& a, const std::vector<LcNumber>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] - b[i]).is_zero()) {
            return false;
        }
    }
    return true;
}

/// Ordered pairs of distinct points, thinned by a fixed stride to at most
/// `cap` pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(const std::vector<std::vector<LcNumber>>& pts,
                                                                     std::size_t cap) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j && !same_point(pts[i], pts[j])) {
                all.emplace_back(i, j);
            }
        }
    }
    if (cap == 0 || all.size() <= cap) {
        return all;
    }
    const std::size_t stride = (all.size() + cap - 1) / cap;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < all.size(); i += stride) {
        out.push_back(all[i]);
    }
    return out;
}

inline LcNumber sup_norm(const std::vector<LcNumber>& v) {
    LcNumber best = LcNumber::zero();
    for (const auto& c : v) {
        LcNumber a = abs_val(c);
        if (compare(a, best) == Ordering::greater) {
            best = a;
        }
    }
    return best;
}

inline LcEnv bind(const std::vector<std::string>& vars, const std::vector<LcNumber>& pt) {
    LcEnv env;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        env.insert_or_assign(vars[i], pt[i]);
    }
    return env;
}

/// Shared driver: `approx(i, j)` returns T_k(x_i; x_j) for the pair.
template <class Approx>
WludReport run_check(const Expr& f, const std::vector<std::string>& vars, const std::vector<LcNumber>& x0, int k,
                     const LcNumber& eps, const LcNumber& delta, const std::vector<std::vector<LcNumber>>& pts,
                     const SamplingPlan& plan, Approx approx) {
    WludReport rep;
    rep.x0 = x0;
    rep.k = k;
    rep.epsilon = eps;
    rep.delta = delta;
    std::map<std::size_t, LcNumber> values;
    auto value = [&](std::size_t i) -> const LcNumber& {
        auto it = values.find(i);
        if (it == values.end()) {
            it = values.emplace(i, eval_lc(f, bind(vars, pts[i]))).first;
        }
        return it->second;
    };
    bool decided = false;
    for (auto [i, j] : sample_pairs(pts, plan.max_pairs)) {
        ++rep.samples;
        const LcNumber fy = value(j);
        const LcNumber ty = approx(i, j);
        rep.lhs_all_zero = rep.lhs_all_zero && (fy - ty).is_zero();
        const LcNumber lhs = abs_val(difference_above_noise(fy, ty));
        std::vector<LcNumber> v;
        for (std::size_t c = 0; c < x0.size(); ++c) {
            v.push_back(pts[j][c] - pts[i][c]);
        }
        const LcNumber rhs = eps * pow(sup_norm(v), k);
        const ExtendedQ margin = rhs.lambda() - lhs.lambda();
        const Ordering o = compare(lhs, rhs);
        if (o == Ordering::equal_at_horizon) {
            ++rep.inconclusive;
            continue;
        }
        if (!rep.worst_pair || rep.margin < margin || o == Ordering::greater) {
            rep.margin = margin;
            rep.worst_pair = WitnessPair{pts[i], pts[j], lhs, rhs};
        }
        if (o == Ordering::greater) {
            rep.result = WludResult::fail;
            return rep;
        }
        decided = true;
    }
    rep.result = decided ? WludResult::pass : WludResult::inconclusive;
    return rep;
}

} // namespace detail

/// Samples |f(y) - sum_{j<=k} f^(j)(x)/j! (y-x)^j| <= eps |y-x|^k over
/// pairs in (x0 - delta, x0 + delta); stops at the first violation.
inline WludReport wlud_check_1d(const Expr& f, const std::string& var, const LcNumber& x0, int k,
                                const LcNumber& eps, const LcNumber& delta, const SamplingPlan& plan = {}) {
    detail::require_positive(eps, "epsilon");
    detail::require_positive(delta, "delta");
    if (k < 0) {
        throw std::invalid_argument("k must be nonnegative");
    }
    const Horizon h = detail::sample_horizon(plan, k, delta);
    const auto pts = detail::ball_points({x0}, detail::ball_offsets(delta, plan, h));
    std::map<std::size_t, TaylorJet> jets;
    return detail::run_check(f, {var}, {x0}, k, eps, delta, pts, plan, [&](std::size_t i, std::size_t j) {
        auto it = jets.find(i);
        if (it == jets.end()) {
            it = jets.emplace(i, taylor_jet(f, var, pts[i][0], k)).first;
        }
        return taylor_polynomial_eval(it->second, pts[j][0], k);
    });
}

/// n-variable form with the sup norm; the approximation at eta is
/// f(xi) + sum_{j=1..k} (1/j!) [(eta - xi) . grad]^j f(xi).
inline WludReport wlud_check_nd(const Expr& f, const std::vector<std::string>& vars, const std::vector<LcNumber>& x0,
                                int k, const LcNumber& eps, const LcNumber& delta, const SamplingPlan& plan = {}) {
    detail::check_vars(vars, x0);
    detail::require_positive(eps, "epsilon");
    detail::require_positive(delta, "delta");
    if (k < 0) {
        throw std::invalid_argument("k must be nonnegative");
    }
    const Horizon h = detail::sample_horizon(plan, k, delta);
    const auto pts = detail::ball_points(x0, detail::ball_offsets(delta, plan, h));
    std::map<std::size_t, PartialJet> jets;
    return detail::run_check(f, vars, x0, k, eps, delta, pts, plan, [&](std::size_t i, std::size_t j) {
        auto it = jets.find(i);
        if (it == jets.end()) {
            it = jets.emplace(i, partial_jet(f, vars, pts[i], k)).first;
        }
        std::vector<LcNumber> v;
        for (std::size_t c = 0; c < vars.size(); ++c) {
            v.push_back(pts[j][c] - pts[i][c]);
        }
        LcNumber acc = it->second.table.begin()->second;
        for (int m = 1; m <= k; ++m) {
            acc += directional_power(it->second, v, m).divided(detail::factorial(m));
        }
        return acc;
    });
}

namespace detail {

inline void require_descending(const std::vector<LcNumber>& ladder) {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        require_positive(ladder[i], "ladder candidate");
        if (i > 0 && compare(ladder[i - 1], ladder[i]) != Ordering::greater) {
            throw std::invalid_argument("delta ladder must be strictly descending");
        }
    }
}

template <class Check>
std::vector<LadderEntry> ladder_search(int kmax, const std::vector<LcNumber>& ladder, Check check) {
    require_descending(ladder);
    std::vector<LadderEntry> out;
    for (int k = 1; k <= kmax; ++k) {
        for (const auto& delta : ladder) {
            if (check(k, delta).result == WludResult::pass) {
                out.push_back({k, delta, delta.lambda()});
                break;
            }
        }
    }
    return out;
}

/// Fills t, the required radius and delta from the ladder; false when some
/// k in 1..kmax has no passing candidate.
inline bool choose_radius(AnalyticityCertificate& cert) {
    std::vector<int> missing;
    for (int k = 1; k <= cert.kmax; ++k) {
        if (std::none_of(cert.delta_ladder.begin(), cert.delta_ladder.end(),
                         [k](const LadderEntry& e) { return e.k == k; })) {
            missing.push_back(k);
        }
    }
    if (!missing.empty()) {
        cert.note = "no ladder candidate passes for k =";
        for (int k : missing) {
            cert.note += " " + std::to_string(k);
        }
        return false;
    }
    ExtendedQ top = ExtendedQ::neg_infinity();
    for (const auto& e : cert.delta_ladder) {
        top = max(top, e.lambda);
    }
    std::int64_t t = top.is_finite() ? top.value().floor() + 1 : 1;
    t = std::max<std::int64_t>(t, 1);
    cert.t = ExpQ(t);
    ExtendedQ req = max(ExtendedQ(ExpQ(t)), ExtendedQ(0));
    if (cert.lambda0.is_finite()) {
        req = max(req, cert.lambda0);
    }
    cert.required_radius_lambda = req.value();
    cert.delta = LcNumber::monomial(1.0, req.value() + ExpQ(1));
    return true;
}

inline void conclude(AnalyticityCertificate& cert) {
    if (cert.identity_checks.empty()) {
        cert.verdict = CertificateVerdict::inconclusive;
        cert.note = "no identity checks were run";
        return;
    }
    for (const auto& c : cert.identity_checks) {
        if (c.visible()) {
            cert.verdict = CertificateVerdict::refuted;
            return;
        }
    }
    cert.verdict = CertificateVerdict::certified_at_scale;
}

inline IdentityCheck identity_check(std::vector<LcNumber> x, std::vector<LcNumber> y, const LcNumber& series,
                                    const LcNumber& direct) {
    const LcNumber residual = difference_above_noise(series, direct);
    return {std::move(x), std::move(y), residual.lambda(), residual.horizon()};
}

} // namespace detail

/// For each k = 1..kmax the first ladder candidate delta (largest first)
/// for which wlud_check_1d with eps = 1 passes.
inline std::vector<LadderEntry> delta_ladder_search(const Expr& f, const std::string& var, const LcNumber& x0,
                                                    int kmax, const std::vector<LcNumber>& ladder,
                                                    const SamplingPlan& plan = {}) {
    const LcNumber one = LcNumber::constant(1.0);
    return detail::ladder_search(kmax, ladder, [&](int k, const LcNumber& delta) {
        return wlud_check_1d(f, var, x0, k, one, delta, plan);
    });
}

inline std::vector<LadderEntry> delta_ladder_search_nd(const Expr& f, const std::vector<std::string>& vars,
                                                       const std::vector<LcNumber>& x0, int kmax,
                                                       const std::vector<LcNumber>& ladder,
                                                       const SamplingPlan& plan = {}) {
    const LcNumber one = LcNumber::constant(1.0);
    return detail::ladder_search(kmax, ladder, [&](int k, const LcNumber& delta) {
        return wlud_check_nd(f, vars, x0, k, one, delta, plan);
    });
}

/// Builds the jet, the delta ladder and the radius, then compares f(y)
/// with the recentered series sum at sampled x, y in the chosen ball.
/// `window` 0 selects the default trailing window.
inline AnalyticityCertificate analyticity_certificate_1d(const Expr& f, const std::string& var, const LcNumber& x0,
                                                         int jmax, int kmax,
                                                         const std::vector<LcNumber>& ladder = default_ladder(),
                                                         const SamplingPlan& plan = {}, std::int64_t window = 0) {
    if (jmax < 1 || kmax < 1) {
        throw std::invalid_argument("jmax and kmax must be at least 1");
    }
    AnalyticityCertificate cert;
    cert.x0 = {x0};
    cert.jmax = jmax;
    cert.kmax = kmax;
    cert.window = window > 0 ? window : default_window(jmax);
    const PowerSeries series = taylor_jet(f, var, x0, jmax).to_series();
    cert.lambda0 = lambda0_estimate(series, cert.window);
    cert.lambda0_head = lambda0_estimate(series, jmax);
    cert.delta_ladder = delta_ladder_search(f, var, x0, kmax, ladder, plan);
    if (!detail::choose_radius(cert)) {
        return cert;
    }
    const auto offsets = detail::ball_offsets(*cert.delta, plan, plan.horizon);
    std::vector<LcNumber> xs{x0};
    std::vector<LcNumber> ys;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (i % 7 == 3) {
            xs.push_back(x0 + offsets[i]);
        }
        if (i % 5 == 0) {
            ys.push_back(x0 + offsets[i]);
        }
    }
    std::vector<std::vector<LcNumber>> pts;
    for (const auto& x : xs) {
        pts.push_back({x});
    }
    for (const auto& y : ys) {
        pts.push_back({y});
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            if (!(xs[i] - ys[j]).is_zero()) {
                pairs.emplace_back(i, j);
            }
        }
    }
    if (pairs.size() > plan.max_identity_checks && plan.max_identity_checks > 0) {
        const std::size_t stride = (pairs.size() + plan.max_identity_checks - 1) / plan.max_identity_checks;
        std::vector<std::pair<std::size_t, std::size_t>> thin;
        for (std::size_t i = 0; i < pairs.size(); i += stride) {
            thin.push_back(pairs[i]);
        }
        pairs = std::move(thin);
    }
    std::map<std::size_t, PowerSeries> recentered;
    try {
        for (auto [i, j] : pairs) {
            auto it = recentered.find(i);
            if (it == recentered.end()) {
                it = recentered.emplace(i, recenter(series, xs[i], cert.window)).first;
            }
            cert.identity_checks.push_back(detail::identity_check(
                {xs[i]}, {ys[j]}, sum_at(it->second, ys[j]), eval_lc(f, {{var, ys[j]}})));
        }
    } catch (const not_in_radius& e) {
        cert.identity_checks.clear();
        detail::conclude(cert);
        cert.note = e.what();
        return cert;
    } catch (const not_convergent& e) {
        cert.identity_checks.clear();
        detail::conclude(cert);
        cert.note = e.what();
        return cert;
    }
    detail::conclude(cert);
    return cert;
}

/// n-variable certificate: lambda0 from the largest partial of each total
/// degree, ladder from wlud_check_nd, identity checks of
/// f(eta) = f(x0) + sum_j (1/j!) [(eta - x0) . grad]^j f(x0).
inline AnalyticityCertificate analyticity_certificate_nd(const Expr& f, const std::vector<std::string>& vars,
                                                         const std::vector<LcNumber>& x0, int jmax, int kmax,
                                                         const std::vector<LcNumber>& ladder = default_ladder(),
                                                         const SamplingPlan& plan = {}, std::int64_t window = 0) {
    detail::check_vars(vars, x0);
    if (jmax < 1 || kmax < 1) {
        throw std::invalid_argument("jmax and kmax must be at least 1");
    }
    AnalyticityCertificate cert;
    cert.x0 = x0;
    cert.jmax = jmax;
    cert.kmax = kmax;
    cert.window = window > 0 ? window : default_window(jmax);
    const PartialJet pj = partial_jet(f, vars, x0, jmax);
    // a_j stands in for the largest partial of total degree j.
    PowerSeries levels{LcNumber::zero(), std::vector<LcNumber>(static_cast<std::size_t>(jmax) + 1, LcNumber::zero())};
    for (const auto& [alpha, c] : pj.table) {
        int deg = 0;
        for (int a : alpha) {
            deg += a;
        }
        auto& slot = levels.coeffs[static_cast<std::size_t>(deg)];
        if (!c.is_zero() && (slot.is_zero() || c.lambda() < slot.lambda())) {
            slot = LcNumber::monomial(1.0, c.lambda().value());
        }
    }
    cert.lambda0 = lambda0_estimate(levels, cert.window);
    cert.lambda0_head = lambda0_estimate(levels, jmax);
    cert.delta_ladder = delta_ladder_search_nd(f, vars, x0, kmax, ladder, plan);
    if (!detail::choose_radius(cert)) {
        return cert;
    }
    const auto pts = detail::ball_points(x0, detail::ball_offsets(*cert.delta, plan, plan.horizon));
    const std::size_t cap = plan.max_identity_checks > 0 ? plan.max_identity_checks : pts.size();
    const std::size_t stride = (pts.size() + cap - 1) / cap;
    const LcNumber f0 = eval_lc(f, detail::bind(vars, x0));
    for (std::size_t p = 0; p < pts.size(); p += stride) {
        std::vector<LcNumber> v;
        for (std::size_t c = 0; c < x0.size(); ++c) {
            v.push_back(pts[p][c] - x0[c]);
        }
        LcNumber acc = f0;
        for (int j = 1; j <= jmax; ++j) {
            acc += directional_power(pj, v, j).divided(detail::factorial(j));
        }
        acc = acc.truncated(detail::truncation_horizon(jmax, cert.lambda0, detail::sup_norm(v).lambda()));
        cert.identity_checks.push_back(
            detail::identity_check(x0, pts[p], acc, eval_lc(f, detail::bind(vars, pts[p]))));
    }
    detail::conclude(cert);
    return cert;
}

} // namespace levi
