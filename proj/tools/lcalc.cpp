// lcalc: command-line front end for the Levi-Civita calculus library.
//
// Exit codes: 0 success / pass / certified, 1 fail / refuted,
// 2 inconclusive, 3 usage or evaluation error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "levi/levi.hpp"
#include "levi/serialize.hpp"

namespace {

using namespace levi;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitError = 3;

struct Config {
    std::string horizon;
    std::string format = "text";
    std::uint64_t seed = 0xC0FFEE;
    int samples = 8;
    std::int64_t window = 0;
};

ExpQ parse_horizon(const std::string& text) {
    detail::LiteralScanner s(text);
    const std::int64_t num = s.integer();
    std::int64_t den = 1;
    if (s.accept('/')) {
        den = s.integer();
    }
    if (!s.at_end() || den == 0) {
        throw std::invalid_argument("horizon must be a positive integer or fraction, got '" + text + "'");
    }
    const ExpQ h(num, den);
    if (!(ExpQ(0) < h)) {
        throw std::invalid_argument("horizon must be positive");
    }
    return h;
}

class Session {
  public:
    explicit Session(const Config& cfg) : cfg_(cfg) {
        if (!cfg.horizon.empty()) {
            base_ = parse_horizon(cfg.horizon);
        } else if (const char* env = std::getenv("LC_HORIZON"); env && *env) {
            base_ = parse_horizon(env);
        }
    }

    [[nodiscard]] bool json() const { return cfg_.format == "json"; }
    [[nodiscard]] const ExpQ& base_horizon() const { return base_; }

    /// Literal with the configured horizon, raised to `need` when the
    /// command requires more.
    [[nodiscard]] LcNumber literal(const std::string& text, const ExpQ& need = ExpQ(0)) const {
        return parse_lc(text, Horizon(need < base_ ? base_ : need));
    }

    [[nodiscard]] SamplingPlan plan() const {
        SamplingPlan p;
        p.seed = cfg_.seed;
        p.random_points = cfg_.samples;
        p.horizon = Horizon(base_);
        return p;
    }
    [[nodiscard]] std::int64_t window() const { return cfg_.window; }

  private:
    Config cfg_;
    ExpQ base_ = ExpQ(kDefaultHorizon);
};

void emit(const Session& s, const ordered_json& j, const std::string& text) {
    if (s.json()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text << "\n";
    }
}

std::string lambda_text(const ExtendedQ& v) { return v.str(); }

int run_eval(const Session& s, const std::string& expr, const std::vector<std::string>& at) {
    LcEnv env;
    for (const auto& binding : at) {
        const auto eq = binding.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("--at expects VAR=LITERAL, got '" + binding + "'");
        }
        env.insert_or_assign(binding.substr(0, eq), s.literal(binding.substr(eq + 1)));
    }
    const LcNumber r = eval_lc(parse_expr(expr), env);
    emit(s, {{"value", to_literal(r)}, {"horizon", to_json(r.horizon())}}, to_literal(r));
    return kExitOk;
}

int run_derive(const Session& s, const std::string& expr, const std::string& var, const std::string& at, int order) {
    const LcNumber x0 = s.literal(at, ExpQ(order + 1));
    const LcNumber r = derivative_at(parse_expr(expr), var, x0, order);
    emit(s, {{"order", order}, {"at", to_json(x0)}, {"value", to_literal(r)}}, to_literal(r));
    return kExitOk;
}

int run_taylor(const Session& s, const std::string& expr, const std::string& var, const std::string& at, int order) {
    const TaylorJet jet = taylor_jet(parse_expr(expr), var, s.literal(at, ExpQ(order + 1)), order);
    std::string text;
    for (std::size_t j = 0; j < jet.coeffs.size(); ++j) {
        text += (j ? "\n" : "") + std::to_string(j) + ": " + to_literal(jet.coeffs[j]);
    }
    emit(s, to_json(jet), text);
    return kExitOk;
}

int run_limit(const Session& s, const std::string& f, const std::string& g, const std::string& var,
              const std::string& at) {
    const LcNumber r = lhopital_limit(parse_expr(f), parse_expr(g), var, s.literal(at));
    emit(s, {{"limit", to_literal(r)}}, to_literal(r));
    return kExitOk;
}

std::vector<LcNumber> points(const Session& s, const std::vector<std::string>& at, const ExpQ& need) {
    std::vector<LcNumber> out;
    for (const auto& a : at) {
        out.push_back(s.literal(a, need));
    }
    return out;
}

int run_wlud(const Session& s, const std::string& expr, const std::vector<std::string>& vars,
             const std::vector<std::string>& at, int k, const std::string& eps_text, const std::string& delta_text) {
    const Expr f = parse_expr(expr);
    const LcNumber eps = s.literal(eps_text);
    const LcNumber delta = s.literal(delta_text);
    const SamplingPlan plan = s.plan();
    if (delta.is_zero()) {
        throw domain_error("delta must be positive");
    }
    const ExpQ need = detail::sample_horizon(plan, k, delta).value();
    const std::vector<LcNumber> x0 = points(s, at, need);
    const WludReport r = vars.size() == 1 ? wlud_check_1d(f, vars[0], x0.at(0), k, eps, delta, plan)
                                          : wlud_check_nd(f, vars, x0, k, eps, delta, plan);
    std::string text = std::string("result: ") + to_string(r.result) + "\nsamples: " + std::to_string(r.samples) +
                       " (" + std::to_string(r.inconclusive) + " inconclusive)\nmargin: " + lambda_text(r.margin);
    if (r.worst_pair) {
        auto pt = [](const std::vector<LcNumber>& p) {
            std::string o;
            for (std::size_t i = 0; i < p.size(); ++i) {
                o += (i ? ", " : "") + to_literal(p[i]);
            }
            return p.size() == 1 ? o : "(" + o + ")";
        };
        text += "\nworst pair: x = " + pt(r.worst_pair->x) + ", y = " + pt(r.worst_pair->y) +
                "\n  lhs = " + to_literal(r.worst_pair->lhs) + "\n  rhs = " + to_literal(r.worst_pair->rhs);
    }
    emit(s, to_json(r), text);
    switch (r.result) {
    case WludResult::pass:
        return kExitOk;
    case WludResult::fail:
        return kExitFail;
    default:
        return kExitInconclusive;
    }
}

int run_analyticity(const Session& s, const std::string& expr, const std::vector<std::string>& vars,
                    const std::vector<std::string>& at, int jmax, int kmax) {
    const Expr f = parse_expr(expr);
    const SamplingPlan plan = s.plan();
    // The widest ladder candidate needs the largest sample horizon.
    const ExpQ need = std::max(ExpQ(jmax + 1), detail::sample_horizon(plan, kmax, LcNumber::constant(1.0)).value());
    const std::vector<LcNumber> x0 = points(s, at, need);
    const AnalyticityCertificate c =
        vars.size() == 1 ? analyticity_certificate_1d(f, vars[0], x0.at(0), jmax, kmax, default_ladder(), plan,
                                                      s.window())
                         : analyticity_certificate_nd(f, vars, x0, jmax, kmax, default_ladder(), plan, s.window());
    std::string text = std::string("verdict: ") + to_string(c.verdict) + "\nlambda0: " + lambda_text(c.lambda0) +
                       " (head " + lambda_text(c.lambda0_head) + ", window " + std::to_string(c.window) + ")";
    text += "\ndelta ladder:";
    for (const auto& e : c.delta_ladder) {
        text += "\n  k = " + std::to_string(e.k) + ": delta = " + to_literal(e.delta);
    }
    if (c.t) {
        text += "\nt: " + c.t->str() + "\nrequired radius lambda: " + c.required_radius_lambda->str() +
                "\ndelta: " + to_literal(*c.delta);
    }
    std::size_t visible = 0;
    for (const auto& ic : c.identity_checks) {
        visible += ic.visible() ? 1 : 0;
    }
    text += "\nidentity checks: " + std::to_string(c.identity_checks.size()) + " (" + std::to_string(visible) +
            " with visible residual)";
    if (!c.note.empty()) {
        text += "\nnote: " + c.note;
    }
    emit(s, to_json(c), text);
    switch (c.verdict) {
    case CertificateVerdict::certified_at_scale:
        return kExitOk;
    case CertificateVerdict::refuted:
        return kExitFail;
    default:
        return kExitInconclusive;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Levi-Civita field calculator"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--horizon", cfg.horizon, "Horizon for literals (default 32, or LC_HORIZON)");
    app.add_option("--seed", cfg.seed, "Seed for sampled checks");
    app.add_option("--samples", cfg.samples, "Random sample points per check")->check(CLI::NonNegativeNumber);
    app.add_option("--window", cfg.window, "Trailing window for lambda0 (0 = default)")
        ->check(CLI::NonNegativeNumber);

    std::string expr;
    std::string expr2;
    std::string var;
    std::vector<std::string> vars;
    std::string at;
    std::vector<std::string> ats;
    int order = 1;
    int k = 1;
    int jmax = 16;
    int kmax = 4;
    std::string eps = "1";
    std::string delta = "d";

    auto* eval = app.add_subcommand("eval", "Evaluate an expression at Levi-Civita arguments");
    eval->add_option("expr", expr, "Expression")->required();
    eval->add_option("--at", ats, "Binding VAR=LITERAL (repeatable)");

    auto* derive = app.add_subcommand("derive", "Derivative of order J at a point");
    derive->add_option("expr", expr, "Expression")->required();
    derive->add_option("--var", var, "Variable")->required();
    derive->add_option("--at", at, "Point (literal)")->required();
    derive->add_option("--order", order, "Derivative order")->check(CLI::NonNegativeNumber);

    auto* taylor = app.add_subcommand("taylor", "Taylor jet f^(j)(x0)/j!, j = 0..K");
    taylor->add_option("expr", expr, "Expression")->required();
    taylor->add_option("--var", var, "Variable")->required();
    taylor->add_option("--at", at, "Center (literal)")->required();
    taylor->add_option("--order", order, "Jet order")->check(CLI::NonNegativeNumber);

    auto* limit = app.add_subcommand("limit", "Limit of F/G at a 0/0 point");
    limit->add_option("f", expr, "Numerator")->required();
    limit->add_option("g", expr2, "Denominator")->required();
    limit->add_option("--var", var, "Variable")->required();
    limit->add_option("--at", at, "Point (literal)")->required();

    auto* wlud = app.add_subcommand("wlud-check", "Sampled WLUD^k check");
    wlud->add_option("expr", expr, "Expression")->required();
    wlud->add_option("--var", vars, "Variables (repeat or comma-separate)")->required()->delimiter(',');
    wlud->add_option("--at", ats, "Center coordinate (repeat for several)")->required();
    wlud->add_option("--k", k, "Order k")->check(CLI::NonNegativeNumber);
    wlud->add_option("--eps", eps, "Epsilon (literal)");
    wlud->add_option("--delta", delta, "Ball radius (literal)");

    auto* analytic = app.add_subcommand("analyticity", "Analyticity certificate at a point");
    analytic->add_option("expr", expr, "Expression")->required();
    analytic->add_option("--var,--vars", vars, "Variables (repeat or comma-separate)")->required()->delimiter(',');
    analytic->add_option("--at", ats, "Center coordinate (repeat for several)")->required();
    analytic->add_option("--jmax", jmax, "Jet order")->check(CLI::PositiveNumber);
    analytic->add_option("--kmax", kmax, "Largest k in the delta ladder")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        const Session s(cfg);
        if (*eval) {
            return run_eval(s, expr, ats);
        }
        if (*derive) {
            return run_derive(s, expr, var, at, order);
        }
        if (*taylor) {
            return run_taylor(s, expr, var, at, order);
        }
        if (*limit) {
            return run_limit(s, expr, expr2, var, at);
        }
        if (vars.size() != ats.size()) {
            throw std::invalid_argument("need one --at per --var");
        }
        if (*wlud) {
            return run_wlud(s, expr, vars, ats, k, eps, delta);
        }
        return run_analyticity(s, expr, vars, ats, jmax, kmax);
    } catch (const std::exception& e) {
        std::cerr << "lcalc: " << e.what() << "\n";
        return kExitError;
    }
}
