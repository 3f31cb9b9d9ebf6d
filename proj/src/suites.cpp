#include "subgeom/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "subgeom/catalog.hpp"
#include "subgeom/curvature.hpp"
#include "subgeom/error.hpp"
#include "subgeom/frame_opt.hpp"
#include "subgeom/intrinsic.hpp"
#include "subgeom/pinch.hpp"
#include "subgeom/rng.hpp"

namespace subgeom::suites {

using json = nlohmann::json;

namespace {

// Tolerances of the acceptance criteria.
constexpr double kEqualityTol = 1e-8;       // pinch slack at equality fixtures
constexpr double kMinimalTol = 1e-8;        // |H| of the projective-plane model
constexpr double kCp2SlackTol = 1e-6;
constexpr double kLempTol = 1e-9;
constexpr double kPropuTol = 1e-6;
constexpr double kClosedFormTol = 1e-10;
constexpr double kAdaptedTol = 1e-9;
constexpr double kBwNonnegTol = 1e-8;
constexpr double kIsoNonnegTol = 1e-6;
constexpr double kDupinTol = 1e-9;
constexpr double kProductSlackTol = 1e-8;
constexpr double kProductIdentityTol = 1e-10;
constexpr double kRotationalConstTol = 1e-12;
constexpr double kGaussTol = 1e-4;

constexpr int kIsoSamples = 200;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

catalog::ModelSpec spec(const std::string& id, json params) { return {id, std::move(params)}; }
Chart model(const std::string& id, json params) { return catalog::build_model(spec(id, std::move(params))); }

std::vector<Vec> random_points(const ParameterDomain& d, int count, std::uint64_t seed) {
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        Vec t(d.dim());
        for (int k = 0; k < d.dim(); ++k) t[k] = rng.uniform();
        pts.push_back(d.at_fraction(t));
    }
    return pts;
}

// Per-index values with a deterministic reduction afterwards.
template <class T, class F>
std::vector<T> map_indices(int count, Exec exec, F&& f) {
    std::vector<T> out(static_cast<std::size_t>(count));
    for_each_index(count, exec, [&](int i) { out[static_cast<std::size_t>(i)] = f(i); });
    return out;
}

int count_or(const SuiteOptions& o, int fallback) {
    if (o.count && *o.count < 1) throw ParameterError("--count must be positive");
    return o.count.value_or(fallback);
}

// ---------------------------------------------------------------------------

void equality_cases(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 100);
    double worst_eq = 0.0;
    for (const int n : {4, 6}) {
        const int k = n / 2;
        const Chart c = model("clifford_torus", {{"n", n}, {"k", k}, {"r", std::sqrt(0.5)}});
        const auto pts = random_points(c.domain(), count, o.seed + static_cast<std::uint64_t>(n));
        const auto slack = map_indices<double>(count, o.exec, [&](int i) {
            return pinching::pinch_check(sff_at(c, pts[static_cast<std::size_t>(i)]), k).slack;
        });
        for (double s : slack) worst_eq = std::max(worst_eq, std::abs(s));
    }
    bool ok = worst_eq <= kEqualityTol;
    json torus = json::object();
    for (const double radius : {0.3, 0.5, 0.6, 0.8}) {
        const Chart c = model("clifford_torus", {{"n", 4}, {"k", 1}, {"r", radius}});
        const auto pts = random_points(c.domain(), count, o.seed + 17);
        double max_slack = -std::numeric_limits<double>::infinity();
        double min_slack = std::numeric_limits<double>::infinity();
        bool satisfied = true;
        for (const Vec& u : pts) {
            const pinching::PinchReport rep = pinching::pinch_check(sff_at(c, u), 2, kEqualityTol);
            max_slack = std::max(max_slack, rep.slack);
            min_slack = std::min(min_slack, rep.slack);
            satisfied = satisfied && rep.verdict != pinching::Verdict::Violated;
        }
        // r = 1/2 sits exactly on the bound (H = 0, S = 4); the equality band decides it.
        const bool expected = radius >= 0.5;
        ok = ok && (expected ? satisfied : min_slack > 0);
        torus[fmt(radius)] = {{"max_slack", max_slack}, {"min_slack", min_slack}};
    }
    r.checks_passed = ok;
    r.metrics = {{"max_abs_equality_slack", worst_eq}, {"torus_4_1", torus}};
    r.detail = "max |S - a| at equality = " + fmt(worst_eq) + "; T(4,1,r) slack signs as expected: " + (ok ? "yes" : "no");
}

void cp2(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 50);
    const Chart c = model("cp2_veronese", {{"r", 1.0}});
    const auto pts = random_points(c.domain(), count, o.seed);
    struct Row {
        double H, slack;
        bool flat;
    };
    const auto rows = map_indices<Row>(count, o.exec, [&](int i) {
        const SFF s = sff_at(c, pts[static_cast<std::size_t>(i)]);
        const pinching::PinchReport rep = pinching::pinch_check(s, 2);
        return Row{rep.H, rep.slack, curvature::normal_curvature(s).flat};
    });
    double maxH = 0, maxSlack = 0;
    int flat = 0;
    for (const Row& row : rows) {
        maxH = std::max(maxH, row.H);
        maxSlack = std::max(maxSlack, std::abs(row.slack));
        flat += row.flat;
    }
    r.checks_passed = maxH <= kMinimalTol && maxSlack <= kCp2SlackTol && flat == 0;
    r.metrics = {{"max_H", maxH}, {"max_abs_slack", maxSlack}, {"flat_normal_points", flat}, {"points", count}};
    r.detail = "max |H| = " + fmt(maxH) + ", max |S - 4| = " + fmt(maxSlack) + ", flat normal bundle at " +
               std::to_string(flat) + "/" + std::to_string(count) + " points";
}

void lemp(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 10000);
    const pinching::LempReport rep = pinching::lemp_harness(count, o.seed, kLempTol, o.exec);
    r.checks_passed = rep.failures == 0;
    r.metrics = {{"count", count}, {"min_gap", rep.min_gap}, {"failures", rep.failures}};
    r.detail = std::to_string(count) + " samples, min gap " + fmt(rep.min_gap) + ", failures " + std::to_string(rep.failures);
}

void propu(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 10000);
    pinching::LSOptions ls;
    ls.seed = o.seed;
    const pinching::PropuReport eq = pinching::propu_harness(count, o.seed, {0.0, 1.0}, 1.0, ls, kPropuTol, o.exec);
    const pinching::PropuReport strict =
        pinching::propu_harness(count, o.seed + 1, {0.0, 1.0}, 0.9, ls, kPropuTol, o.exec);
    r.checks_passed = eq.failures == 0 && strict.failures == 0;
    r.metrics = {{"count", count},
                 {"equality_max_ls", eq.max_ls},
                 {"equality_failures", eq.failures},
                 {"strict_max_ls", strict.max_ls},
                 {"strict_failures", strict.failures}};
    r.detail = "at the bound: max ls_min " + fmt(eq.max_ls) + " (" + std::to_string(eq.failures) +
               " failures); at 90%: max ls_min " + fmt(strict.max_ls) + " (" + std::to_string(strict.failures) +
               " failures)";
}

void nnic1(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 1000);
    const auto diff = map_indices<double>(count, o.exec, [&](int i) {
        Rng rng(o.seed, static_cast<std::uint64_t>(i));
        const int m = 1 + i % 4;
        const SFF s = pinching::random_adapted_sff(m, i % 2 ? 1.0 : 0.0, rng);
        const curvature::ClosedFormBW closed = curvature::bw_adapted_closed_form(s);
        const curvature::CurvTensor R = curvature::gauss_curvature(s);
        const curvature::HodgeSplit split =
            curvature::hodge_split(curvature::bw_operator(R, curvature::ricci_scalar(R)));
        return std::max((closed.plus - split.plus).cwiseAbs().maxCoeff(),
                        (closed.minus - split.minus).cwiseAbs().maxCoeff());
    });
    const double worst = *std::max_element(diff.begin(), diff.end());
    r.checks_passed = worst <= kClosedFormTol;
    r.metrics = {{"count", count}, {"max_abs_difference", worst}};
    r.detail = std::to_string(count) + " adapted tensors, max entry difference " + fmt(worst);
}

void adapted(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 100);
    struct Row {
        double residual;
        std::string error;
    };
    const auto rows = map_indices<Row>(count, o.exec, [&](int i) -> Row {
        Rng rng(o.seed, static_cast<std::uint64_t>(i));
        const double radius = rng.uniform(0.35, 0.85);
        const Chart c = model("sphere_product", {{"k", 2}, {"r", radius}, {"R", 1.0}});
        const Vec u = random_points(c.domain(), 1, derive_seed(o.seed, static_cast<std::uint64_t>(i)))[0];
        const SFF s = sff_at(c, u).transformed(haar_orthogonal(4, rng), haar_orthogonal(2, rng));
        try {
            curvature::AdaptedFrameOptions opt;
            opt.seed = derive_seed(o.seed, static_cast<std::uint64_t>(i) + 7919);
            const curvature::AdaptedFrame f = curvature::adapted_frame(s, opt);
            return {std::max({f.residuals.a1, f.residuals.a2, f.residuals.a3}), {}};
        } catch (const Error& e) {
            return {std::numeric_limits<double>::infinity(), e.what()};
        }
    });
    double worst = 0.0;
    int errors = 0;
    std::string first_error;
    for (const Row& row : rows) {
        worst = std::max(worst, row.residual);
        if (!row.error.empty() && errors++ == 0) first_error = row.error;
    }
    r.checks_passed = errors == 0 && worst <= kAdaptedTol;
    r.metrics = {{"count", count}, {"max_residual", worst}, {"errors", errors}};
    r.detail = std::to_string(count) + " rotated equality points, max residual " + fmt(worst) +
               (errors ? ", " + std::to_string(errors) + " errors (first: " + first_error + ")" : "");
}

void sb(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 10000);
    struct Row {
        double lambda_min, iso_min;
    };
    const auto rows = map_indices<Row>(count, o.exec, [&](int i) {
        Rng rng(o.seed, static_cast<std::uint64_t>(i));
        const int m = 1 + i % 4;
        const double c = (i / 4) % 2 ? 1.0 : 0.0;
        // Half the samples straddle the pinching bound, where both signs occur; the rest
        // are unstructured Gaussian tensors.
        const SFF s = i % 8 < 4 ? pinching::random_pinched_sff(4, m, 2, c, rng.uniform(0.5, 1.5), rng)
                                : pinching::random_sff(4, m, c, rng).scaled(rng.uniform(0.2, 1.0));
        const curvature::CurvTensor R = curvature::gauss_curvature(s);
        const double lam = opt::min_eigenpair(curvature::bw_operator(R, curvature::ricci_scalar(R)).matrix).value;
        const double iso =
            curvature::isotropic_min(R, kIsoSamples, derive_seed(o.seed, static_cast<std::uint64_t>(i) + 104729)).value;
        return Row{lam, iso};
    });
    int disagree = 0, nonneg = 0;
    double worst_gap = 0.0;
    for (const Row& row : rows) {
        const bool a = row.lambda_min >= -kBwNonnegTol, b = row.iso_min >= -kIsoNonnegTol;
        disagree += a != b;
        nonneg += a;
        worst_gap = std::max(worst_gap, std::abs(row.iso_min - row.lambda_min));
    }
    r.checks_passed = disagree == 0;
    r.metrics = {{"count", count},
                 {"nonnegative", nonneg},
                 {"disagreements", disagree},
                 {"max_abs_iso_minus_lambda", worst_gap}};
    r.detail = std::to_string(count) + " samples (" + std::to_string(nonneg) + " nonnegative), disagreements " +
               std::to_string(disagree) + ", max |min iso - lambda_min| " + fmt(worst_gap);
}

void dupin(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 20);
    double torus_err = 0.0, product_err = 0.0;
    for (const double radius : {0.4, std::sqrt(0.5), 0.8}) {
        const Chart c = model("clifford_torus", {{"n", 4}, {"k", 2}, {"r", radius}});
        for (const Vec& u : random_points(c.domain(), count, o.seed))
            torus_err = std::max(torus_err, std::abs(curvature::dupin_decomposition(sff_at(c, u)).inner + 1.0));
    }
    for (const double radius : {0.4, 0.6, 0.9}) {
        const Chart c = model("sphere_product", {{"k", 2}, {"r", radius}, {"R", 1.0}});
        for (const Vec& u : random_points(c.domain(), count, o.seed + 1))
            product_err = std::max(product_err, std::abs(curvature::dupin_decomposition(sff_at(c, u)).inner));
    }
    r.checks_passed = torus_err <= kDupinTol && product_err <= kDupinTol;
    r.metrics = {{"torus_max_error", torus_err}, {"product_max_error", product_err}};
    r.detail = "tori: max |<eta1,eta2> + 1| = " + fmt(torus_err) + "; products: max |<eta1,eta2>| = " + fmt(product_err);
}

void product_curve(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 200);
    const catalog::CurveSpec circle{{dsl::parse("sqrt(1/3)*cos(t)"), dsl::parse("sqrt(1/3)*sin(t)")},
                                    0.0,
                                    2 * 3.14159265358979323846};
    const Chart base = model("round_sphere", {{"n", 3}});
    const catalog::ProductWithCurve p = catalog::product_with_curve(circle, base, 2);
    const auto pts = random_points(p.chart.domain(), count, o.seed);
    struct Row {
        double slack, s_err, h_err;
    };
    const auto rows = map_indices<Row>(count, o.exec, [&](int i) {
        const Vec& u = pts[static_cast<std::size_t>(i)];
        const Invariants f = invariants(sff_at(p.chart, u));
        const Invariants g = invariants(sff_at(base, u.tail(3)));
        const double kappa_sq = catalog::curve_curvature_sq(circle, u[0]);
        const double n = 4;
        return Row{pinching::pinch_check(f, 4, 2, 0.0).slack, std::abs(f.S - (kappa_sq + g.S)),
                   std::abs(n * n * f.H * f.H - (kappa_sq + 9 * g.H * g.H))};
    });
    double slack = -std::numeric_limits<double>::infinity(), s_err = 0, h_err = 0;
    for (const Row& row : rows) {
        slack = std::max(slack, row.slack);
        s_err = std::max(s_err, row.s_err);
        h_err = std::max(h_err, row.h_err);
    }
    r.checks_passed = p.report.feasible && slack <= kProductSlackTol && s_err <= kProductIdentityTol &&
                      h_err <= kProductIdentityTol;
    r.metrics = {{"max_slack", slack},
                 {"max_S_error", s_err},
                 {"max_H_error", h_err},
                 {"kappa_sq", p.report.max_kappa_sq},
                 {"kappa_bound", p.report.bound}};
    r.detail = "max slack " + fmt(slack) + ", identity errors " + fmt(s_err) + " / " + fmt(h_err) + ", kappa^2 " +
               fmt(p.report.max_kappa_sq) + " <= " + fmt(p.report.bound);
}

// Positive profiles with a few random coefficients.
std::string random_profile(Rng& rng, double& lo, double& hi) {
    std::ostringstream os;
    os.precision(17);
    switch (rng.uniform_int(0, 3)) {
        case 0: {
            const double b = rng.uniform(0.1, 1.0);
            os << b + rng.uniform(0.1, 2.0) << "+" << b << "*cos(" << rng.uniform(0.2, 3.0) << "*x)";
            lo = -3, hi = 3;
            break;
        }
        case 1: {
            const double R = rng.uniform(0.5, 2.0);
            os << "sqrt(" << R * R << "-x^2)";
            lo = -0.95 * R, hi = 0.95 * R;
            break;
        }
        case 2:
            os << rng.uniform(0.2, 2.0) << "*exp(" << rng.uniform(-1.0, 1.0) << "*x^2)";
            lo = -2, hi = 2;
            break;
        default: {
            // |b x| <= 1.5 |b| on the interval, so the constant term keeps u positive
            const double b = rng.uniform(-1.0, 1.0);
            os << 1.5 * std::abs(b) + rng.uniform(0.2, 2.0) << "+" << b << "*x+" << rng.uniform(0.05, 1.0) << "*x^2";
            lo = -1.5, hi = 1.5;
            break;
        }
    }
    return os.str();
}

void rotational(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 1000);
    bool fixtures = true;
    for (int n = 4; n <= 8; ++n)
        for (const double x : {-0.8, -0.3, 0.0, 0.5, 0.9}) {
            const catalog::RotationalCheck sphere = catalog::rotational_strict_check(dsl::parse("sqrt(1-x^2)"), x, n);
            const catalog::RotationalCheck cyl = catalog::rotational_strict_check(dsl::parse("2"), x, n);
            fixtures = fixtures && sphere.form_strict && sphere.window_strict && cyl.form_strict && cyl.window_strict;
        }
    const auto agree = map_indices<int>(count, o.exec, [&](int i) {
        Rng rng(o.seed, static_cast<std::uint64_t>(i));
        double lo = 0, hi = 0;
        const std::string src = random_profile(rng, lo, hi);
        const int n = rng.uniform_int(4, 8);
        return catalog::rotational_strict_check(dsl::parse(src), rng.uniform(lo, hi), n).agree ? 1 : 0;
    });
    int disagree = 0;
    for (int a : agree) disagree += 1 - a;
    const double a4_err = std::abs(catalog::rotational_a(4) - (3 + 2 * std::sqrt(3.0)));
    r.checks_passed = fixtures && disagree == 0 && a4_err <= kRotationalConstTol;
    r.metrics = {{"count", count}, {"disagreements", disagree}, {"a4_error", a4_err}, {"fixtures_strict", fixtures}};
    r.detail = std::string("sphere/cylinder strict: ") + (fixtures ? "yes" : "no") + ", disagreements " +
               std::to_string(disagree) + "/" + std::to_string(count) + ", |a4 - (3+2 sqrt3)| = " + fmt(a4_err);
}

void gauss(const SuiteOptions& o, CriterionResult& r) {
    const int count = count_or(o, 100);
    std::vector<std::pair<std::string, Chart>> charts;
    for (const catalog::ModelSpec& s : {
             spec("round_sphere", {{"n", 4}, {"R", 1.5}}),
             spec("round_sphere", {{"n", 3}, {"R", 0.8}, {"ambient", "sphere"}}),
             spec("clifford_torus", {{"n", 4}, {"k", 1}, {"r", 0.6}}),
             spec("sphere_product", {{"k", 2}, {"r", 0.6}, {"R", 1.0}}),
             spec("cp2_veronese", {{"r", 1.0}}),
             spec("ellipsoid", {{"axes", {1.0, 1.2, 1.5, 2.0, 2.5}}}),
             spec("rotational", {{"n", 4}, {"profile", "2+cos(x)"}, {"interval", {-2, 2}}}),
         })
        charts.emplace_back(s.id, catalog::build_model(s));
    const catalog::CurveSpec circle{{dsl::parse("sqrt(1/3)*cos(t)"), dsl::parse("sqrt(1/3)*sin(t)")},
                                    0.0,
                                    2 * 3.14159265358979323846};
    charts.emplace_back("product_with_curve",
                        catalog::product_with_curve(circle, model("round_sphere", {{"n", 3}}), 2).chart);

    json per_model = json::object();
    double worst = 0.0;
    for (const auto& [name, chart] : charts) {
        const auto pts = random_points(chart.domain(), count, o.seed);
        const auto err = map_indices<double>(count, o.exec, [&](int i) {
            const Vec& u = pts[static_cast<std::size_t>(i)];
            double e = 0.0;
            for (int a = 0; a < chart.dim(); ++a)
                for (int b = a + 1; b < chart.dim(); ++b)
                    e = std::max(e, std::abs(intrinsic_sectional(chart, u, a, b) - gauss_sectional(chart, u, a, b)));
            return e;
        });
        const double m = *std::max_element(err.begin(), err.end());
        std::string key = name;
        while (per_model.contains(key)) key += "'";
        per_model[key] = m;
        worst = std::max(worst, m);
    }
    r.checks_passed = worst <= kGaussTol;
    r.metrics = {{"points_per_model", count}, {"max_error", worst}, {"per_model", per_model}};
    r.detail = std::to_string(charts.size()) + " models, max |K_intrinsic - K_gauss| = " + fmt(worst);
}

struct SuiteDef {
    int id;
    const char* name;
    const char* title;
    double budget;
    std::function<void(const SuiteOptions&, CriterionResult&)> run;
};

const std::vector<SuiteDef>& definitions() {
    static const std::vector<SuiteDef> defs = {
        {1, "equality-cases", "Clifford tori at and around the pinching bound", 5, equality_cases},
        {2, "cp2", "projective plane: minimal, on the bound, non-flat normal bundle", 10, cp2},
        {3, "lemp", "eigenvalue lower bound of the curvature operator on 2-forms", 30, lemp},
        {4, "propu", "pinching implies the Lawson-Simons inequality for p = 2", 60, propu},
        {5, "nnic1", "closed-form self-dual and anti-self-dual blocks", 10, nnic1},
        {6, "adapted-frame", "adapted frame recovered from rotated equality points", 30, adapted},
        {7, "sb-equivalence", "nonnegative isotropic curvature iff nonnegative operator", 60, sb},
        {8, "dupin", "inner product of the two principal normals", 5, dupin},
        {9, "product-curve", "product of a circle with the unit 3-sphere", 5, product_curve},
        {10, "rotational", "strictness window of rotational hypersurfaces", 5, rotational},
        {11, "gauss-consistency", "intrinsic and extrinsic sectional curvatures agree", 60, gauss},
    };
    return defs;
}

CriterionResult run_one(const SuiteDef& d, const SuiteOptions& o) {
    CriterionResult r;
    r.id = d.id;
    r.suite = d.name;
    r.title = d.title;
    r.budget_seconds = d.budget;
    r.budget_applies = !o.count.has_value();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        d.run(o, r);
    } catch (const ParameterError&) {
        throw;
    } catch (const Error& e) {
        r.checks_passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const SuiteDef& d : definitions()) v.emplace_back(d.name);
        v.emplace_back("all");
        return v;
    }();
    return names;
}

std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& options) {
    std::vector<CriterionResult> out;
    for (const SuiteDef& d : definitions())
        if (name == "all" || name == d.name) out.push_back(run_one(d, options));
    if (out.empty()) throw PreconditionError("unknown suite \"" + name + "\"");
    return out;
}

json to_json(const CriterionResult& r) {
    return {{"criterion", r.id},
            {"suite", r.suite},
            {"title", r.title},
            {"passed", r.checks_passed},
            {"budget_seconds", r.budget_seconds},
            {"detail", r.detail},
            {"metrics", r.metrics}};
}

}  // namespace subgeom::suites
