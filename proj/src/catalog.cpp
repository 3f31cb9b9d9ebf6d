#include "subgeom/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "subgeom/curvature.hpp"
#include "subgeom/error.hpp"
#include "subgeom/pinch.hpp"

namespace subgeom::catalog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Typed access to a params object with a fixed key set.
class Params {
public:
    Params(const json& j, const std::string& model, std::initializer_list<const char*> allowed) : j_(j), model_(model) {
        if (!j_.is_object()) throw SchemaError(model_ + ": params must be a JSON object");
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& item : j_.items())
            if (!keys.count(item.key())) throw SchemaError(model_ + ": unknown parameter \"" + item.key() + "\"");
    }

    bool has(const char* key) const { return j_.contains(key); }

    // Numbers, or strings holding a constant expression such as "sqrt(1/2)".
    double real(const char* key, double fallback) const {
        if (!j_.contains(key)) return fallback;
        return to_real(j_.at(key), key);
    }
    double real(const char* key) const {
        if (!j_.contains(key)) throw SchemaError(model_ + ": missing parameter \"" + key + "\"");
        return to_real(j_.at(key), key);
    }
    int integer(const char* key, int fallback) const {
        if (!j_.contains(key)) return fallback;
        const double v = to_real(j_.at(key), key);
        if (v != std::floor(v) || std::abs(v) > 1e6) throw SchemaError(model_ + ": \"" + key + "\" must be an integer");
        return static_cast<int>(v);
    }
    std::string text(const char* key, const std::string& fallback) const {
        if (!j_.contains(key)) return fallback;
        if (!j_.at(key).is_string()) throw SchemaError(model_ + ": \"" + key + "\" must be a string");
        return j_.at(key).get<std::string>();
    }
    std::vector<double> reals(const char* key) const {
        if (!j_.contains(key) || !j_.at(key).is_array())
            throw SchemaError(model_ + ": \"" + key + "\" must be an array of numbers");
        std::vector<double> out;
        for (const json& v : j_.at(key)) out.push_back(to_real(v, key));
        return out;
    }
    const json& raw(const char* key) const {
        if (!j_.contains(key)) throw SchemaError(model_ + ": missing parameter \"" + key + "\"");
        return j_.at(key);
    }

private:
    double to_real(const json& v, const char* key) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const dsl::Expr e = dsl::parse(v.get<std::string>());
            if (!e.variable().empty())
                throw SchemaError(model_ + ": \"" + key + "\" must be a constant expression");
            return e(0.0);
        }
        throw SchemaError(model_ + ": \"" + key + "\" must be a number");
    }

    const json& j_;
    std::string model_;
};

template <class T>
T sin_(const T& x) {
    return subgeom::sin(x);
}
template <class T>
T cos_(const T& x) {
    return subgeom::cos(x);
}

// Unit sphere S^dim from dim hyperspherical angles starting at u[first]; the last
// angle is azimuthal.
template <class T>
void append_sphere(std::vector<T>& out, const std::vector<T>& u, std::size_t first, int dim, double radius) {
    T prod = constant_like(u[first], radius);
    for (int i = 0; i < dim; ++i) {
        const T& a = u[first + static_cast<std::size_t>(i)];
        out.push_back(prod * cos_(a));
        prod = prod * sin_(a);
    }
    out.push_back(prod);
}

void append_sphere_domain(Vec& lo, Vec& hi, std::vector<bool>& periodic, int& at, int dim) {
    for (int i = 0; i < dim; ++i, ++at) {
        const bool azimuth = i == dim - 1;
        lo[at] = azimuth ? 0.0 : kPoleMargin;
        hi[at] = azimuth ? 2 * kPi : kPi - kPoleMargin;
        periodic[static_cast<std::size_t>(at)] = azimuth;
    }
}

ParameterDomain sphere_domain(const std::vector<int>& dims) {
    int total = 0;
    for (int d : dims) total += d;
    ParameterDomain dom{Vec(total), Vec(total), std::vector<bool>(static_cast<std::size_t>(total))};
    int at = 0;
    for (int d : dims) append_sphere_domain(dom.lower, dom.upper, dom.periodic, at, d);
    return dom;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

AmbientSpace ambient_from(const std::string& name, int form_dim, const std::string& model) {
    if (name == "euclidean") return AmbientSpace::euclidean(form_dim);
    if (name == "sphere") return AmbientSpace::sphere(form_dim);
    throw SchemaError(model + ": ambient must be \"euclidean\" or \"sphere\"");
}

// ---------------------------------------------------------------------------

Chart round_sphere(const json& p) {
    const Params par(p, "round_sphere", {"n", "R", "ambient"});
    const int n = par.integer("n", 4);
    const double R = par.real("R", 1.0);
    const std::string amb = par.text("ambient", "euclidean");
    require(n >= 2 && n <= kMaxJetVars, "round_sphere: need 2 <= n <= 8");
    require(R > 0, "round_sphere: need R > 0");
    const bool lifted = amb == "sphere";
    if (lifted) require(R <= 1, "round_sphere: need R <= 1 inside the unit sphere");
    const AmbientSpace ambient = ambient_from(amb, n + 1, "round_sphere");
    const double height = lifted ? std::sqrt(1 - R * R) : 0.0;
    return make_chart("round_sphere", n, ambient, sphere_domain({n}), [n, R, lifted, height](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        std::vector<T> x;
        append_sphere(x, u, 0, n, R);
        if (lifted) x.push_back(constant_like(u[0], height));
        return x;
    });
}

Chart clifford_torus(const json& p) {
    const Params par(p, "clifford_torus", {"n", "k", "r"});
    const int n = par.integer("n", 4), k = par.integer("k", 2);
    const double r = par.real("r", std::sqrt(0.5));
    require(n >= 2 && n <= kMaxJetVars, "clifford_torus: need 2 <= n <= 8");
    require(k >= 1 && k <= n - 1, "clifford_torus: need 1 <= k <= n-1");
    require(r > 0 && r < 1, "clifford_torus: need 0 < r < 1");
    const double s = std::sqrt(1 - r * r);
    return make_chart("clifford_torus", n, AmbientSpace::sphere(n + 1), sphere_domain({k, n - k}),
                      [n, k, r, s](const auto& u) {
                          using T = std::decay_t<decltype(u[0])>;
                          std::vector<T> x;
                          append_sphere(x, u, 0, k, r);
                          append_sphere(x, u, static_cast<std::size_t>(k), n - k, s);
                          return x;
                      });
}

Chart sphere_product(const json& p) {
    const Params par(p, "sphere_product", {"k", "r", "R", "ambient"});
    const int k = par.integer("k", 2);
    const double R = par.real("R", 1.0);
    const double r = par.real("r", R * std::sqrt(0.5));
    const std::string amb = par.text("ambient", "euclidean");
    require(k >= 1 && 2 * k <= kMaxJetVars, "sphere_product: need 1 <= k <= 4");
    require(r > 0 && r < R, "sphere_product: need 0 < r < R");
    const bool lifted = amb == "sphere";
    if (lifted) require(R <= 1, "sphere_product: need R <= 1 inside the unit sphere");
    const AmbientSpace ambient = ambient_from(amb, 2 * k + 2, "sphere_product");
    const double s = std::sqrt(R * R - r * r), height = lifted ? std::sqrt(1 - R * R) : 0.0;
    return make_chart("sphere_product", 2 * k, ambient, sphere_domain({k, k}), [k, r, s, lifted, height](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        std::vector<T> x;
        append_sphere(x, u, 0, k, r);
        append_sphere(x, u, static_cast<std::size_t>(k), k, s);
        if (lifted) x.push_back(constant_like(u[0], height));
        return x;
    });
}

Chart cp2_veronese(const json& p) {
    const Params par(p, "cp2_veronese", {"r", "chart"});
    const double r = par.real("r", 1.0);
    const int which = par.integer("chart", 0);
    require(r > 0, "cp2_veronese: need r > 0");
    require(which >= 0 && which <= 2, "cp2_veronese: chart must be 0, 1 or 2");
    // |P - I/3| = sqrt(2/3) for a rank-one projection
    const double scale = r * std::sqrt(1.5);
    const double box = 1.5;
    ParameterDomain dom = ParameterDomain::box(Vec::Constant(4, -box), Vec::Constant(4, box));
    return make_chart("cp2_veronese", 4, AmbientSpace::sphere(7, r), dom, [which, scale](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        // homogeneous coordinates v = (re, im) with v_which = 1
        std::vector<T> re(3, constant_like(u[0], 0.0)), im(3, constant_like(u[0], 0.0));
        int slot = 0;
        for (int a = 0; a < 3; ++a) {
            if (a == which) {
                re[static_cast<std::size_t>(a)] = constant_like(u[0], 1.0);
                continue;
            }
            re[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(2 * slot)];
            im[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(2 * slot + 1)];
            ++slot;
        }
        T norm_sq = constant_like(u[0], 0.0);
        for (int a = 0; a < 3; ++a) norm_sq = norm_sq + re[a] * re[a] + im[a] * im[a];
        const T inv = 1.0 / norm_sq;
        std::vector<T> d(3, constant_like(u[0], 0.0));
        for (int a = 0; a < 3; ++a) d[a] = (re[a] * re[a] + im[a] * im[a]) * inv - 1.0 / 3.0;
        std::vector<T> x;
        x.push_back(scale * (d[0] - d[1]) / std::sqrt(2.0));
        x.push_back(scale * (d[0] + d[1] - 2.0 * d[2]) / std::sqrt(6.0));
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                // P_ab = v_a conj(v_b) / |v|^2
                const T pr = (re[a] * re[b] + im[a] * im[b]) * inv;
                const T pi = (im[a] * re[b] - re[a] * im[b]) * inv;
                x.push_back(scale * std::sqrt(2.0) * pr);
                x.push_back(scale * std::sqrt(2.0) * pi);
            }
        return x;
    });
}

Chart ellipsoid(const json& p) {
    const Params par(p, "ellipsoid", {"n", "axes"});
    const std::vector<double> axes =
        par.has("axes") ? par.reals("axes") : std::vector<double>(static_cast<std::size_t>(par.integer("n", 4) + 1), 1.0);
    const int n = par.integer("n", static_cast<int>(axes.size()) - 1);
    require(n >= 2 && n <= kMaxJetVars, "ellipsoid: need 2 <= n <= 8");
    require(static_cast<int>(axes.size()) == n + 1, "ellipsoid: need n+1 semi-axes");
    require(axes.front() > 0 && std::is_sorted(axes.begin(), axes.end()), "ellipsoid: need 0 < a_1 <= ... <= a_{n+1}");
    return make_chart("ellipsoid", n, AmbientSpace::euclidean(n + 1), sphere_domain({n}), [n, axes](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        std::vector<T> x;
        append_sphere(x, u, 0, n, 1.0);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = axes[i] * x[i];
        return x;
    });
}

Chart rotational(const json& p) {
    const Params par(p, "rotational", {"n", "profile", "interval"});
    const int n = par.integer("n", 4);
    const dsl::Expr u = dsl::parse(par.text("profile", "sqrt(1-x^2)"));
    const std::vector<double> iv = par.has("interval") ? par.reals("interval") : std::vector<double>{-0.9, 0.9};
    require(n >= 2 && n <= kMaxJetVars, "rotational: need 2 <= n <= 8");
    require(iv.size() == 2 && iv[0] < iv[1], "rotational: interval must be [x0, x1] with x0 < x1");
    constexpr int kProbe = 201;
    for (int s = 0; s < kProbe; ++s) {
        const double x = iv[0] + (iv[1] - iv[0]) * s / (kProbe - 1);
        if (!(u(x) > 0)) throw ParameterError("rotational: profile is not positive on the interval");
    }
    ParameterDomain dom = sphere_domain({n - 1});
    Vec lo(n), hi(n);
    lo << iv[0], dom.lower;
    hi << iv[1], dom.upper;
    std::vector<bool> per{false};
    per.insert(per.end(), dom.periodic.begin(), dom.periodic.end());
    return make_chart("rotational", n, AmbientSpace::euclidean(n + 1), ParameterDomain{lo, hi, per},
                      [n, u](const auto& v) {
                          using T = std::decay_t<decltype(v[0])>;
                          const T radius = dsl::evaluate(u, v[0]);
                          std::vector<T> x{v[0]};
                          std::vector<T> w;
                          append_sphere(w, v, 1, n - 1, 1.0);
                          for (const T& c : w) x.push_back(radius * c);
                          return x;
                      });
}

}  // namespace

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

ModelSpec model_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
        throw SchemaError("model spec must be an object with a string \"id\"");
    for (const auto& item : j.items())
        if (item.key() != "id" && item.key() != "params")
            throw SchemaError("model spec: unknown key \"" + item.key() + "\"");
    ModelSpec spec{j.at("id").get<std::string>(), j.value("params", json::object())};
    if (!spec.params.is_object()) throw SchemaError("model spec: \"params\" must be an object");
    return spec;
}

json to_json(const ModelSpec& spec) { return json{{"id", spec.id}, {"params", spec.params}}; }

CurveSpec curve_spec_from_json(const json& j) {
    const Params par(j, "curve", {"components", "interval"});
    const json& comps = par.raw("components");
    if (!comps.is_array() || comps.empty()) throw SchemaError("curve: components must be a nonempty array of strings");
    CurveSpec c;
    for (const json& s : comps) {
        if (!s.is_string()) throw SchemaError("curve: components must be strings");
        c.components.push_back(dsl::parse(s.get<std::string>()));
    }
    const std::vector<double> iv = par.has("interval") ? par.reals("interval") : std::vector<double>{0.0, 2 * kPi};
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw ParameterError("curve: interval must be [t0, t1] with t0 < t1");
    c.t0 = iv[0];
    c.t1 = iv[1];
    return c;
}

Chart build_model(const ModelSpec& spec) {
    const std::string& id = spec.id;
    if (id == "round_sphere") return round_sphere(spec.params);
    if (id == "clifford_torus") return clifford_torus(spec.params);
    if (id == "sphere_product") return sphere_product(spec.params);
    if (id == "cp2_veronese") return cp2_veronese(spec.params);
    if (id == "ellipsoid") return ellipsoid(spec.params);
    if (id == "rotational") return rotational(spec.params);
    if (id == "curve") return build_curve(curve_spec_from_json(spec.params));
    if (id == "product_with_curve") {
        const Params par(spec.params, id, {"curve", "base", "ell"});
        const CurveSpec curve = curve_spec_from_json(par.raw("curve"));
        const Chart base = build_model(model_spec_from_json(par.raw("base")));
        return product_with_curve(curve, base, par.integer("ell", 2)).chart;
    }
    throw SchemaError("unknown model id \"" + id + "\"");
}

const std::vector<ModelInfo>& list_models() {
    static const std::vector<ModelInfo> models = {
        {"round_sphere", "n=4, R=1, ambient=euclidean", "2 <= n <= 8, R > 0 (R <= 1 for ambient=sphere)",
         "umbilical sphere S^n(R); nonnegative BW operator and equality in the eigenvalue estimate"},
        {"clifford_torus", "n=4, k=2, r=sqrt(1/2)", "2 <= n <= 8, 1 <= k <= n-1, 0 < r < 1",
         "S^k(r) x S^{n-k}(sqrt(1-r^2)) in S^{n+1}; pinching equality for n = 2k or r = sqrt(k/n)"},
        {"sphere_product", "k=2, r=R/sqrt2, R=1, ambient=euclidean", "1 <= k <= 4, 0 < r < R (R <= 1 for ambient=sphere)",
         "S^k(r) x S^k(sqrt(R^2-r^2)) through the umbilical sphere; pinching equality for k = 2, c = 0"},
        {"cp2_veronese", "r=1, chart=0", "r > 0, chart in {0,1,2}",
         "minimal projective plane in S^7(r); pinching equality with non-flat normal bundle"},
        {"ellipsoid", "n=4, axes=[1,...,1]", "2 <= n <= 8, 0 < a_1 <= ... <= a_{n+1}",
         "ovaloid test case for the principal-curvature ratio condition"},
        {"rotational", "n=4, profile=sqrt(1-x^2), interval=[-0.9,0.9]", "2 <= n <= 8, profile > 0 on the interval",
         "hypersurface of revolution (x, u(x) w); strictness window -a_n < u u''/(1+u'^2) < b_n"},
        {"curve", "components=[cos(t),sin(t)], interval=[0,2pi]", "closed, nonvanishing speed",
         "closed curve factor of a product immersion"},
        {"product_with_curve", "curve={...}, base={id, params}, ell=2", "base strictly pinched for k = ell-1, c = 0",
         "product of a closed curve with a Euclidean submanifold; curvature budget kappa^2 <= (n-ell)/(n-ell-1) min(a - S_g)"},
    };
    return models;
}

// ---------------------------------------------------------------------------
// Curves and products
// ---------------------------------------------------------------------------

namespace {

struct CurveJet {
    Vec p, d1, d2;
};

CurveJet curve_jet(const CurveSpec& c, double t) {
    const int d = static_cast<int>(c.components.size());
    CurveJet j{Vec(d), Vec(d), Vec(d)};
    for (int a = 0; a < d; ++a) {
        const Jet2Scalar v = dsl::eval_jet2(c.components[static_cast<std::size_t>(a)], t);
        j.p[a] = v.value;
        j.d1[a] = v.d1;
        j.d2[a] = v.d2;
    }
    return j;
}

}  // namespace

double curve_curvature_sq(const CurveSpec& curve, double t) {
    const CurveJet j = curve_jet(curve, t);
    const double v2 = j.d1.squaredNorm();
    if (!(v2 > 0)) throw RankError("curve speed vanishes");
    return std::max(0.0, (v2 * j.d2.squaredNorm() - std::pow(j.d1.dot(j.d2), 2)) / (v2 * v2 * v2));
}

Chart build_curve(const CurveSpec& curve) {
    const int d = static_cast<int>(curve.components.size());
    if (d < 2) throw ParameterError("curve: need at least two components");
    const CurveJet a = curve_jet(curve, curve.t0), b = curve_jet(curve, curve.t1);
    const double scale = 1 + a.p.norm() + a.d1.norm();
    if ((a.p - b.p).norm() > 1e-8 * scale || (a.d1 - b.d1).norm() > 1e-8 * scale)
        throw PreconditionError("open curve");
    constexpr int kProbe = 256;
    for (int s = 0; s < kProbe; ++s) {
        const double t = curve.t0 + (curve.t1 - curve.t0) * s / kProbe;
        if (curve_jet(curve, t).d1.norm() <= 1e-12) throw RankError("curve speed vanishes");
    }
    ParameterDomain dom{Vec::Constant(1, curve.t0), Vec::Constant(1, curve.t1), {true}};
    auto jet = [curve](const Vec& u) {
        const CurveJet c = curve_jet(curve, u[0]);
        return Jet2{c.p, c.d1, c.d2};
    };
    auto position = [curve](const Vec& u) { return curve_jet(curve, u[0]).p; };
    return Chart("curve", 1, AmbientSpace::euclidean(d), dom, jet, position);
}

ProductWithCurve product_with_curve(const CurveSpec& curve, const Chart& base, int ell, int curve_samples,
                                    int base_grid) {
    if (base.ambient().curvature_flag != 0) throw PreconditionError("product base must lie in Euclidean space");
    const Chart gamma = build_curve(curve);
    const int ng = base.dim(), n = ng + 1;
    if (n > kMaxJetVars) throw ParameterError("product dimension exceeds 8");
    if (ell < 2 || ell > n - 2) throw ParameterError("product: need 2 <= ell <= n-2");

    ProductReport rep;
    rep.n = n;
    rep.ell = ell;
    rep.min_room = std::numeric_limits<double>::infinity();
    for (const Vec& u : base.domain().grid(base_grid)) {
        const Invariants inv = invariants(sff_at(base, u));
        rep.min_room = std::min(rep.min_room, pinching::pinch_bound(ng, ell - 1, inv.H, 0.0) - inv.S);
    }
    if (!(rep.min_room > 0)) throw PreconditionError("hypothesis fails");
    rep.bound = static_cast<double>(n - ell) / static_cast<double>(n - ell - 1) * rep.min_room;
    for (int s = 0; s < curve_samples; ++s) {
        const double t = curve.t0 + (curve.t1 - curve.t0) * (s + 0.5) / curve_samples;
        rep.max_kappa_sq = std::max(rep.max_kappa_sq, curve_curvature_sq(curve, t));
    }
    rep.feasible = rep.max_kappa_sq <= rep.bound * (1 + 1e-12);

    const int dc = gamma.ambient().form_dim, db = base.ambient().form_dim;
    ParameterDomain dom{Vec(n), Vec(n), std::vector<bool>(static_cast<std::size_t>(n))};
    dom.lower << curve.t0, base.domain().lower;
    dom.upper << curve.t1, base.domain().upper;
    dom.periodic[0] = true;
    for (int i = 0; i < ng; ++i) dom.periodic[static_cast<std::size_t>(i + 1)] = base.domain().periodic[static_cast<std::size_t>(i)];

    auto jet = [gamma, base, n, ng, dc, db](const Vec& u) {
        const Jet2 c = gamma.jet(u.head(1));
        const Jet2 g = base.jet(u.tail(ng));
        Jet2 j{Vec(dc + db), Mat::Zero(dc + db, n), Mat::Zero(dc + db, pair_count(n))};
        j.position << c.position, g.position;
        j.d1.block(0, 0, dc, 1) = c.d1;
        j.d1.block(dc, 1, db, ng) = g.d1;
        j.d2.col(pair_index(0, 0, n)).head(dc) = c.d2.col(0);
        for (int a = 0; a < ng; ++a)
            for (int b = a; b < ng; ++b) j.d2.col(pair_index(a + 1, b + 1, n)).tail(db) = g.d2.col(pair_index(a, b, ng));
        return j;
    };
    auto position = [gamma, base, ng, dc, db](const Vec& u) {
        Vec x(dc + db);
        x << gamma.position(u.head(1)), base.position(u.tail(ng));
        return x;
    };
    return {Chart("product_with_curve", n, AmbientSpace::euclidean(dc + db), dom, jet, position), rep};
}

// ---------------------------------------------------------------------------
// Hypersurface checks
// ---------------------------------------------------------------------------

OvaloidReport ovaloid_margin(const std::vector<SFF>& sffs, int k) {
    if (sffs.empty()) throw PreconditionError("ovaloid margin needs sample points");
    const int n = sffs.front().dim();
    if (k < 1 || k > n - 1) throw ParameterError("need 1 <= k <= n-1");
    OvaloidReport rep;
    rep.min_lambda1 = std::numeric_limits<double>::infinity();
    rep.max_lambdan = -std::numeric_limits<double>::infinity();
    for (const SFF& s : sffs) {
        if (s.codim() != 1 || s.c() != 0.0 || s.dim() != n)
            throw PreconditionError("ovaloid margin needs a Euclidean hypersurface");
        Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(s.shape(0)).eigenvalues();
        // orient the normal so the curvatures are positive
        if (ev[0] < 0 && ev[n - 1] <= 0) ev = (-ev).reverse().eval();
        if (!(ev[0] > 0)) throw PreconditionError("nonpositive principal curvature: not an ovaloid sample");
        rep.min_lambda1 = std::min(rep.min_lambda1, ev[0]);
        rep.max_lambdan = std::max(rep.max_lambdan, ev[n - 1]);
    }
    rep.margin = rep.min_lambda1 * std::sqrt(static_cast<double>(n) / (n - k)) - rep.max_lambdan;
    return rep;
}

OvaloidReport ovaloid_margin(const Chart& chart, int k, const std::vector<Vec>& points) {
    const int n = chart.dim();
    if (chart.ambient().codimension(n) != 1 || chart.ambient().curvature_flag != 0)
        throw PreconditionError("ovaloid margin needs a Euclidean hypersurface");
    std::vector<SFF> sffs;
    for (const Vec& u : points) sffs.push_back(sff_at(chart, u));
    return ovaloid_margin(sffs, k);
}

std::pair<double, double> ellipsoid_curvature_extremes(const std::vector<double>& axes) {
    if (axes.size() < 2 || !(axes.front() > 0) || !std::is_sorted(axes.begin(), axes.end()))
        throw ParameterError("semi-axes must be positive and ascending");
    const double a1 = axes.front(), an = axes.back();
    return {a1 / (an * an), an / (a1 * a1)};
}

double rotational_a(int n) {
    if (n < 4) throw ParameterError("rotational window needs n >= 4");
    return (std::sqrt(2.0 * (n - 1) * (n - 2)) + (n - 1)) / (n - 3);
}

double rotational_b(int n) {
    if (n < 4) throw ParameterError("rotational window needs n >= 4");
    return (std::sqrt(2.0 * (n - 1) * (n - 2)) - (n - 1)) / (n - 3);
}

RotationalCheck rotational_strict_check(const dsl::Expr& profile, double x, int n) {
    const double an = rotational_a(n), bn = rotational_b(n);
    const Jet2Scalar j = dsl::eval_jet2(profile, x);
    if (!(j.value > 0)) throw DomainError("profile must be positive");
    RotationalCheck r;
    r.u = j.value;
    r.du = j.d1;
    r.d2u = j.d2;
    const double w = 1 + j.d1 * j.d1;
    r.lambda = 1 / (j.value * std::sqrt(w));
    r.mu = -j.d2 / std::pow(w, 1.5);
    r.form_margin = (n - 1) * r.lambda * r.lambda + 2 * (n - 1) * r.lambda * r.mu - (n - 3) * r.mu * r.mu;
    r.lower_margin = j.value * j.d2 + an * w;
    r.upper_margin = bn * w - j.value * j.d2;
    r.form_strict = r.form_margin > 0;
    r.window_strict = r.lower_margin > 0 && r.upper_margin > 0;
    r.agree = r.form_strict == r.window_strict;
    return r;
}

double holomorphic_sectional_curvature(const Chart& cp2, const Vec& u) {
    if (cp2.name() != "cp2_veronese") throw PreconditionError("holomorphic curvature needs the cp2_veronese model");
    const Jet2 jet = cp2.jet(u);
    const FramedPoint fp = frames_from_jet(cp2.ambient(), jet);
    const SFF s = second_fundamental_form(cp2.ambient(), fp, jet);
    // coordinate vectors in frame coordinates: d/du_i = tangent * C^{-1} e_i
    const Mat coord = fp.coords.inverse();
    return curvature::gauss_curvature(s).sectional(coord.col(0), coord.col(1));
}

}  // namespace subgeom::catalog
