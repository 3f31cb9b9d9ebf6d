#pragma once

// Model immersions with exact 2-jets and the constructors built on them: the product
// of a closed curve with a hypersurface, the ovaloid margin of a convex hypersurface,
// and the strictness check for rotational hypersurfaces.
//
// Model ids and parameters (JSON object {"id": ..., "params": {...}}):
//   round_sphere     n, R, ambient ("euclidean" | "sphere")
//   clifford_torus   n, k, r                 S^k(r) x S^{n-k}(sqrt(1-r^2)) in S^{n+1}
//   sphere_product   k, r, R, ambient        S^k(r) x S^k(sqrt(R^2-r^2)) in R^{2k+2} or S^{2k+2}
//   cp2_veronese     r, chart (0..2)         projective plane in S^7(r)
//   ellipsoid        n, axes [a_1 .. a_{n+1}]
//   rotational       n, profile, interval    (x, u(x) w), w in S^{n-1}
//   curve            components, interval
//   product_with_curve  curve {components, interval}, base (model), ell

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subgeom/dsl.hpp"
#include "subgeom/immersion.hpp"

namespace subgeom::catalog {

using json = nlohmann::json;

struct ModelSpec {
    std::string id;
    json params = json::object();
};

/// Parse {"id": ..., "params": {...}}; throws SchemaError on malformed input.
ModelSpec model_spec_from_json(const json& j);
json to_json(const ModelSpec& spec);

/// Build the chart of a model. Throws ParameterError on out-of-range parameters and
/// SchemaError on unknown or mistyped parameter keys.
Chart build_model(const ModelSpec& spec);

struct ModelInfo {
    std::string id;
    std::string parameters;   // parameter names with defaults
    std::string ranges;       // admissible ranges
    std::string instantiates; // geometric role of the model
};

const std::vector<ModelInfo>& list_models();

/// Pole margin of hyperspherical angle charts.
inline constexpr double kPoleMargin = 0.05;

// ---------------------------------------------------------------------------
// Curves and products
// ---------------------------------------------------------------------------

struct CurveSpec {
    std::vector<dsl::Expr> components;
    double t0 = 0.0;
    double t1 = 1.0;
};

CurveSpec curve_spec_from_json(const json& j);

/// One-dimensional chart of a closed curve; throws PreconditionError("open curve")
/// unless position and velocity agree at both ends of the interval.
Chart build_curve(const CurveSpec& curve);

/// kappa^2 = (|g'|^2 |g''|^2 - <g',g''>^2) / |g'|^6 at parameter t.
double curve_curvature_sq(const CurveSpec& curve, double t);

struct ProductReport {
    int n = 0;                 // dimension of the product
    int ell = 0;
    double max_kappa_sq = 0.0; // over the curve sample
    double min_room = 0.0;     // min over the base sample of a(n-1, ell-1, H_g, 0) - S_g
    double bound = 0.0;        // (n-ell)/(n-ell-1) * min_room
    bool feasible = false;     // max_kappa_sq <= bound
};

struct ProductWithCurve {
    Chart chart;
    ProductReport report;
};

/// Product gamma x g of a closed curve and a Euclidean hypersurface-type base.
/// Throws PreconditionError("hypothesis fails") unless the base strictly satisfies
/// the pinching bound for k = ell - 1, c = 0 at every base sample point.
ProductWithCurve product_with_curve(const CurveSpec& curve, const Chart& base, int ell, int curve_samples = 200,
                                    int base_grid = 8);

// ---------------------------------------------------------------------------
// Hypersurface checks
// ---------------------------------------------------------------------------

struct OvaloidReport {
    double min_lambda1 = 0.0;  // smallest principal curvature over the sample
    double max_lambdan = 0.0;  // largest principal curvature over the sample
    double margin = 0.0;       // min_lambda1 sqrt(n/(n-k)) - max_lambdan
};

/// Principal-curvature pinching margin of a convex hypersurface over sample points.
OvaloidReport ovaloid_margin(const Chart& chart, int k, const std::vector<Vec>& points);
OvaloidReport ovaloid_margin(const std::vector<SFF>& sffs, int k);

/// Extreme principal curvatures (a_1 / a_{n+1}^2, a_{n+1} / a_1^2) of an ellipsoid
/// with ascending semi-axes.
std::pair<double, double> ellipsoid_curvature_extremes(const std::vector<double>& axes);

/// Constants of the rotational strictness window -a_n < u u''/(1+u'^2) < b_n.
double rotational_a(int n);
double rotational_b(int n);

struct RotationalCheck {
    double u = 0.0, du = 0.0, d2u = 0.0;
    double lambda = 0.0;     // 1 / (u sqrt(1+u'^2)), multiplicity n-1
    double mu = 0.0;         // -u'' / (1+u'^2)^(3/2)
    double form_margin = 0.0;   // (n-1) lambda^2 + 2(n-1) lambda mu - (n-3) mu^2
    double lower_margin = 0.0;  // u u'' + a_n (1+u'^2)
    double upper_margin = 0.0;  // b_n (1+u'^2) - u u''
    bool form_strict = false;
    bool window_strict = false;
    bool agree = false;
};

RotationalCheck rotational_strict_check(const dsl::Expr& profile, double x, int n);

/// Holomorphic sectional curvature of the projective-plane model at parameter u,
/// for the complex line spanned by d/du_0 and J d/du_0 = d/du_1.
double holomorphic_sectional_curvature(const Chart& cp2, const Vec& u);

}  // namespace subgeom::catalog
