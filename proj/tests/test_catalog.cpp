#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "subgeom/catalog.hpp"
#include "subgeom/curvature.hpp"
#include "subgeom/intrinsic.hpp"
#include "subgeom/pinch.hpp"

using namespace subgeom;
using namespace subgeom::catalog;

namespace {

Chart model(const std::string& id, json params = json::object()) { return build_model({id, std::move(params)}); }

std::vector<Vec> random_points(const Chart& c, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) {
        Vec t(c.dim());
        for (int k = 0; k < c.dim(); ++k) t[k] = rng.uniform();
        pts.push_back(c.domain().at_fraction(t));
    }
    return pts;
}

}  // namespace

TEST_CASE("Clifford torus invariants match the principal-curvature oracle") {
    SUBCASE("minimal T^4_2(sqrt 1/2): S = 4, H = 0") {
        const Chart c = model("clifford_torus", {{"n", 4}, {"k", 2}, {"r", std::sqrt(0.5)}});
        for (const Vec& u : random_points(c, 20, 1)) {
            const Invariants inv = invariants(sff_at(c, u));
            CHECK(inv.S == doctest::Approx(4.0).epsilon(1e-12));
            CHECK(inv.H < 1e-12);
        }
    }
    SUBCASE("T^4_1(0.6): S = 16/9 + 27/16, H = 11/48") {
        const Chart c = model("clifford_torus", {{"n", 4}, {"k", 1}, {"r", 0.6}});
        for (const Vec& u : random_points(c, 20, 2)) {
            const Invariants inv = invariants(sff_at(c, u));
            CHECK(inv.S == doctest::Approx(16.0 / 9 + 27.0 / 16).epsilon(1e-12));
            CHECK(inv.H == doctest::Approx(11.0 / 48).epsilon(1e-12));
        }
    }
    SUBCASE("r = 1 is rejected") {
        CHECK_THROWS_AS(model("clifford_torus", {{"r", 1.0}}), ParameterError);
    }
}

TEST_CASE("round sphere of radius R: S = n/R^2, H = 1/R") {
    const Chart c = model("round_sphere", {{"n", 3}, {"R", 2.0}});
    for (const Vec& u : random_points(c, 10, 3)) {
        const Invariants inv = invariants(sff_at(c, u));
        CHECK(inv.S == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(inv.H == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("projective-plane model") {
    const Chart c = model("cp2_veronese", {{"r", 1.0}});
    for (const Vec& u : random_points(c, 20, 4)) {
        CHECK(c.position(u).norm() == doctest::Approx(1.0).epsilon(1e-12));
        const SFF s = sff_at(c, u);
        const Invariants inv = invariants(s);
        CHECK(inv.H < 1e-8);
        CHECK(inv.S == doctest::Approx(4.0).epsilon(1e-9));
        CHECK_FALSE(curvature::normal_curvature(s).flat);
        const pinching::PinchReport rep = pinching::pinch_check(s, 2);
        CHECK(std::abs(rep.slack) < 1e-6);
        const curvature::RicciData ric = curvature::ricci_scalar(curvature::gauss_curvature(s));
        CHECK(fixtures::max_abs(ric.ric - 2 * Mat::Identity(4, 4)) < 1e-8);
    }
    SUBCASE("radius scaling") {
        const Chart c2 = model("cp2_veronese", {{"r", 2.0}, {"chart", 1}});
        for (const Vec& u : random_points(c2, 5, 5)) {
            CHECK(c2.position(u).norm() == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(invariants(sff_at(c2, u)).S == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("holomorphic sectional curvature is constant") {
        double first = 0;
        bool have = false;
        for (const Vec& u : random_points(c, 10, 6)) {
            const double h = holomorphic_sectional_curvature(c, u);
            if (!have) first = h, have = true;
            CHECK(h == doctest::Approx(first).epsilon(1e-9));
        }
        MESSAGE("holomorphic sectional curvature at r = 1: " << first);
    }
}

TEST_CASE("exact jets agree with finite differences of the position map") {
    const std::vector<ModelSpec> specs = {
        {"round_sphere", {{"n", 4}}},
        {"clifford_torus", {{"n", 4}, {"k", 1}, {"r", 0.6}}},
        {"sphere_product", {{"k", 2}, {"r", 0.6}, {"R", 1.0}}},
        {"cp2_veronese", {{"r", 1.0}}},
        {"ellipsoid", {{"axes", {1.0, 1.2, 1.5, 2.0, 2.5}}}},
        {"rotational", {{"n", 4}, {"profile", "2+cos(x)"}, {"interval", {-2, 2}}}},
    };
    for (const ModelSpec& spec : specs) {
        CAPTURE(spec.id);
        const Chart c = build_model(spec);
        for (const Vec& u : random_points(c, 10, 7)) {
            const Jet2 exact = c.jet(u), fd = finite_difference_jet(c, u);
            CHECK(fixtures::max_abs(exact.position - fd.position) < 1e-14);
            CHECK(fixtures::max_abs(exact.d1 - fd.d1) < 1e-5);
            CHECK(fixtures::max_abs(exact.d2 - fd.d2) < 1e-5);
        }
    }
}

TEST_CASE("Gauss-equation and intrinsic sectional curvatures agree") {
    const std::vector<ModelSpec> specs = {
        {"round_sphere", {{"n", 3}, {"R", 1.5}}},
        {"clifford_torus", {{"n", 3}, {"k", 1}, {"r", 0.6}}},
        {"cp2_veronese", {{"r", 1.0}}},
        {"ellipsoid", {{"axes", {1.0, 1.3, 1.7, 2.0}}}},
    };
    for (const ModelSpec& spec : specs) {
        CAPTURE(spec.id);
        const Chart c = build_model(spec);
        for (const Vec& u : random_points(c, 5, 8))
            for (int i = 0; i < c.dim(); ++i)
                for (int j = i + 1; j < c.dim(); ++j)
                    CHECK(std::abs(intrinsic_sectional(c, u, i, j) - gauss_sectional(c, u, i, j)) < 1e-4);
    }
}

TEST_CASE("ovaloid margin") {
    SUBCASE("round sphere: lambda (sqrt(n/(n-k)) - 1)") {
        const Chart c = model("round_sphere", {{"n", 4}, {"R", 2.0}});
        const OvaloidReport rep = ovaloid_margin(c, 2, c.domain().grid(3));
        CHECK(rep.margin == doctest::Approx(0.5 * (std::sqrt(2.0) - 1)).epsilon(1e-10));
    }
    SUBCASE("ellipsoid at the threshold ratio and beyond") {
        const double a1 = 1.0, an = std::pow(2.0, 1.0 / 6.0);
        const Chart c = model("ellipsoid", {{"axes", {a1, a1, a1, a1, an}}});
        const auto ext = ellipsoid_curvature_extremes({a1, a1, a1, a1, an});
        CHECK(ext.first * std::sqrt(2.0) - ext.second == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ovaloid_margin(c, 2, c.domain().grid(5)).margin >= -1e-12);
        const Chart bad = model("ellipsoid", {{"axes", {1.0, 1.0, 1.0, 1.0, 3.0}}});
        CHECK(ovaloid_margin(bad, 2, bad.domain().grid(5)).margin < 0);
    }
    SUBCASE("non-hypersurface input") {
        const Chart c = model("clifford_torus");
        CHECK_THROWS_AS(ovaloid_margin(c, 2, c.domain().grid(2)), PreconditionError);
    }
}

TEST_CASE("rotational strictness window") {
    CHECK(rotational_a(4) == doctest::Approx(3 + 2 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(rotational_b(4) == doctest::Approx(2 * std::sqrt(3.0) - 3).epsilon(1e-15));
    const RotationalCheck cyl = rotational_strict_check(dsl::parse("2"), 0.3, 4);
    CHECK(cyl.form_strict);
    CHECK(cyl.window_strict);
    const RotationalCheck sph = rotational_strict_check(dsl::parse("sqrt(1-x^2)"), 0.4, 5);
    CHECK(sph.u * sph.d2u == doctest::Approx(-(1 + sph.du * sph.du)));
    CHECK(sph.agree);
    CHECK(sph.form_strict);
    CHECK_THROWS_AS(rotational_strict_check(dsl::parse("x"), -1.0, 4), DomainError);
}

TEST_CASE("product of a circle with the unit 3-sphere") {
    const double rho = 1 / std::sqrt(3.0);
    CurveSpec circle{{dsl::parse("sqrt(1/3)*cos(t)"), dsl::parse("sqrt(1/3)*sin(t)")}, 0.0, 2 * 3.14159265358979323846};
    const Chart g = model("round_sphere", {{"n", 3}});
    const ProductWithCurve p = product_with_curve(circle, g, 2);
    CHECK(p.report.bound == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.report.max_kappa_sq == doctest::Approx(1 / (rho * rho)).epsilon(1e-12));
    CHECK(p.chart.dim() == 4);
    for (const Vec& u : random_points(p.chart, 20, 9)) {
        const pinching::PinchReport rep = pinching::pinch_check(sff_at(p.chart, u), 2);
        CHECK(rep.slack <= 1e-8);
    }
    SUBCASE("open curve") {
        CurveSpec arc{{dsl::parse("cos(t)"), dsl::parse("sin(t)")}, 0.0, 3.0};
        CHECK_THROWS_WITH_AS(product_with_curve(arc, g, 2), "open curve", PreconditionError);
    }
    SUBCASE("base violating the strict bound") {
        // surface of revolution with negatively curved parts
        const Chart ring = model("rotational", {{"n", 3}, {"profile", "2+cos(x)"}, {"interval", {-3, 3}}});
        CHECK_THROWS_WITH_AS(product_with_curve(circle, ring, 2), "hypothesis fails", PreconditionError);
    }
}

TEST_CASE("model spec schema errors") {
    CHECK_THROWS_AS(model_spec_from_json(json{{"params", json::object()}}), SchemaError);
    CHECK_THROWS_AS(model("clifford_torus", {{"radius", 0.5}}), SchemaError);
    CHECK_THROWS_AS(model("nosuch"), SchemaError);
    CHECK(model("clifford_torus", {{"r", "sqrt(1/2)"}}).dim() == 4);
    CHECK(list_models().size() == 8);
}
