#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "subgeom/catalog.hpp"
#include "subgeom/error.hpp"
#include "subgeom/jetfile.hpp"
#include "subgeom/sampling.hpp"

using namespace subgeom;
using fixtures::max_abs;
using json = nlohmann::json;

namespace {

json plane_point(double a, double b) {
    return {{"u", {a, b}}, {"f", {a, b, 0}}, {"df", {1, 0, 0, 0, 1, 0}}, {"d2f", {0, 0, 0, 0, 0, 0, 0, 0, 0}}};
}

}  // namespace

TEST_CASE("jet file round trip keeps every number") {
    const Chart c = catalog::build_model({"clifford_torus", {{"k", 1}, {"r", 0.6}}});
    const std::vector<Vec> pts = sample_points(c.domain(), {2, 5, 3});
    const JetFile file = sample_chart(c, pts);
    const json doc = to_json(file);
    const JetFile back = jet_file_from_json(json::parse(doc.dump()));
    CHECK(back.n == 4);
    CHECK(back.ambient.curvature_flag == 1);
    REQUIRE(back.points.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK((back.points[i].jet.d2.array() == file.points[i].jet.d2.array()).all());
        CHECK((back.points[i].u.array() == pts[i].array()).all());
    }
    CHECK(to_json(back) == doc);

    const std::vector<SFF> a = evaluate_sff(c, pts, Exec::Serial), b = evaluate_sff(back, Exec::Serial);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Invariants ia = invariants(a[i]), ib = invariants(b[i]);
        CHECK(ia.S == doctest::Approx(ib.S).epsilon(1e-13));
        CHECK(ia.H == doctest::Approx(ib.H).epsilon(1e-13));
    }
}

TEST_CASE("flat plane jets give vanishing invariants") {
    const json doc = {{"n", 2}, {"N", 3}, {"c", 0}, {"points", {plane_point(0, 0), plane_point(1, 2)}}};
    for (const SFF& s : evaluate_sff(jet_file_from_json(doc), Exec::Serial)) {
        CHECK(invariants(s).S == 0);
        CHECK(invariants(s).H == 0);
    }
}

TEST_CASE("full d2f layout is accepted when symmetric and rejected otherwise") {
    json p = plane_point(0, 0);
    p["d2f"] = {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1};  // rows 11, 12, 21, 22
    CHECK(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 0}, {"points", {p}}}).points.size() == 1);
    p["d2f"] = {0, 0, 1, 0, 0, 0.5, 0, 0, 0, 0, 0, 1};
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 0}, {"points", {p}}}), SchemaError);

    json nested = plane_point(0, 0);
    nested["df"] = {{1, 0, 0}, {0, 1, 0}};
    nested["d2f"] = {{0, 0, 1}, {0, 0, 0}, {0, 0, 1}};
    CHECK(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 0}, {"points", {nested}}}).points.size() == 1);
}

TEST_CASE("malformed jet files") {
    CHECK_THROWS_AS(jet_file_from_json(json::array()), SchemaError);
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 0}}), SchemaError);
    json short_df = plane_point(0, 0);
    short_df["df"] = {1, 0, 0};
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 0}, {"points", {short_df}}}), SchemaError);
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 3}, {"c", 2}, {"points", {plane_point(0, 0)}}}), SchemaError);
}

TEST_CASE("spherical jets must lie on the sphere") {
    // flat 2-plane tangent to the unit 3-sphere at its north pole
    json p = {{"u", {0, 0}},
              {"f", {0, 0, 0, 1}},
              {"df", {1, 0, 0, 0, 0, 1, 0, 0}},
              {"d2f", {0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1}}};
    CHECK(jet_file_from_json({{"n", 2}, {"N", 4}, {"c", 1}, {"points", {p}}}).points.size() == 1);
    p["f"] = {0, 0, 0, 2};
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 4}, {"c", 1}, {"points", {p}}}), PreconditionError);
    p["f"] = {0, 0, 0, 1};
    p["df"] = {1, 0, 0, 0.1, 0, 1, 0, 0};
    CHECK_THROWS_AS(jet_file_from_json({{"n", 2}, {"N", 4}, {"c", 1}, {"points", {p}}}), PreconditionError);
}

TEST_CASE("default grid sizes") {
    CHECK(default_per_dim(1) == 20);
    CHECK(default_per_dim(2) == 20);
    CHECK(default_per_dim(3) == 17);
    CHECK(default_per_dim(4) == 8);
    const ParameterDomain d = ParameterDomain::box(Vec::Zero(2), Vec::Ones(2));
    CHECK(sample_points(d, {3, 4, 1}).size() == 13);
    CHECK_THROWS_AS(sample_points(d, {-1, 0, 1}), ParameterError);
}

TEST_CASE("serial and parallel sampling agree bit for bit") {
    const Chart c = catalog::build_model({"cp2_veronese", catalog::json::object()});
    const std::vector<Vec> pts = sample_points(c.domain(), {3, 40, 9});
    const std::vector<SFF> a = evaluate_sff(c, pts, Exec::Serial), b = evaluate_sff(c, pts, Exec::Parallel);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].raw() == b[i].raw());
    const auto pa = evaluate_pinch(a, 2, 1e-8, Exec::Serial), pb = evaluate_pinch(a, 2, 1e-8, Exec::Parallel);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].slack == pb[i].slack);
    const auto ia = evaluate_invariants(a, Exec::Serial), ib = evaluate_invariants(a, Exec::Parallel);
    for (std::size_t i = 0; i < ia.size(); ++i) CHECK(ia[i].S == ib[i].S);
}
