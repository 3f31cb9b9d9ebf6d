#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "subgeom/curvature.hpp"
#include "subgeom/frame_opt.hpp"
#include "subgeom/pinch.hpp"

using namespace subgeom;
using namespace subgeom::curvature;
using fixtures::max_abs;

namespace {

BWMatrix bw_of(const SFF& s) {
    const CurvTensor R = gauss_curvature(s);
    return bw_operator(R, ricci_scalar(R));
}

Vec sorted_eigenvalues(const Mat& m) { return Eigen::SelfAdjointEigenSolver<Mat>(m).eigenvalues(); }

// Unit S^4 in R^5 and the minimal Clifford S^2 x S^2 in S^5.
SFF unit_s4() { return fixtures::umbilical(4, Vec::Ones(1), 0.0); }
SFF clifford22() { return fixtures::torus_point(4, 2, std::sqrt(0.5)); }

}  // namespace

TEST_CASE("gauss tensor of a totally geodesic sphere has constant curvature") {
    SFF zero(4, 2, 1.0);
    const CurvTensor R = gauss_curvature(zero);
    CHECK(R(0, 1, 1, 0) == doctest::Approx(1.0));
    CHECK(R(0, 1, 0, 1) == doctest::Approx(-1.0));
    CHECK(R(0, 1, 2, 3) == doctest::Approx(0.0));
}

TEST_CASE("unit S4 anchors: sectional 1, ric 3 Id, BW 4 Id, isotropic 4") {
    const SFF s = unit_s4();
    const CurvTensor R = gauss_curvature(s);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(R(i, j, j, i) == doctest::Approx(1.0));
    const RicciData ric = ricci_scalar(R);
    CHECK(max_abs(ric.ric - 3 * Mat::Identity(4, 4)) < 1e-14);
    CHECK(ric.scalar == doctest::Approx(12.0));
    const BWMatrix bw = bw_operator(R, ric);
    CHECK(max_abs(bw.matrix - 4 * Mat::Identity(6, 6)) < 1e-14);
    const HodgeSplit hs = hodge_split(bw);
    CHECK(max_abs(hs.plus - 4 * Mat::Identity(3, 3)) < 1e-14);
    CHECK(max_abs(hs.minus - 4 * Mat::Identity(3, 3)) < 1e-14);
    Rng rng(3);
    const Mat q = haar_orthogonal(4, rng);
    CHECK(isotropic_curvature(R, q) == doctest::Approx(4.0));
}

TEST_CASE("Clifford S2xS2 in S5: sectionals, Ricci, BW spectrum and split") {
    const SFF s = clifford22();
    const CurvTensor R = gauss_curvature(s);
    CHECK(R(0, 1, 1, 0) == doctest::Approx(2.0));
    CHECK(R(2, 3, 3, 2) == doctest::Approx(2.0));
    CHECK(R(0, 2, 2, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(R(1, 3, 3, 1) == doctest::Approx(0.0).epsilon(1e-12));
    const RicciData ric = ricci_scalar(R);
    CHECK(max_abs(ric.ric - 2 * Mat::Identity(4, 4)) < 1e-12);
    CHECK(ric.scalar == doctest::Approx(8.0));

    const BWMatrix bw = bw_operator(R, ric);
    const Vec ev = sorted_eigenvalues(bw.matrix);
    const double expected[] = {0, 0, 4, 4, 4, 4};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(ev[i] - expected[i]) < 1e-12);

    const HodgeSplit hs = hodge_split(bw);
    Mat d = Mat::Zero(3, 3);
    d(1, 1) = d(2, 2) = 4;
    CHECK(max_abs(hs.plus - d) < 1e-12);
    CHECK(max_abs(hs.minus - d) < 1e-12);

    // e1, e2 in the first factor, e3, e4 in the second
    CHECK(std::abs(isotropic_curvature(R, Mat::Identity(4, 4))) < 1e-12);
}

TEST_CASE("flat tensor gives zero Ricci, BW and isotropic curvature") {
    SFF zero(4, 3, 0.0);
    const CurvTensor R = gauss_curvature(zero);
    CHECK(max_abs(ricci_scalar(R).ric) == 0.0);
    CHECK(max_abs(bw_of(zero).matrix) == 0.0);
    CHECK(isotropic_curvature(R, Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("gauss tensor symmetries and first Bianchi identity on random tensors") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 6), m = rng.uniform_int(1, 4);
        const SFF s = pinching::random_sff(n, m, trial % 2, rng);
        const CurvTensor R = gauss_curvature(s);
        CHECK(R.bianchi_residual() <= 1e-12);
        CHECK(R.symmetry_residual() <= 1e-12);
        // sectional curvature oracle: c + <alpha_ii, alpha_jj> - |alpha_ij|^2
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double k = s.c() + s(i, i).dot(s(j, j)) - s(i, j).squaredNorm();
                CHECK(std::abs(R(i, j, j, i) - k) <= 1e-12 * (1 + std::abs(k)));
            }
    }
}

TEST_CASE("Hodge star squares to identity and commutes with BW") {
    const Mat star = hodge_star();
    CHECK(max_abs(star * star - Mat::Identity(6, 6)) == 0.0);
    CHECK(max_abs(hodge_star(-1) + star) == 0.0);
    const Mat P = eta_basis();
    CHECK(max_abs(P.transpose() * P - Mat::Identity(6, 6)) < 1e-15);
    // eta_1..3 self-dual, eta_4..6 anti-self-dual
    CHECK(max_abs(star * P.leftCols(3) - P.leftCols(3)) < 1e-15);
    CHECK(max_abs(star * P.rightCols(3) + P.rightCols(3)) < 1e-15);
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const SFF s = pinching::random_sff(4, rng.uniform_int(1, 4), trial % 2, rng);
        const BWMatrix bw = bw_of(s);
        CHECK(max_abs(bw.matrix - bw.matrix.transpose()) < 1e-12);
        const HodgeSplit hs = hodge_split(bw);
        CHECK(hs.commutator <= 1e-10 * (1 + max_abs(bw.matrix)));
        // orientation reversal swaps the blocks
        const HodgeSplit rev = hodge_split(bw, -1);
        CHECK(max_abs(rev.plus - hs.minus) == 0.0);
        const BWMatrix eta = to_eta_basis(bw);
        CHECK(max_abs(eta.matrix.topRightCorner(3, 3)) <= 1e-10 * (1 + max_abs(bw.matrix)));
    }
}

TEST_CASE("isotropic curvature equals the BW quadratic form on (e12 - e34)/sqrt2") {
    // brute force on random tensors and frames: iso(e) = <B w, w> with w = eta_4 of the frame
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const SFF s = pinching::random_sff(4, rng.uniform_int(1, 4), trial % 2, rng);
        const Mat q = haar_orthogonal(4, rng);
        const double iso = isotropic_curvature(gauss_curvature(s), q);
        const BWMatrix bw = bw_of(s.transformed(q));
        const Vec w = eta_basis().col(3);
        CHECK(std::abs(iso - w.dot(bw.matrix * w)) <= 1e-10 * (1 + std::abs(iso)));
    }
}

TEST_CASE("isotropic curvature in higher dimension contracts through the 4-frame") {
    Rng rng(23);
    const SFF s = pinching::random_sff(6, 3, 1.0, rng);
    const Mat q = haar_orthogonal(6, rng);
    const double direct = isotropic_curvature(gauss_curvature(s), q.leftCols(4));
    const double restricted = isotropic_curvature(gauss_curvature(s.transformed(q)), Mat::Identity(6, 4));
    CHECK(direct == doctest::Approx(restricted).epsilon(1e-12));
    Mat bad = q.leftCols(4);
    bad(0, 0) += 1e-6;
    CHECK_THROWS_AS(isotropic_curvature(gauss_curvature(s), bad), PreconditionError);
}

TEST_CASE("minimum isotropic curvature matches lambda_min of BW") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const SFF s = pinching::random_sff(4, rng.uniform_int(1, 3), 1.0, rng).scaled(0.5);
        const CurvTensor R = gauss_curvature(s);
        const double lmin = opt::min_eigenpair(bw_of(s).matrix).value;
        const IsotropicMin best = isotropic_min(R, 50, 1000 + trial);
        CHECK(best.value >= lmin - 1e-8);
        CHECK(best.value <= lmin + 1e-6);
    }
}

TEST_CASE("normal curvature") {
    SUBCASE("hypersurfaces are flat") {
        Rng rng(2);
        CHECK(normal_curvature(pinching::random_sff(4, 1, 0.0, rng)).flat);
    }
    SUBCASE("sphere product in R6 is flat") {
        CHECK(normal_curvature(fixtures::sphere_product_point(2, 1.0, 2.0)).flat);
    }
    SUBCASE("generic codimension-two tensor is not flat and is antisymmetric") {
        Rng rng(3);
        const NormalCurv nc = normal_curvature(pinching::random_sff(4, 2, 0.0, rng));
        CHECK_FALSE(nc.flat);
        for (const Mat& comp : nc.components) CHECK(max_abs(comp + comp.transpose()) < 1e-12);
    }
}

TEST_CASE("rotation identities for the mixed components hold for arbitrary tensors") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const SFF s = pinching::random_sff(4, rng.uniform_int(1, 4), 0.0, rng);
        const double theta = rng.uniform(-3, 3), phi = rng.uniform(-3, 3);
        const SFF t = s.transformed(block_rotation(theta, phi));
        auto a = [&](int i, int j) { return Vec(s(i - 1, j - 1)); };
        auto b = [&](int i, int j) { return Vec(t(i - 1, j - 1)); };
        const double cp = std::cos(phi + theta), sp = std::sin(phi + theta);
        const double cm = std::cos(phi - theta), sm = std::sin(phi - theta);
        const Vec aa1 = cp * (a(1, 4) + a(2, 3)) + sp * (a(2, 4) - a(1, 3));
        const Vec aa2 = -sp * (a(1, 4) + a(2, 3)) + cp * (a(2, 4) - a(1, 3));
        const Vec aa3 = cm * (a(1, 3) + a(2, 4)) + sm * (a(1, 4) - a(2, 3));
        const Vec aa4 = -sm * (a(1, 3) + a(2, 4)) + cm * (a(1, 4) - a(2, 3));
        CHECK((b(1, 4) + b(2, 3) - aa1).norm() <= 1e-12);
        CHECK((b(2, 4) - b(1, 3) - aa2).norm() <= 1e-12);
        CHECK((b(1, 3) + b(2, 4) - aa3).norm() <= 1e-12);
        CHECK((b(1, 4) - b(2, 3) - aa4).norm() <= 1e-12);
    }
}

TEST_CASE("closed-form B+- matches the generic pipeline on random adapted tensors") {
    Rng rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        const double c = trial % 2;
        const SFF s = pinching::random_adapted_sff(rng.uniform_int(1, 4), c, rng);
        const AdaptedResiduals res = adapted_residuals(s);
        REQUIRE(std::max({res.a1, res.a2, res.a3}) <= 1e-12);
        const ClosedFormBW cf = bw_adapted_closed_form(s);
        const HodgeSplit hs = hodge_split(bw_of(s));
        CHECK(max_abs(cf.plus - hs.plus) <= 1e-10);
        CHECK(max_abs(cf.minus - hs.minus) <= 1e-10);
    }
}

TEST_CASE("closed form on the minimal Clifford torus and on the zero tensor") {
    const ClosedFormBW cf = bw_adapted_closed_form(clifford22());
    Mat d = Mat::Zero(3, 3);
    d(1, 1) = d(2, 2) = 4;
    CHECK(max_abs(cf.plus - d) < 1e-12);
    CHECK(max_abs(cf.minus - d) < 1e-12);
    const ClosedFormBW z = bw_adapted_closed_form(SFF(4, 2, 0.0));
    CHECK(max_abs(z.plus) == 0.0);
    CHECK(max_abs(z.minus) == 0.0);
    Rng rng(1);
    CHECK_THROWS_AS(bw_adapted_closed_form(pinching::random_sff(4, 2, 0.0, rng)), PreconditionError);
}

TEST_CASE("adapted frame: already adapted input is returned unchanged") {
    const SFF s = fixtures::sphere_product_point(2, 0.6, 0.8);
    const AdaptedFrame af = adapted_frame(s);
    CHECK(max_abs(af.frame - Mat::Identity(4, 4)) == 0.0);
    CHECK(af.residuals.a1 == 0.0);
    CHECK(af.residuals.a2 == 0.0);
    CHECK(af.residuals.a3 == 0.0);
}

TEST_CASE("adapted frame round trip on rotated sphere-product points") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const double r1 = rng.uniform(0.3, 2.0), r2 = rng.uniform(0.3, 2.0);
        const SFF s = fixtures::random_conjugate(fixtures::sphere_product_point(2, r1, r2), rng);
        AdaptedFrameOptions opts;
        opts.seed = static_cast<std::uint64_t>(trial);
        const AdaptedFrame af = adapted_frame(s, opts);
        const double scale = 1 + invariants(s).S;
        CHECK(af.residuals.a1 <= 1e-9 * scale);
        CHECK(af.residuals.a2 <= 1e-9 * scale);
        CHECK(af.residuals.a3 <= 1e-9 * scale);
        CHECK(af.frame.determinant() == doctest::Approx(1.0));
        CHECK(max_abs(af.frame.transpose() * af.frame - Mat::Identity(4, 4)) < 1e-12);
    }
}

TEST_CASE("adapted frame rejects tensors without two double eigenvalues") {
    Rng rng(43);
    CHECK_THROWS_WITH_AS(adapted_frame(pinching::random_sff(4, 2, 1.0, rng)), "not an equality-case tensor",
                         PreconditionError);
    CHECK_THROWS_AS(adapted_frame(pinching::random_sff(3, 2, 1.0, rng)), PreconditionError);
}

TEST_CASE("kernel classifier on the Clifford torus") {
    const KernelReport rep = classify_kernel(clifford22());
    CHECK(rep.plus_kernel);
    CHECK(rep.minus_kernel);
    CHECK(std::find(rep.matched.begin(), rep.matched.end(), "ii1") != rep.matched.end());
    CHECK(std::find(rep.matched.begin(), rep.matched.end(), "iii1") != rep.matched.end());
}

TEST_CASE("kernel classifier: ii2 with rho and the kernel direction") {
    // alpha_13 = alpha_24 = 0, alpha_23 = alpha_14 = w, alpha_44 - alpha_11 = 2 rho w, and
    // (a3) |w|^2 = c + <alpha_11, alpha_44> fixes the first normal component of alpha_11
    const double rho = 0.7, b = 2.0, y = 0.2, c = 1.0;
    const double x = std::sqrt(b * b - c - y * y - 2 * rho * b * y);
    const Vec w = Eigen::Vector2d(0, b), r1 = Eigen::Vector2d(x, y);
    const Vec sig = r1 + 2 * rho * w;
    SFF s(4, 2, c);
    s(0, 0) = r1;
    s(1, 1) = r1;
    s(2, 2) = sig;
    s(3, 3) = sig;
    s(0, 3) = w;
    s(1, 2) = w;
    const AdaptedResiduals res = adapted_residuals(s);
    REQUIRE(std::max({res.a1, res.a2, res.a3}) <= 1e-12);
    const KernelReport rep = classify_kernel(s);
    CHECK(rep.plus_kernel);
    // alpha_14 - alpha_23 = 0 = alpha_13 + alpha_24 also puts eta_4 in the kernel of B-
    CHECK(rep.minus_kernel);
    CHECK(std::find(rep.matched.begin(), rep.matched.end(), "iii1") != rep.matched.end());
    CHECK(std::find(rep.matched.begin(), rep.matched.end(), "ii2") != rep.matched.end());
    REQUIRE(rep.rho.has_value());
    CHECK(*rep.rho == doctest::Approx(rho));
    const ClosedFormBW cf = bw_adapted_closed_form(s);
    // 4|alpha_14|^2 [[1, rho, 0], [rho, rho^2, 0], [0, 0, rho^2 + 1]]
    Mat expected(3, 3);
    expected << 1, rho, 0, rho, rho * rho, 0, 0, 0, rho * rho + 1;
    expected *= 4 * b * b;
    CHECK(max_abs(cf.plus - expected) < 1e-12);
    const opt::EigenPair ep = opt::min_eigenpair(cf.plus);
    CHECK(std::abs(ep.value) < 1e-10);
    const Vec dir = Vec(Eigen::Vector3d(-rho, 1, 0)).normalized();
    CHECK(std::abs(std::abs(ep.vector.dot(dir)) - 1) < 1e-10);
    CHECK(normal_curvature(s).flat);
}

TEST_CASE("dupin decomposition") {
    SUBCASE("minimal Clifford torus in S5") {
        const DupinDecomposition d = dupin_decomposition(clifford22());
        CHECK(d.inner == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(d.E1.cols() == 2);
    }
    SUBCASE("non-minimal torus still has <eta1, eta2> = -1") {
        const DupinDecomposition d = dupin_decomposition(fixtures::torus_point(4, 2, 0.4));
        CHECK(d.inner == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("sphere product in R6") {
        Rng rng(9);
        const SFF s = fixtures::random_conjugate(fixtures::sphere_product_point(2, 0.5, 1.5), rng);
        const DupinDecomposition d = dupin_decomposition(s);
        CHECK(std::abs(d.inner) < 1e-12);
        CHECK(d.residual < 1e-12);
    }
    SUBCASE("round sphere is umbilical") {
        CHECK_THROWS_WITH_AS(dupin_decomposition(unit_s4()), "umbilical point", PreconditionError);
    }
    SUBCASE("non-flat normal bundle") {
        Rng rng(10);
        CHECK_THROWS_WITH_AS(dupin_decomposition(pinching::random_sff(4, 2, 0.0, rng)),
                             "not simultaneously diagonalizable", PreconditionError);
    }
}
