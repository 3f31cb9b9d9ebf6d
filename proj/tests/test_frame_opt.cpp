#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "subgeom/error.hpp"
#include "subgeom/frame_opt.hpp"
#include "subgeom/pinch.hpp"
#include "subgeom/rng.hpp"

using namespace subgeom;
using namespace subgeom::opt;
using fixtures::max_abs;

namespace {

Mat diag(std::initializer_list<double> d) {
    Vec v(static_cast<Eigen::Index>(d.size()));
    int i = 0;
    for (double x : d) v[i++] = x;
    return v.asDiagonal();
}

// Sum of Rayleigh quotients of the frame columns.
Objective trace_form(const Mat& a) {
    return [a](const Mat& f) { return (f.transpose() * a * f).trace(); };
}

}  // namespace

TEST_CASE("Rayleigh quotient of diag(3,1,2) reaches the smallest eigenvalue") {
    FrameProblem p;
    p.n = 3;
    p.q = 1;
    p.objective = trace_form(diag({3, 1, 2}));
    const FrameResult r = minimize_over_frames(p);
    CHECK(r.value == doctest::Approx(1).epsilon(1e-8));
    CHECK(r.converged);
    CHECK(std::abs(std::abs(r.frame(1, 0)) - 1) < 1e-6);
}

TEST_CASE("constant objective converges after one sweep") {
    FrameProblem p;
    p.n = 5;
    p.q = 2;
    p.objective = [](const Mat&) { return 2.5; };
    p.restarts = 3;
    const FrameResult r = minimize_over_frames(p);
    CHECK(r.value == 2.5);
    CHECK(r.converged);
    CHECK(r.sweeps == 1);
}

TEST_CASE("LS objective vanishes at the minimal Clifford torus point") {
    const SFF s = fixtures::torus_point(4, 2, std::sqrt(0.5));
    const pinching::LSReport r = pinching::ls_min(s, 2);
    CHECK(std::abs(r.value) <= 1e-6);
}

TEST_CASE("frames stay orthonormal and sweeps never increase the value") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat g = rng.normal_matrix(6, 6);
        const Mat a = g + g.transpose();
        FrameProblem p;
        p.n = 6;
        p.q = 3;
        p.seed = static_cast<std::uint64_t>(trial);
        p.restarts = 2;
        // quartic term keeps the objective away from a pure eigenproblem
        p.objective = [a](const Mat& f) {
            const Mat m = f.transpose() * a * f;
            return m.trace() + 0.3 * m.squaredNorm();
        };
        const FrameResult r = minimize_over_frames(p);
        CHECK(max_abs(r.full.transpose() * r.full - Mat::Identity(6, 6)) <= 1e-12);
        CHECK(max_abs(r.frame - r.full.leftCols(3)) == 0);
        for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-15);
        CHECK(r.value == doctest::Approx(p.objective(r.frame)).epsilon(1e-12));
    }
}

TEST_CASE("identical settings give identical bits") {
    Rng rng(6);
    const Mat g = rng.normal_matrix(5, 5);
    const Mat a = g + g.transpose();
    FrameProblem p;
    p.n = 5;
    p.q = 2;
    p.seed = 99;
    p.objective = [a](const Mat& f) { return std::pow((f.transpose() * a * f).trace(), 2); };
    const FrameResult r1 = minimize_over_frames(p), r2 = minimize_over_frames(p);
    CHECK(r1.value == r2.value);
    CHECK(r1.best_start == r2.best_start);
    CHECK((r1.frame.array() == r2.frame.array()).all());
}

TEST_CASE("a quadratic form is never pushed below its smallest eigenvalue") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 7);
        const Mat g = rng.normal_matrix(n, n);
        const Mat a = g + g.transpose();
        FrameProblem p;
        p.n = n;
        p.q = 1;
        p.seed = static_cast<std::uint64_t>(trial);
        p.restarts = 4;
        p.objective = trace_form(a);
        p.homogeneous_degree = 2;
        const FrameResult r = minimize_over_frames(p);
        const double lmin = min_eigenpair(a).value;
        CHECK(r.value >= lmin - 1e-8);
        CHECK(r.value == doctest::Approx(lmin).epsilon(1e-8));
    }
}

TEST_CASE("min_eigenpair") {
    const EigenPair id = min_eigenpair(Mat::Identity(3, 3));
    CHECK(id.value == doctest::Approx(1));
    CHECK(id.vector.norm() == doctest::Approx(1));

    const EigenPair d = min_eigenpair(diag({3, 1, 2}));
    CHECK(d.value == doctest::Approx(1));
    CHECK(std::abs(std::abs(d.vector[1]) - 1) < 1e-14);

    const double rho = 0.7, scale = 4 * 0.3;
    Mat k(3, 3);
    k << 1, rho, 0, rho, rho * rho, 0, 0, 0, rho * rho + 1;
    k *= scale;
    const EigenPair z = min_eigenpair(k);
    CHECK(std::abs(z.value) < 1e-14);
    Vec kernel(3);
    kernel << -rho, 1, 0;
    CHECK(std::abs(std::abs(z.vector.dot(kernel.normalized())) - 1) < 1e-12);
    CHECK((k * z.vector - z.value * z.vector).norm() <= 1e-10 * k.norm());

    Mat asym = Mat::Identity(3, 3);
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(min_eigenpair(asym), PreconditionError);
}

TEST_CASE("Givens rotation and re-orthonormalization") {
    Mat q = Mat::Identity(3, 3);
    apply_givens(q, 0, 1, M_PI / 2);
    CHECK(max_abs(q.transpose() * q - Mat::Identity(3, 3)) < 1e-15);
    CHECK(std::abs(std::abs(q(1, 0)) - 1) < 1e-15);

    Rng rng(1);
    const Mat noisy = haar_orthogonal(4, rng) + 1e-7 * rng.normal_matrix(4, 4);
    const Mat fixed = reorthonormalize(noisy);
    CHECK(max_abs(fixed.transpose() * fixed - Mat::Identity(4, 4)) <= 1e-14);
    CHECK(max_abs(fixed - noisy) < 1e-6);
}
