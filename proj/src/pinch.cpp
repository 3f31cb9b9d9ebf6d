#include "subgeom/pinch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subgeom/error.hpp"
#include "subgeom/frame_opt.hpp"
#include "subgeom/parallel.hpp"

namespace subgeom::pinching {

double pinch_bound(int n, int k, double t, double c) {
    if (n < 2 || k < 1 || k > n - 1) throw ParameterError("pinch bound needs 1 <= k <= n-1");
    if (!(t >= 0) || !(c >= 0)) throw ParameterError("pinch bound needs t >= 0 and c >= 0");
    const double nn = n, kk = k, nk = static_cast<double>(n - k);
    const double root = std::sqrt(nn * nn * t * t + 4 * c * kk * nk);
    return nn * c + nn * nn * nn * t * t / (2 * kk * nk) - nn * std::abs(nn - 2 * kk) * t * root / (2 * kk * nk);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Strict: return "strict";
        case Verdict::Equality: return "equality";
        case Verdict::Violated: return "violated";
    }
    return "?";
}

PinchReport pinch_check(const Invariants& inv, int n, int k, double c, double tol) {
    PinchReport r;
    r.n = n;
    r.k = k;
    r.c = c;
    r.S = inv.S;
    r.H = inv.H;
    r.bound = pinch_bound(n, k, inv.H, c);
    r.slack = r.S - r.bound;
    if (std::abs(r.slack) <= tol * (1 + r.bound))
        r.verdict = Verdict::Equality;
    else
        r.verdict = r.slack < 0 ? Verdict::Strict : Verdict::Violated;
    return r;
}

PinchReport pinch_check(const SFF& sff, int k, double tol) {
    return pinch_check(invariants(sff), sff.dim(), k, sff.c(), tol);
}

namespace {

// Lawson-Simons sum from the shape operators expressed in the basis. Templated on the
// matrix type so the common small cases run on stack storage.
template <class M>
double ls_sum(const std::vector<Mat>& shapes, const Mat& basis, int p, double c) {
    const int n = static_cast<int>(basis.rows());
    const M b = basis;
    M t(n, n), ab(n, n);
    double cross = 0.0;  // sum 2 |alpha_ij|^2
    double mixed = 0.0;  // sum <alpha_ii, alpha_jj>, i <= p < j
    for (const Mat& shape : shapes) {
        ab.noalias() = M(shape) * b;
        t.noalias() = b.transpose() * ab;
        cross += 2.0 * t.topRightCorner(p, n - p).squaredNorm();
        mixed += t.diagonal().head(p).sum() * t.diagonal().tail(n - p).sum();
    }
    return cross - mixed - p * (n - p) * c;
}

double ls_from_shapes(const std::vector<Mat>& shapes, const Mat& basis, int p, double c) {
    using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
    if (basis.rows() == 4) return ls_sum<Eigen::Matrix4d>(shapes, basis, p, c);
    if (basis.rows() <= 8) return ls_sum<Small>(shapes, basis, p, c);
    return ls_sum<Mat>(shapes, basis, p, c);
}

std::vector<Mat> all_shapes(const SFF& sff) {
    std::vector<Mat> shapes;
    for (int a = 0; a < sff.codim(); ++a) shapes.push_back(sff.shape(a));
    return shapes;
}

}  // namespace

double ls_quantity(const SFF& sff, const Mat& basis, int p) {
    const int n = sff.dim();
    if (p < 1 || p > n - 1) throw ParameterError("Lawson-Simons index p must satisfy 1 <= p <= n-1");
    if (basis.rows() != n || basis.cols() != n) throw PreconditionError("basis must be n x n");
    if ((basis.transpose() * basis - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw PreconditionError("basis is not orthonormal");
    return ls_from_shapes(all_shapes(sff), basis, p, sff.c());
}

LSReport ls_min(const SFF& sff, int p, const LSOptions& options) {
    const int n = sff.dim();
    if (p < 1 || p > n - 1) throw ParameterError("Lawson-Simons index p must satisfy 1 <= p <= n-1");
    const std::vector<Mat> shapes = all_shapes(sff);
    const double c = sff.c();

    opt::FrameProblem prob;
    prob.n = n;
    prob.q = n;
    prob.objective = [&shapes, p, c](const Mat& b) { return -ls_from_shapes(shapes, b, p, c); };
    prob.restarts = options.restarts;
    prob.seed = options.seed;
    prob.tol = options.tol;
    prob.max_sweeps = options.max_sweeps;
    prob.invariant_blocks = {p, n - p};
    prob.homogeneous_degree = 4;
    prob.starts = {Mat::Identity(n, n)};
    const opt::FrameResult r = opt::minimize_over_frames(prob);
    return {p, r.full, -r.value, r.converged};
}

double lemp_gap(const curvature::BWMatrix& bw, const Invariants& inv, double c) {
    if (bw.n != 4) throw PreconditionError("eigenvalue gap is defined for n = 4");
    return opt::min_eigenpair(bw.matrix).value - (4 * c + 8 * inv.H * inv.H - inv.S);
}

// ---------------------------------------------------------------------------
// Random tensors
// ---------------------------------------------------------------------------

SFF random_sff(int n, int m, double c, Rng& rng) {
    SFF s(n, m, c);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s(i, j) = rng.normal_vector(m);
    return s;
}

SFF scale_traceless_to_bound(const SFF& sff, int k, double fraction) {
    const int n = sff.dim(), m = sff.codim();
    const Invariants inv = invariants(sff);
    const double target = fraction * pinch_bound(n, k, inv.H, sff.c());
    const double room = target - n * inv.H * inv.H;
    if (room < 0) throw PreconditionError("target below the umbilical part");
    if (inv.traceless_sq <= 0) throw PreconditionError("umbilical tensor has no traceless part to scale");
    const double t = std::sqrt(room / inv.traceless_sq);
    SFF out(n, m, sff.c());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Vec mean = i == j ? inv.mean_vector : Vec(Vec::Zero(m));
            out(i, j) = mean + t * (sff(i, j) - mean);
        }
    return out;
}

SFF random_pinched_sff(int n, int m, int k, double c, double fraction, Rng& rng) {
    const SFF raw = random_sff(n, m, c, rng);
    const Invariants inv = invariants(raw);
    // Independent mean-curvature magnitude. At c = 0 the bound is proportional to H^2,
    // so H sets the overall scale and is kept away from zero.
    const double h = c > 0 ? std::abs(rng.normal()) * 0.7 : rng.uniform(0.3, 1.5);
    const Vec dir = inv.mean_vector.norm() > 0 ? Vec(inv.mean_vector.normalized()) : rng.unit_vector(m);
    SFF s(n, m, c);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Vec v = raw(i, j);
            if (i == j) v += h * dir - inv.mean_vector;
            s(i, j) = v;
        }
    return scale_traceless_to_bound(s, k, fraction);
}

SFF random_adapted_sff(int m, double c, Rng& rng) {
    const Vec rho = rng.normal_vector(m);
    Vec sigma = rng.normal_vector(m);
    if (c + rho.dot(sigma) < 0) sigma = -sigma;
    const double budget = c + rho.dot(sigma);

    // orthonormal pair for kappa, lambda (lambda = 0 when m = 1)
    const Vec u = rng.unit_vector(m);
    Vec w = Vec::Zero(m);
    if (m > 1) {
        w = rng.normal_vector(m);
        w -= w.dot(u) * u;
        w.normalize();
    }
    const double angle = m > 1 ? rng.uniform(0.0, 2 * 3.14159265358979323846) : 0.0;
    const Vec kappa = std::sqrt(budget) * std::cos(angle) * u;
    const Vec lambda = std::sqrt(budget) * std::sin(angle) * w;
    const double eps = rng.uniform() < 0.5 ? -1.0 : 1.0;

    SFF s(4, m, c);
    s(0, 0) = rho;
    s(1, 1) = rho;
    s(2, 2) = sigma;
    s(3, 3) = sigma;
    s(0, 1) = Vec::Zero(m);
    s(2, 3) = Vec::Zero(m);
    s(0, 2) = kappa;
    s(0, 3) = lambda;
    s(1, 2) = -eps * lambda;
    s(1, 3) = eps * kappa;
    return s;
}

// ---------------------------------------------------------------------------
// Harnesses
// ---------------------------------------------------------------------------

PropuReport propu_harness(int count, std::uint64_t seed, const std::vector<double>& cs, double fraction,
                          const LSOptions& options, double tol, Exec exec) {
    if (cs.empty()) throw ParameterError("harness needs at least one ambient curvature");
    std::vector<PropuSample> samples(static_cast<std::size_t>(count));
    for_each_index(count, exec == Exec::Parallel, [&](int i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        PropuSample smp;
        smp.index = i;
        smp.m = rng.uniform_int(1, 4);
        smp.c = cs[static_cast<std::size_t>(i) % cs.size()];
        const SFF s = random_pinched_sff(4, smp.m, 2, smp.c, fraction, rng);
        const Invariants inv = invariants(s);
        smp.S = inv.S;
        smp.bound = pinch_bound(4, 2, inv.H, smp.c);
        LSOptions o = options;
        o.seed = derive_seed(options.seed, static_cast<std::uint64_t>(i));
        smp.ls = ls_min(s, 2, o).value;
        samples[static_cast<std::size_t>(i)] = smp;
    });

    PropuReport rep;
    rep.count = count;
    rep.fraction = fraction;
    rep.max_ls = -std::numeric_limits<double>::infinity();
    for (const PropuSample& s : samples) {
        rep.max_ls = std::max(rep.max_ls, s.ls);
        const bool fail = fraction >= 1.0 ? s.ls > tol : s.ls >= 0.0;
        if (fail) {
            ++rep.failures;
            if (!rep.counterexample || s.ls > rep.counterexample->ls) rep.counterexample = s;
        }
    }
    rep.samples = std::move(samples);
    return rep;
}

LempReport lemp_harness(int count, std::uint64_t seed, double tol, Exec exec) {
    std::vector<double> gaps(static_cast<std::size_t>(count));
    for_each_index(count, exec == Exec::Parallel, [&](int i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const int m = rng.uniform_int(1, 4);
        const double c = i % 2 == 0 ? 0.0 : 1.0;
        const SFF s = random_sff(4, m, c, rng).scaled(rng.uniform(0.1, 1.5));
        const curvature::CurvTensor R = curvature::gauss_curvature(s);
        const curvature::BWMatrix bw = curvature::bw_operator(R, curvature::ricci_scalar(R));
        gaps[static_cast<std::size_t>(i)] = lemp_gap(bw, invariants(s), c);
    });
    LempReport rep;
    rep.count = count;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const double g = gaps[static_cast<std::size_t>(i)];
        if (g < rep.min_gap) {
            rep.min_gap = g;
            rep.worst_index = i;
        }
        if (g < -tol) ++rep.failures;
    }
    return rep;
}

}  // namespace subgeom::pinching
