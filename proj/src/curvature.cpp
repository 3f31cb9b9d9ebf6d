#include "subgeom/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "subgeom/frame_opt.hpp"
#include "subgeom/pinch.hpp"
#include "subgeom/rng.hpp"

namespace subgeom::curvature {

// ---------------------------------------------------------------------------
// Curvature tensor
// ---------------------------------------------------------------------------

double CurvTensor::contract(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const {
    double total = 0.0;
    for (int i = 0; i < n_; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; j < n_; ++j) {
            if (b[j] == 0.0) continue;
            double inner = 0.0;
            for (int k = 0; k < n_; ++k) {
                const double* row = &data_[index(i, j, k, 0)];
                double s = 0.0;
                for (int l = 0; l < n_; ++l) s += row[l] * d[l];
                inner += c[k] * s;
            }
            total += a[i] * b[j] * inner;
        }
    }
    return total;
}

double CurvTensor::sectional(const Vec& v, const Vec& w) const {
    const double area = v.squaredNorm() * w.squaredNorm() - std::pow(v.dot(w), 2);
    return contract(v, w, w, v) / area;
}

double CurvTensor::bianchi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int l = 0; l < n_; ++l)
                    worst = std::max(worst, std::abs((*this)(i, j, k, l) + (*this)(j, k, i, l) + (*this)(k, i, j, l)));
    return worst;
}

double CurvTensor::symmetry_residual() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int l = 0; l < n_; ++l) {
                    const double r = (*this)(i, j, k, l);
                    worst = std::max({worst, std::abs(r + (*this)(j, i, k, l)), std::abs(r + (*this)(i, j, l, k)),
                                      std::abs(r - (*this)(k, l, i, j))});
                }
    return worst;
}

CurvTensor gauss_curvature(const SFF& sff) {
    const int n = sff.dim();
    const double c = sff.c();
    // Gram matrix of the alpha_{ij} vectors over the packed pairs
    const int np = pair_count(n);
    Mat gram(np, np);
    for (int p = 0; p < np; ++p)
        for (int q = p; q < np; ++q) {
            double s = 0.0;
            for (int a = 0; a < sff.codim(); ++a)
                s += sff.raw()[static_cast<std::size_t>(p * sff.codim() + a)] *
                     sff.raw()[static_cast<std::size_t>(q * sff.codim() + a)];
            gram(p, q) = gram(q, p) = s;
        }
    auto dot = [&](int i, int j, int k, int l) { return gram(pair_index(i, j, n), pair_index(k, l, n)); };

    CurvTensor R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double flat = (j == k && i == l ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
                    R(i, j, k, l) = c * flat + dot(j, k, i, l) - dot(i, k, j, l);
                }
    return R;
}

RicciData ricci_scalar(const CurvTensor& R) {
    const int n = R.dim();
    RicciData out{Mat::Zero(n, n), 0.0};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) out.ric(j, k) += R(j, i, i, k);
    out.scalar = out.ric.trace();
    return out;
}

NormalCurv normal_curvature(const SFF& sff) {
    NormalCurv out;
    out.n = sff.dim();
    out.m = sff.codim();
    std::vector<Mat> shapes;
    double alpha_sq = 0.0;
    for (int a = 0; a < out.m; ++a) {
        shapes.push_back(sff.shape(a));
        alpha_sq += shapes.back().squaredNorm();
    }
    for (int a = 0; a < out.m; ++a)
        for (int b = 0; b < out.m; ++b) {
            // <alpha(e_i, A_a e_j) - alpha(A_a e_i, e_j), xi_b> = (A_b A_a - A_a A_b)_{ij}
            const Mat comp = shapes[static_cast<std::size_t>(b)] * shapes[static_cast<std::size_t>(a)] -
                             shapes[static_cast<std::size_t>(a)] * shapes[static_cast<std::size_t>(b)];
            out.max_norm = std::max(out.max_norm, comp.norm());
            out.components.push_back(comp);
        }
    out.flat = out.max_norm <= 1e-8 * std::max(alpha_sq, 1e-300) || alpha_sq == 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Bochner-Weitzenboeck operator
// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> two_vector_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

BWMatrix bw_operator(const CurvTensor& R, const RicciData& ric) {
    const int n = R.dim();
    const auto pairs = two_vector_pairs(n);
    const int q = static_cast<int>(pairs.size());
    const Mat& Ric = ric.ric;
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    BWMatrix bw{Mat(q, q), TwoVectorBasis::Lexicographic, n};
    for (int p = 0; p < q; ++p) {
        const auto [v1, v2] = pairs[static_cast<std::size_t>(p)];
        for (int s = 0; s < q; ++s) {
            const auto [w1, w2] = pairs[static_cast<std::size_t>(s)];
            bw.matrix(p, s) = Ric(v1, w1) * delta(v2, w2) + Ric(v2, w2) * delta(v1, w1) -
                              Ric(v1, w2) * delta(v2, w1) - Ric(v2, w1) * delta(v1, w2) - 2.0 * R(v1, v2, w2, w1);
        }
    }
    return bw;
}

Mat hodge_star(int orientation) {
    // basis order: e12 e13 e14 e23 e24 e34
    Mat s = Mat::Zero(6, 6);
    s(5, 0) = 1;   // *e12 = e34
    s(4, 1) = -1;  // *e13 = -e24
    s(3, 2) = 1;   // *e14 = e23
    s(2, 3) = 1;   // *e23 = e14
    s(1, 4) = -1;  // *e24 = -e13
    s(0, 5) = 1;   // *e34 = e12
    return orientation >= 0 ? s : Mat(-s);
}

Mat eta_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat e = Mat::Zero(6, 6);
    e(0, 0) = r, e(5, 0) = r;   // (e12 + e34)
    e(1, 1) = r, e(4, 1) = -r;  // (e13 - e24)
    e(2, 2) = r, e(3, 2) = r;   // (e14 + e23)
    e(0, 3) = r, e(5, 3) = -r;  // (e12 - e34)
    e(1, 4) = r, e(4, 4) = r;   // (e13 + e24)
    e(2, 5) = r, e(3, 5) = -r;  // (e14 - e23)
    return e;
}

BWMatrix to_eta_basis(const BWMatrix& bw) {
    if (bw.n != 4) throw PreconditionError("the eta basis exists only in dimension 4");
    if (bw.basis == TwoVectorBasis::Eta) return bw;
    const Mat P = eta_basis();
    return {P.transpose() * bw.matrix * P, TwoVectorBasis::Eta, 4};
}

HodgeSplit hodge_split(const BWMatrix& bw, int orientation) {
    if (bw.n != 4) throw PreconditionError("Hodge split requires dimension 4");
    const Mat P = eta_basis();
    const Mat lex = bw.basis == TwoVectorBasis::Eta ? Mat(P * bw.matrix * P.transpose()) : bw.matrix;
    const Mat star = hodge_star(orientation);
    HodgeSplit out;
    out.commutator = (lex * star - star * lex).cwiseAbs().maxCoeff();
    const Mat eta = P.transpose() * lex * P;
    if (orientation >= 0) {
        out.plus = eta.topLeftCorner(3, 3);
        out.minus = eta.bottomRightCorner(3, 3);
    } else {
        out.plus = eta.bottomRightCorner(3, 3);
        out.minus = eta.topLeftCorner(3, 3);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Isotropic curvature
// ---------------------------------------------------------------------------

double isotropic_curvature(const CurvTensor& R, const Mat& frame) {
    if (frame.rows() != R.dim() || frame.cols() != 4 || R.dim() < 4)
        throw PreconditionError("isotropic curvature needs four tangent vectors in dimension >= 4");
    if ((frame.transpose() * frame - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-10)
        throw PreconditionError("frame is not orthonormal");
    const Vec e1 = frame.col(0), e2 = frame.col(1), e3 = frame.col(2), e4 = frame.col(3);
    return R.contract(e1, e3, e3, e1) + R.contract(e1, e4, e4, e1) + R.contract(e2, e3, e3, e2) +
           R.contract(e2, e4, e4, e2) - 2.0 * R.contract(e1, e2, e3, e4);
}

IsotropicMin isotropic_min(const CurvTensor& R, int samples, std::uint64_t seed, int max_sweeps) {
    const int n = R.dim();
    // Rotations preserve orientation, so each orientation class gets its own start.
    Rng rng(seed, 0x150);
    Mat best_start[2] = {Mat::Identity(n, n), Mat::Identity(n, n)};
    best_start[1].col(n - 1) *= -1;
    double best[2] = {isotropic_curvature(R, best_start[0].leftCols(4)),
                      isotropic_curvature(R, best_start[1].leftCols(4))};
    for (int s = 0; s < samples; ++s) {
        const Mat q = haar_orthogonal(n, rng);
        const int cls = q.determinant() > 0 ? 0 : 1;
        const double v = isotropic_curvature(R, q.leftCols(4));
        if (v < best[cls]) {
            best[cls] = v;
            best_start[cls] = q;
        }
    }
    opt::FrameProblem prob;
    prob.n = n;
    prob.q = 4;
    prob.objective = [&R](const Mat& f) { return isotropic_curvature(R, f); };
    prob.restarts = 0;
    prob.starts = {best_start[0], best_start[1]};
    prob.seed = seed;
    prob.homogeneous_degree = 4;
    prob.max_sweeps = max_sweeps;
    prob.tol = 1e-14;
    const opt::FrameResult r = opt::minimize_over_frames(prob);
    return {r.value, r.frame, r.converged};
}

// ---------------------------------------------------------------------------
// Adapted frames
// ---------------------------------------------------------------------------

namespace {

struct Alpha4 {
    // alpha_{ij} of a 4-dimensional sff, 1-based names for readability
    Vec a11, a22, a33, a44, a12, a34, a13, a14, a23, a24;
    double c;

    explicit Alpha4(const SFF& s)
        : a11(s(0, 0)), a22(s(1, 1)), a33(s(2, 2)), a44(s(3, 3)), a12(s(0, 1)), a34(s(2, 3)),
          a13(s(0, 2)), a14(s(0, 3)), a23(s(1, 2)), a24(s(1, 3)), c(s.c()) {}
};

double total_sq(const SFF& s) {
    double t = 0.0;
    for (double x : s.raw()) t += x * x;
    return t;
}

void require_dim4(const SFF& s) {
    if (s.dim() != 4) throw PreconditionError("operation requires a 4-dimensional tangent space");
}

}  // namespace

AdaptedResiduals adapted_residuals(const SFF& sff) {
    require_dim4(sff);
    const Alpha4 a(sff);
    AdaptedResiduals r;
    r.a1 = std::max({(a.a11 - a.a22).norm(), (a.a33 - a.a44).norm(), a.a12.norm(), a.a34.norm(),
                     std::abs(a.a23.norm() - a.a14.norm()), std::abs(a.a24.norm() - a.a13.norm())});
    r.a2 = std::max(std::abs((a.a14 + a.a23).dot(a.a13 - a.a24)), std::abs((a.a13 + a.a24).dot(a.a14 - a.a23)));
    r.a3 = std::abs(a.a13.squaredNorm() + a.a14.squaredNorm() - a.c - a.a11.dot(a.a44));
    r.a1prime = std::max(std::abs(a.a13.dot(a.a14) + a.a23.dot(a.a24)), std::abs(a.a13.dot(a.a23) + a.a14.dot(a.a24)));
    return r;
}

ClosedFormBW bw_adapted_closed_form(const SFF& adapted, double tol) {
    require_dim4(adapted);
    const AdaptedResiduals res = adapted_residuals(adapted);
    const double scale = 1.0 + total_sq(adapted) + std::abs(adapted.c());
    if (std::max({res.a1, res.a2, res.a3}) > tol * scale)
        throw PreconditionError("sff does not satisfy the adapted-frame conditions");
    const Alpha4 a(adapted);
    const Vec d = a.a44 - a.a11;
    const double dd = d.squaredNorm();
    const double n13 = a.a13.norm(), n14 = a.a14.norm(), n23 = a.a23.norm(), n24 = a.a24.norm();

    ClosedFormBW out{Mat::Zero(3, 3), Mat::Zero(3, 3)};
    for (int sign : {1, -1}) {
        const double s = sign;
        Mat& B = sign > 0 ? out.plus : out.minus;
        B(0, 0) = (a.a14 + s * a.a23).squaredNorm() + (a.a13 - s * a.a24).squaredNorm();
        B(1, 1) = dd + 4 * a.a13.squaredNorm() + 2 * (n14 * n23 - s * a.a14.dot(a.a23));
        B(2, 2) = dd + 4 * a.a14.squaredNorm() + 2 * (n13 * n24 + s * a.a13.dot(a.a24));
        B(0, 1) = B(1, 0) = (a.a23 + s * a.a14).dot(d);
        B(0, 2) = B(2, 0) = (a.a24 - s * a.a13).dot(d);
    }
    return out;
}

KernelReport classify_kernel(const SFF& adapted, double tol) {
    const ClosedFormBW B = bw_adapted_closed_form(adapted, 1e-6);
    const Alpha4 a(adapted);
    const double scale = 1.0 + total_sq(adapted);
    const double t = tol * scale;
    const double tv = std::sqrt(t);  // vector-norm tolerance matching squared-norm tolerance
    const Vec d = a.a44 - a.a11;

    KernelReport rep;
    rep.plus_kernel = opt::min_eigenpair(B.plus).value <= t;
    rep.minus_kernel = opt::min_eigenpair(B.minus).value <= t;

    auto parallel_rho = [&](const Vec& w) -> std::optional<double> {
        const double ww = w.squaredNorm();
        if (ww <= tv * tv) return std::nullopt;
        const double rho = d.dot(w) / (2 * ww);
        if ((d - 2 * rho * w).norm() > tv) return std::nullopt;
        return rho;
    };

    if (rep.plus_kernel) {
        if ((a.a14 + a.a23).norm() <= tv && (a.a13 - a.a24).norm() <= tv && std::abs(B.plus(0, 1)) <= t &&
            std::abs(B.plus(0, 2)) <= t)
            rep.matched.push_back("ii1");
        if (a.a13.norm() <= tv && a.a24.norm() <= tv && (a.a23 - a.a14).norm() <= tv) {
            if (auto rho = parallel_rho(a.a14)) {
                rep.matched.push_back("ii2");
                rep.rho = rho;
            }
        }
        if (a.a14.norm() <= tv && a.a23.norm() <= tv && (a.a24 + a.a13).norm() <= tv) {
            if (auto rho = parallel_rho(a.a13)) {
                rep.matched.push_back("ii3");
                rep.rho = rho;
            }
        }
    }
    if (rep.minus_kernel) {
        if ((a.a14 - a.a23).norm() <= tv && (a.a13 + a.a24).norm() <= tv && std::abs(B.minus(0, 1)) <= t &&
            std::abs(B.minus(0, 2)) <= t)
            rep.matched.push_back("iii1");
        if (a.a13.norm() <= tv && a.a24.norm() <= tv && (a.a23 + a.a14).norm() <= tv) {
            if (auto rho = parallel_rho(a.a14)) {
                rep.matched.push_back("iii2");
                rep.rho = rho;
            }
        }
        // iii3 as printed: alpha_14 = alpha_23 = 0, alpha_24 = alpha_23 != 0 (self-contradictory);
        // orientation-symmetric reading of ii3: alpha_24 = alpha_13 != 0.
        const bool base = a.a14.norm() <= tv && a.a23.norm() <= tv;
        const bool printed = base && (a.a24 - a.a23).norm() <= tv && a.a23.norm() > tv;
        const bool symmetric = base && (a.a24 - a.a13).norm() <= tv;
        std::optional<double> rho = symmetric ? parallel_rho(a.a13) : std::nullopt;
        if (rho) {
            rep.matched.push_back("iii3");
            rep.rho = rho;
        }
        if (printed != rho.has_value()) {
            rep.note = std::string("iii3 readings differ: printed (alpha_24 = alpha_23) ") +
                       (printed ? "matches" : "fails") + ", symmetric (alpha_24 = alpha_13) " +
                       (rho ? "matches" : "fails");
        }
    }
    return rep;
}

Mat block_rotation(double theta, double phi) {
    Mat q = Mat::Identity(4, 4);
    opt::apply_givens(q, 0, 1, theta);
    opt::apply_givens(q, 2, 3, phi);
    return q;
}

namespace {

// Orthogonal Cayley transform of a skew matrix.
Mat cayley(const Mat& K) {
    const Mat I = Mat::Identity(K.rows(), K.cols());
    return (I - 0.5 * K).partialPivLu().solve(I + 0.5 * K);
}

Vec block_residual(const SFF& s) {
    const int m = s.codim();
    Vec r(4 * m);
    r.segment(0, m) = s(0, 0) - s(1, 1);
    r.segment(m, m) = s(0, 1);
    r.segment(2 * m, m) = s(2, 2) - s(3, 3);
    r.segment(3 * m, m) = s(2, 3);
    return r;
}

Mat mixed_rotation(const Mat& Q, const Vec& x) {
    Mat K = Mat::Zero(4, 4);
    int k = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 4; ++j) {
            K(i, j) = x[k];
            K(j, i) = -x[k];
            ++k;
        }
    return Q * cayley(K);
}

// Gauss-Newton on the mixed rotations so that both 2-planes carry scalar blocks.
Mat polish_blocks(const SFF& sff, Mat Q) {
    const double scale = 1.0 + total_sq(sff);
    Vec r = block_residual(sff.transformed(Q));
    for (int it = 0; it < 60 && r.norm() > 1e-15 * scale; ++it) {
        const double h = 1e-6;
        Mat J(r.size(), 4);
        for (int k = 0; k < 4; ++k) {
            Vec x = Vec::Zero(4);
            x[k] = h;
            const Vec rp = block_residual(sff.transformed(mixed_rotation(Q, x)));
            const Vec rm = block_residual(sff.transformed(mixed_rotation(Q, -x)));
            J.col(k) = (rp - rm) / (2 * h);
        }
        Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-10);
        const Vec step = -svd.solve(r);
        const Mat trial = opt::reorthonormalize(mixed_rotation(Q, step));
        const Vec rt = block_residual(sff.transformed(trial));
        if (!(rt.norm() < r.norm())) break;
        Q = trial;
        r = rt;
    }
    return Q;
}

// Shape operators with two double eigenvalues, checked on the normal basis and on
// a few fixed random directions.
bool has_two_double_eigenvalues(const SFF& sff, double tol) {
    const int m = sff.codim();
    Rng rng(0x5eed, 0xd0b1e);
    std::vector<Vec> dirs;
    for (int a = 0; a < m; ++a) dirs.push_back(Vec::Unit(m, a));
    for (int k = 0; k < 4 && m > 1; ++k) dirs.push_back(rng.unit_vector(m));
    for (const Vec& xi : dirs) {
        const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(shape_operator(sff, xi)).eigenvalues();
        const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        if (std::abs(ev[0] - ev[1]) > tol * scale || std::abs(ev[2] - ev[3]) > tol * scale) return false;
    }
    return true;
}

}  // namespace

AdaptedFrame adapted_frame(const SFF& sff, const AdaptedFrameOptions& options) {
    require_dim4(sff);
    if (!has_two_double_eigenvalues(sff, options.structure_tol))
        throw PreconditionError("not an equality-case tensor");
    const double scale = 1.0 + total_sq(sff) + std::abs(sff.c());
    const double target = options.residual_tol * scale;

    AdaptedFrame out;
    Mat Q = Mat::Identity(4, 4);
    const AdaptedResiduals initial = adapted_residuals(sff);
    if (std::max({initial.a1, initial.a2, initial.a3}) <= target) {
        out.ls_value = pinching::ls_quantity(sff, Q, 2);
    } else {
        // stage 1: a basis realizing equality in the LS inequality for p = 2
        const pinching::LSReport ls = pinching::ls_min(sff, 2, {options.restarts, options.seed, 1e-15, options.max_sweeps});
        out.ls_value = ls.value;
        if (ls.value < -1e-6 * scale) throw PreconditionError("no adapted basis found");
        Q = ls.basis;
        // stage 2: make the two 2-plane blocks exactly scalar
        Q = polish_blocks(sff, Q);
        if (Q.determinant() < 0) Q.col(3) = -Q.col(3);
        // stage 3: rotate inside both 2-planes so that (a2) holds
        const Alpha4 a(sff.transformed(Q));
        const Vec u1 = a.a14 + a.a23, v1 = a.a24 - a.a13;
        const Vec u2 = a.a13 + a.a24, v2 = a.a14 - a.a23;
        const double sigma1 = std::atan2(-2 * u1.dot(v1), v1.squaredNorm() - u1.squaredNorm());
        const double sigma2 = std::atan2(-2 * u2.dot(v2), v2.squaredNorm() - u2.squaredNorm());
        const double phi = (sigma1 + sigma2) / 4, theta = (sigma1 - sigma2) / 4;
        Q = Q * block_rotation(theta, phi);
    }
    out.frame = Q;
    out.sff = sff.transformed(Q);
    out.residuals = adapted_residuals(out.sff);
    if (std::max({out.residuals.a1, out.residuals.a2, out.residuals.a3}) > target)
        throw PreconditionError("no adapted basis found");
    out.kernel = classify_kernel(out.sff);
    out.rho = out.kernel.rho;
    return out;
}

// ---------------------------------------------------------------------------
// Dupin principal normals
// ---------------------------------------------------------------------------

DupinDecomposition dupin_decomposition(const SFF& sff, double tol) {
    const int n = sff.dim();
    const int m = sff.codim();
    if (!normal_curvature(sff).flat) throw PreconditionError("not simultaneously diagonalizable");
    const double scale = std::max(1.0, std::sqrt(total_sq(sff)));

    // generic combination of the commuting shape operators
    Rng rng(0xd0b1, 7);
    Mat A = Mat::Zero(n, n);
    for (int a = 0; a < m; ++a) A += (1.0 + rng.uniform()) * sff.shape(a);
    const Eigen::SelfAdjointEigenSolver<Mat> es(A);
    const Vec ev = es.eigenvalues();

    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) {
        if (clusters.empty() || std::abs(ev[i] - ev[clusters.back().front()]) > tol * scale) clusters.push_back({});
        clusters.back().push_back(i);
    }
    auto alpha = [&](const Vec& x, const Vec& y) {
        Vec v = Vec::Zero(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v += x[i] * y[j] * sff(i, j);
        return v;
    };
    auto principal_normal = [&](const Mat& E) {
        Vec eta = Vec::Zero(m);
        for (Eigen::Index k = 0; k < E.cols(); ++k) eta += alpha(E.col(k), E.col(k));
        return Vec(eta / static_cast<double>(E.cols()));
    };

    if (clusters.size() == 1) {
        // one eigenvalue of the generic operator: umbilical if alpha = <,> eta
        const Vec eta = principal_normal(es.eigenvectors());
        double res = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) res = std::max(res, (sff(i, j) - (i == j ? eta : Vec(Vec::Zero(m)))).norm());
        if (res <= tol * scale) throw PreconditionError("umbilical point");
        throw PreconditionError("not simultaneously diagonalizable");
    }
    if (clusters.size() != 2 || clusters[0].size() != clusters[1].size())
        throw PreconditionError("not a point with two Dupin principal normals of equal multiplicity");

    DupinDecomposition out;
    const int k = static_cast<int>(clusters[0].size());
    out.E1 = es.eigenvectors().middleCols(clusters[0].front(), k);
    out.E2 = es.eigenvectors().middleCols(clusters[1].front(), k);
    out.eta1 = principal_normal(out.E1);
    out.eta2 = principal_normal(out.E2);
    const Mat basis = es.eigenvectors();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec expected = Vec::Zero(m);
            if (i == j) expected = i < k ? out.eta1 : out.eta2;
            out.residual = std::max(out.residual, (alpha(basis.col(i), basis.col(j)) - expected).norm());
        }
    if (out.residual > tol * scale) throw PreconditionError("not simultaneously diagonalizable");
    out.inner = out.eta1.dot(out.eta2);
    out.nullity_dim = invariants(sff).nullity_dim;
    return out;
}

}  // namespace subgeom::curvature
