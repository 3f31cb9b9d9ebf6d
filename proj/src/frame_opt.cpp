#include "subgeom/frame_opt.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "subgeom/error.hpp"
#include "subgeom/rng.hpp"

namespace subgeom::opt {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> block_of_columns(const FrameProblem& p) {
    std::vector<int> block(static_cast<std::size_t>(p.n), -1);
    int col = 0;
    for (std::size_t b = 0; b < p.invariant_blocks.size(); ++b)
        for (int k = 0; k < p.invariant_blocks[b]; ++k) block[static_cast<std::size_t>(col++)] = static_cast<int>(b);
    return block;
}

struct Plane {
    int i;
    int j;
};

std::vector<Plane> active_planes(const FrameProblem& p) {
    const std::vector<int> block = block_of_columns(p);
    std::vector<Plane> planes;
    for (int i = 0; i < p.n; ++i) {
        for (int j = i + 1; j < p.n; ++j) {
            if (i >= p.q && j >= p.q) continue;  // only discarded columns
            const int bi = block[static_cast<std::size_t>(i)], bj = block[static_cast<std::size_t>(j)];
            if (bi >= 0 && bi == bj) continue;
            planes.push_back({i, j});
        }
    }
    return planes;
}

double evaluate(const FrameProblem& p, const Mat& full) {
    if (p.q == full.cols()) return p.objective(full);
    return p.objective(full.leftCols(p.q));
}

void rotate_columns(Mat& q, int i, int j, double c, double s) {
    for (Eigen::Index r = 0; r < q.rows(); ++r) {
        const double a = q(r, i), b = q(r, j);
        q(r, i) = c * a + s * b;
        q(r, j) = -s * a + c * b;
    }
}

// `scratch` keeps its allocation between calls; the line searches call this thousands of times.
double rotated_value(const FrameProblem& p, const Mat& full, Plane pl, double c, double s, Mat& scratch) {
    scratch = full;
    rotate_columns(scratch, pl.i, pl.j, c, s);
    return evaluate(p, scratch);
}

double rotated_value(const FrameProblem& p, const Mat& full, Plane pl, double theta, Mat& scratch) {
    return rotated_value(p, full, pl, std::cos(theta), std::sin(theta), scratch);
}

// Bracket on a uniform grid over one period, then golden-section refine.
std::pair<double, double> golden_line_search(const FrameProblem& p, const Mat& full, Plane pl, Mat& scratch) {
    const int g = std::max(p.line_grid, 3);
    const double step = 2 * kPi / g;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g; ++k) {
        const double v = rotated_value(p, full, pl, -kPi + k * step, scratch);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    double a = -kPi + (best - 1) * step, b = -kPi + (best + 1) * step;
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = rotated_value(p, full, pl, x1, scratch), f2 = rotated_value(p, full, pl, x2, scratch);
    for (int it = 0; it < p.golden_iters; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = rotated_value(p, full, pl, x1, scratch);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = rotated_value(p, full, pl, x2, scratch);
        }
    }
    const double theta = f1 < f2 ? x1 : x2;
    const double val = std::min(f1, f2);
    if (best_val < val) return {-kPi + best * step, best_val};
    return {theta, val};
}

// f(theta) = a_0 + sum_k a_k cos(2k theta) + b_k sin(2k theta), k = 1..d/2.
class TrigInterpolator {
public:
    explicit TrigInterpolator(int degree) : half_(degree / 2), samples_(degree + 1) {
        Mat basis(samples_, samples_);
        for (int s = 0; s < samples_; ++s) {
            const double t = s * kPi / samples_;
            basis(s, 0) = 1.0;
            for (int k = 1; k <= half_; ++k) {
                basis(s, 2 * k - 1) = std::cos(2 * k * t);
                basis(s, 2 * k) = std::sin(2 * k * t);
            }
        }
        inverse_ = basis.inverse();
        table_.resize(kScan, samples_);
        for (int s = 0; s < kScan; ++s) {
            const double t = s * kPi / kScan;
            table_(s, 0) = 1.0;
            for (int k = 1; k <= half_; ++k) {
                table_(s, 2 * k - 1) = std::cos(2 * k * t);
                table_(s, 2 * k) = std::sin(2 * k * t);
            }
        }
    }

    int samples() const { return samples_; }
    double sample_cos(int s) const { return std::cos(s * kPi / samples_); }
    double sample_sin(int s) const { return std::sin(s * kPi / samples_); }

    // Global minimizer of the interpolant on [0, pi): dense scan plus Newton polish.
    std::pair<double, double> minimize(const Vec& values) const {
        const Vec coef = inverse_ * values;
        auto f = [&](double t, double* d1, double* d2) {
            double v = coef[0], g = 0, h = 0;
            for (int k = 1; k <= half_; ++k) {
                const double w = 2.0 * k, c = std::cos(w * t), s = std::sin(w * t);
                const double a = coef[2 * k - 1], b = coef[2 * k];
                v += a * c + b * s;
                g += w * (-a * s + b * c);
                h += -w * w * (a * c + b * s);
            }
            if (d1) *d1 = g;
            if (d2) *d2 = h;
            return v;
        };
        Eigen::Index best_s = 0;
        double best_v = (table_ * coef).minCoeff(&best_s);
        double best_t = best_s * kPi / kScan;
        constexpr int scan = kScan;
        double t = best_t;
        for (int it = 0; it < 8; ++it) {
            double g = 0, h = 0;
            f(t, &g, &h);
            if (!(h > 0)) break;
            const double dt = g / h;
            if (std::abs(dt) > kPi / scan) break;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        const double v = f(t, nullptr, nullptr);
        if (v <= best_v) return {t, v};
        return {best_t, best_v};
    }

private:
    static constexpr int kScan = 96;
    int half_;
    int samples_;
    Mat inverse_;
    Mat table_;  // basis functions at the scan angles
};

}  // namespace

void FrameProblem::validate() const {
    if (n < 1 || q < 1 || q > n) throw PreconditionError("frame problem requires 1 <= q <= n");
    if (!(tol > 0)) throw PreconditionError("frame problem tolerance must be positive");
    if (!objective) throw PreconditionError("frame problem has no objective");
    if (!invariant_blocks.empty() && std::accumulate(invariant_blocks.begin(), invariant_blocks.end(), 0) != q)
        throw PreconditionError("invariant blocks must partition the kept columns");
    if (homogeneous_degree < 0 || homogeneous_degree % 2 != 0)
        throw PreconditionError("homogeneous degree must be even and nonnegative");
    for (const Mat& s : starts)
        if (s.rows() != n || s.cols() != n) throw PreconditionError("start frame must be n x n");
}

void apply_givens(Mat& q, int i, int j, double theta) { rotate_columns(q, i, j, std::cos(theta), std::sin(theta)); }

Mat reorthonormalize(const Mat& q) {
    Mat out = q;
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < i; ++k) out.col(i) -= out.col(k).dot(out.col(i)) * out.col(k);
        out.col(i).normalize();
    }
    return out;
}

FrameResult descend_from(const FrameProblem& p, const Mat& start) {
    const std::vector<Plane> planes = active_planes(p);
    const bool trig = p.homogeneous_degree > 0;
    const TrigInterpolator interp(trig ? p.homogeneous_degree : 2);

    FrameResult r;
    Mat scratch;
    Vec samples(interp.samples());
    std::vector<double> cs, sn;
    for (int k = 0; k < interp.samples(); ++k) {
        cs.push_back(interp.sample_cos(k));
        sn.push_back(interp.sample_sin(k));
    }
    r.full = reorthonormalize(start);
    r.value = evaluate(p, r.full);
    for (int sweep = 0; sweep < p.max_sweeps; ++sweep) {
        const double before = r.value;
        for (const Plane pl : planes) {
            double theta = 0.0, predicted = r.value;
            if (trig) {
                samples[0] = r.value;
                for (int s = 1; s < interp.samples(); ++s)
                    samples[s] = rotated_value(p, r.full, pl, cs[static_cast<std::size_t>(s)],
                                               sn[static_cast<std::size_t>(s)], scratch);
                std::tie(theta, predicted) = interp.minimize(samples);
            } else {
                std::tie(theta, predicted) = golden_line_search(p, r.full, pl, scratch);
            }
            if (!(predicted < r.value)) continue;
            const double v = rotated_value(p, r.full, pl, theta, scratch);
            if (v < r.value) {
                r.full.swap(scratch);
                r.value = v;
            }
        }
        const Mat cleaned = reorthonormalize(r.full);
        const double v = evaluate(p, cleaned);
        if (v <= r.value) {
            r.full = cleaned;
            r.value = v;
        }
        r.history.push_back(r.value);
        r.sweeps = sweep + 1;
        if (before - r.value < p.tol) {
            r.converged = true;
            break;
        }
    }
    r.frame = r.full.leftCols(p.q);
    return r;
}

FrameResult minimize_over_frames(const FrameProblem& p) {
    p.validate();
    const int total = static_cast<int>(p.starts.size()) + p.restarts;
    if (total == 0) throw PreconditionError("frame problem needs at least one start");
    std::vector<FrameResult> results(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < total; ++s) {
        Mat start;
        if (s < static_cast<int>(p.starts.size())) {
            start = p.starts[static_cast<std::size_t>(s)];
        } else {
            Rng rng(p.seed, static_cast<std::uint64_t>(s));
            start = haar_orthogonal(p.n, rng);
        }
        results[static_cast<std::size_t>(s)] = descend_from(p, start);
    }

    int best = 0;
    for (int s = 1; s < total; ++s)
        if (results[static_cast<std::size_t>(s)].value < results[static_cast<std::size_t>(best)].value) best = s;
    FrameResult out = std::move(results[static_cast<std::size_t>(best)]);
    out.best_start = best;
    return out;
}

EigenPair min_eigenpair(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw PreconditionError("eigenproblem needs a nonempty square matrix");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw PreconditionError("matrix is not symmetric");
    const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

}  // namespace subgeom::opt
