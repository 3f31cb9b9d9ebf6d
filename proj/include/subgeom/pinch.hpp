#pragma once

// Pinching bound a(n, k, t, c), the pinching verdict for a second fundamental form,
// the Lawson-Simons quantity and its extremization over orthonormal bases, the
// eigenvalue gap of the Bochner-Weitzenboeck operator, and random tensor samplers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subgeom/curvature.hpp"
#include "subgeom/immersion.hpp"
#include "subgeom/parallel.hpp"
#include "subgeom/rng.hpp"

namespace subgeom::pinching {

/// a(n,k,t,c) = n c + n^3 t^2 / (2k(n-k)) - n |n-2k| t sqrt(n^2 t^2 + 4 c k (n-k)) / (2k(n-k))
double pinch_bound(int n, int k, double t, double c);

enum class Verdict { Strict, Equality, Violated };
const char* verdict_name(Verdict v);

struct PinchReport {
    int n = 0;
    int k = 0;
    double c = 0.0;
    double S = 0.0;
    double H = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // S - bound
    Verdict verdict = Verdict::Strict;
};

/// Equality when |slack| <= tol (1 + bound).
PinchReport pinch_check(const Invariants& inv, int n, int k, double c, double tol = 1e-8);
PinchReport pinch_check(const SFF& sff, int k, double tol = 1e-8);

/// sum_{i <= p < j} (2 |alpha(e_i,e_j)|^2 - <alpha(e_i,e_i), alpha(e_j,e_j)>) - p(n-p)c
/// for the orthonormal basis given by the columns of `basis`.
double ls_quantity(const SFF& sff, const Mat& basis, int p);

struct LSOptions {
    int restarts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    int max_sweeps = 200;
};

/// Worst case of the Lawson-Simons inequality: the largest value of ls_quantity over
/// orthonormal bases, i.e. the basis minimizing the margin p(n-p)c - LHS. The inequality
/// holds for every basis iff value <= 0.
struct LSReport {
    int p = 0;
    Mat basis;
    double value = 0.0;
    bool minimized = false;  // optimizer converged
};

LSReport ls_min(const SFF& sff, int p, const LSOptions& options = {});

/// lambda_min(B) - (4c + 8H^2 - S), n = 4.
double lemp_gap(const curvature::BWMatrix& bw, const Invariants& inv, double c);

// ---------------------------------------------------------------------------
// Random tensors
// ---------------------------------------------------------------------------

/// Symmetric sff with i.i.d. standard Gaussian entries.
SFF random_sff(int n, int m, double c, Rng& rng);

/// Random sff whose mean-curvature and traceless parts are drawn independently, with
/// the traceless part scaled so that S = fraction * a(n, k, H, c). H is 0.7 |N(0,1)| for
/// c > 0 and uniform on [0.3, 1.5] for c = 0.
/// Throws PreconditionError when fraction * a < n H^2.
SFF random_pinched_sff(int n, int m, int k, double c, double fraction, Rng& rng);

/// Keep the mean-curvature vector of `sff` and scale its traceless part so that
/// S = fraction * a(n, k, H, c).
SFF scale_traceless_to_bound(const SFF& sff, int k, double fraction);

/// Random 4-dimensional sff already satisfying the adapted-frame conditions:
/// alpha_11 = alpha_22 = rho, alpha_33 = alpha_44 = sigma, alpha_12 = alpha_34 = 0,
/// alpha_13 = kappa, alpha_14 = lambda, alpha_23 = -eps lambda, alpha_24 = eps kappa with
/// kappa orthogonal to lambda and |kappa|^2 + |lambda|^2 = c + <rho, sigma>.
SFF random_adapted_sff(int m, double c, Rng& rng);

// ---------------------------------------------------------------------------
// Harnesses
// ---------------------------------------------------------------------------

using subgeom::Exec;

struct PropuSample {
    int index = 0;
    int m = 0;
    double c = 0.0;
    double S = 0.0;
    double bound = 0.0;
    double ls = 0.0;
};

struct PropuReport {
    int count = 0;
    double fraction = 1.0;
    double max_ls = 0.0;
    int failures = 0;
    std::optional<PropuSample> counterexample;  // worst failing sample
    std::vector<PropuSample> samples;
};

/// Samples n = 4 tensors with m in {1..4} and c cycling through `cs`, rescaled to
/// S = fraction * a(4, 2, H, c), and maximizes the p = 2 Lawson-Simons quantity.
/// A sample fails when ls > tol (fraction >= 1) or ls >= 0 (fraction < 1).
PropuReport propu_harness(int count, std::uint64_t seed, const std::vector<double>& cs, double fraction,
                          const LSOptions& options, double tol = 1e-6, Exec exec = Exec::Parallel);

struct LempReport {
    int count = 0;
    double min_gap = 0.0;
    int failures = 0;
    std::optional<int> worst_index;
};

/// Gap of the eigenvalue estimate on random n = 4 tensors, m in {1..4}, c in {0, 1}.
LempReport lemp_harness(int count, std::uint64_t seed, double tol = 1e-9, Exec exec = Exec::Parallel);

}  // namespace subgeom::pinching
