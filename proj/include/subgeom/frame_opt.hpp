#pragma once

// Derivative-free minimization over orthonormal q-frames in R^n by Givens-rotation
// coordinate descent, plus small symmetric eigenproblems.
//
// A frame is the first q columns of an n x n orthogonal matrix. Each sweep visits
// every rotation plane (i, j), i < j, that touches a kept column and is not
// inside a declared invariant block, searches the rotation angle, and applies the
// best rotation when it improves the objective.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace subgeom::opt {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Objective on an n x q matrix with orthonormal columns.
using Objective = std::function<double(const Mat& frame)>;

struct FrameProblem {
    int n = 0;
    int q = 0;
    Objective objective;
    int restarts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    int max_sweeps = 200;

    /// Column block sizes (summing to q) such that the objective is invariant under
    /// rotations inside each block; those planes are skipped. Empty: no invariance.
    std::vector<int> invariant_blocks;

    /// When nonzero, the objective restricted to any Givens rotation is declared a
    /// trigonometric polynomial in 2*theta of this even homogeneous degree (e.g. 4 for
    /// forms quartic in the frame vectors); the line search then interpolates it
    /// exactly from degree+1 samples. Zero selects bracketing golden-section search.
    int homogeneous_degree = 0;

    /// Golden-section settings.
    int line_grid = 16;
    int golden_iters = 48;

    /// Explicit n x n orthogonal starting matrices, tried before the random restarts.
    std::vector<Mat> starts;

    void validate() const;
};

struct FrameResult {
    Mat frame;                    // n x q
    Mat full;                     // n x n orthogonal completion
    double value = 0.0;
    bool converged = false;
    int best_start = 0;           // index among (starts..., random restarts...)
    int sweeps = 0;               // sweeps used by the winning start
    std::vector<double> history;  // value after each sweep of the winning start
};

FrameResult minimize_over_frames(const FrameProblem& problem);

/// Single start of the coordinate descent, exposed for tests and benchmarks.
FrameResult descend_from(const FrameProblem& problem, const Mat& start);

struct EigenPair {
    double value = 0.0;
    Vec vector;
};

/// Smallest eigenvalue of a symmetric matrix and a unit eigenvector.
EigenPair min_eigenpair(const Mat& m);

/// Columns re-orthonormalized by modified Gram-Schmidt (two passes).
Mat reorthonormalize(const Mat& q);

/// Right-multiply by the Givens rotation of angle theta in plane (i, j).
void apply_givens(Mat& q, int i, int j, double theta);

}  // namespace subgeom::opt
