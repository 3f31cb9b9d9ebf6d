#pragma once

// Intrinsic and normal curvature of a submanifold computed from its second
// fundamental form, the Bochner-Weitzenboeck operator on 2-vectors, the Hodge split
// in dimension four, the isotropic-curvature functional, adapted frames for the
// equality case, and Dupin principal normals.
//
// Index convention: R_{ijkl} = <R(e_i, e_j) e_k, e_l> with R(X,Y) = [D_X, D_Y] - D_[X,Y],
// so that R_{ijji} is the sectional curvature of span{e_i, e_j}. The Gauss equation
// then reads
//
//     R_{ijkl} = c (d_jk d_il - d_ik d_jl) + <alpha_jk, alpha_il> - <alpha_ik, alpha_jl>.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subgeom/immersion.hpp"

namespace subgeom::curvature {

class CurvTensor {
public:
    CurvTensor() = default;
    explicit CurvTensor(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

    int dim() const noexcept { return n_; }
    double operator()(int i, int j, int k, int l) const noexcept { return data_[index(i, j, k, l)]; }
    double& operator()(int i, int j, int k, int l) noexcept { return data_[index(i, j, k, l)]; }

    /// R(a, b, c, d) for arbitrary tangent vectors (frame coordinates).
    double contract(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const;
    /// Sectional curvature of span{v, w}.
    double sectional(const Vec& v, const Vec& w) const;
    /// max |R_ijkl + R_jkil + R_kijl|.
    double bianchi_residual() const;
    /// max deviation from R_ijkl = -R_jikl = -R_ijlk = R_klij.
    double symmetry_residual() const;

private:
    std::size_t index(int i, int j, int k, int l) const noexcept {
        return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
    }
    int n_ = 0;
    std::vector<double> data_;
};

CurvTensor gauss_curvature(const SFF& sff);

struct RicciData {
    Mat ric;
    double scalar = 0.0;
};

/// ric_jk = sum_i R_{j i i k}; unit S^4 gives 3 Id.
RicciData ricci_scalar(const CurvTensor& R);

/// Normal curvature R_perp(e_i, e_j) xi_a, expressed in the normal frame. By the Ricci
/// equation its (b, a) component is the commutator [A_b, A_a]_{ij}.
struct NormalCurv {
    int n = 0;
    int m = 0;
    std::vector<Mat> components;  // components[a * m + b](i, j) = <R_perp(e_i, e_j) xi_a, xi_b>
    double max_norm = 0.0;
    bool flat = true;
};

NormalCurv normal_curvature(const SFF& sff);

enum class TwoVectorBasis { Lexicographic, Eta };

/// Ordered index pairs (i < j) of the lexicographic 2-vector basis.
std::vector<std::pair<int, int>> two_vector_pairs(int n);

/// Bochner-Weitzenboeck operator as a symmetric q x q matrix, q = n(n-1)/2.
struct BWMatrix {
    Mat matrix;
    TwoVectorBasis basis = TwoVectorBasis::Lexicographic;
    int n = 0;
};

BWMatrix bw_operator(const CurvTensor& R, const RicciData& ric);

/// Hodge star on 2-vectors of an oriented 4-space in the lexicographic basis
/// (e12, e13, e14, e23, e24, e34). orientation = -1 reverses it.
Mat hodge_star(int orientation = 1);

/// Columns eta_1..eta_6 in lexicographic coordinates:
///   eta_1 = (e12 + e34)/sqrt2, eta_2 = (e13 - e24)/sqrt2, eta_3 = (e14 + e23)/sqrt2  (self-dual)
///   eta_4 = (e12 - e34)/sqrt2, eta_5 = (e13 + e24)/sqrt2, eta_6 = (e14 - e23)/sqrt2  (anti-self-dual)
Mat eta_basis();

/// Matrix of a 2-vector operator expressed in the eta basis.
BWMatrix to_eta_basis(const BWMatrix& bw);

struct HodgeSplit {
    Mat plus;                  // 3 x 3, restriction to the self-dual 2-vectors
    Mat minus;                 // 3 x 3, restriction to the anti-self-dual 2-vectors
    double commutator = 0.0;   // max |B * - * B|
};

HodgeSplit hodge_split(const BWMatrix& bw, int orientation = 1);

/// R_1331 + R_1441 + R_2332 + R_2442 - 2 R_1234 for the orthonormal frame given by
/// the four columns of `frame` (n x 4, frame coordinates).
double isotropic_curvature(const CurvTensor& R, const Mat& frame);

struct IsotropicMin {
    double value = 0.0;
    Mat frame;
    bool converged = false;
};

/// Minimum of the isotropic functional: best of `samples` Haar-random 4-frames,
/// refined by frame coordinate descent.
IsotropicMin isotropic_min(const CurvTensor& R, int samples, std::uint64_t seed, int max_sweeps = 200);

// ---------------------------------------------------------------------------
// Equality-case structure in dimension four
// ---------------------------------------------------------------------------

/// Residuals of the adapted-frame conditions for a 4-dimensional sff in its own frame.
///   a1: alpha_11 = alpha_22, alpha_33 = alpha_44, alpha_12 = alpha_34 = 0,
///       |alpha_23| = |alpha_14|, |alpha_24| = |alpha_13|
///   a2: <alpha_14 + alpha_23, alpha_13 - alpha_24> = 0 = <alpha_13 + alpha_24, alpha_14 - alpha_23>
///   a3: |alpha_13|^2 + |alpha_14|^2 = c + <alpha_11, alpha_44>
///   a1prime: <alpha_13, alpha_14> + <alpha_23, alpha_24> = 0 = <alpha_13, alpha_23> + <alpha_14, alpha_24>
struct AdaptedResiduals {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a1prime = 0.0;
};

AdaptedResiduals adapted_residuals(const SFF& sff);

/// Kernel sub-cases of B+ (ii1-ii3) and B- (iii1-iii3).
struct KernelReport {
    bool plus_kernel = false;
    bool minus_kernel = false;
    std::vector<std::string> matched;  // e.g. "ii2"
    std::optional<double> rho;
    /// Set when the printed and the orientation-symmetric reading of iii3 disagree.
    std::string note;
};

KernelReport classify_kernel(const SFF& adapted, double tol = 1e-8);

struct AdaptedFrameOptions {
    int restarts = 16;
    std::uint64_t seed = 0;
    double structure_tol = 1e-6;  // eigenvalue-multiplicity test
    double residual_tol = 1e-9;   // final (a1)-(a3) residuals, relative to 1 + S
    int max_sweeps = 200;
};

struct AdaptedFrame {
    Mat frame;              // 4 x 4 orthogonal, columns in the input tangent frame; det = +1
    SFF sff;                // the input tensor in the adapted frame
    AdaptedResiduals residuals;
    double ls_value = 0.0;  // best LS value found before polishing
    std::optional<double> rho;
    KernelReport kernel;
};

/// Adapted orthonormal frame of an equality-case tensor.
/// Throws PreconditionError("not an equality-case tensor") or ("no adapted basis found").
AdaptedFrame adapted_frame(const SFF& sff, const AdaptedFrameOptions& options = {});

/// Frame rotation by theta on span{e1, e2} and phi on span{e3, e4}.
Mat block_rotation(double theta, double phi);

/// Closed-form B+ and B- (eta basis) of an sff already in an adapted frame.
struct ClosedFormBW {
    Mat plus;
    Mat minus;
};

ClosedFormBW bw_adapted_closed_form(const SFF& adapted, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Dupin principal normals
// ---------------------------------------------------------------------------

struct DupinDecomposition {
    Vec eta1;
    Vec eta2;
    Mat E1;           // n x k orthonormal, tangent-frame coordinates
    Mat E2;
    double inner = 0.0;   // <eta1, eta2>
    double residual = 0.0;
    int nullity_dim = 0;
};

/// Split of the tangent space into the eigendistributions of two Dupin principal
/// normals. Throws PreconditionError("umbilical point") or
/// ("not simultaneously diagonalizable").
DupinDecomposition dupin_decomposition(const SFF& sff, double tol = 1e-6);

}  // namespace subgeom::curvature
