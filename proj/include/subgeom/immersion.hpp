#pragma once

// Immersions as 2-jet providers, orthonormal frames, and the second fundamental form.
//
// Every immersion is realized extrinsically in a Euclidean space. A spherical ambient
// is the radius-R sphere inside that space; its radial direction is split off before
// the second fundamental form is assembled, so the same code path serves c = 0 and c = 1.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subgeom/error.hpp"
#include "subgeom/jet.hpp"

namespace subgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Lexicographic position of the pair (i, j), i <= j, among the n(n+1)/2 pairs.
constexpr int pair_index(int i, int j, int n) noexcept {
    if (i > j) {
        const int t = i;
        i = j;
        j = t;
    }
    return i * n - i * (i - 1) / 2 + (j - i);
}
constexpr int pair_count(int n) noexcept { return n * (n + 1) / 2; }

struct AmbientSpace {
    int form_dim = 0;           // N: dimension of the space form Q_c^N
    int curvature_flag = 0;     // c in {0, 1}
    double sphere_radius = 1.0; // meaningful only when curvature_flag == 1

    static AmbientSpace euclidean(int dim) { return {dim, 0, 1.0}; }
    static AmbientSpace sphere(int dim, double radius = 1.0) { return {dim, 1, radius}; }

    /// Dimension of the Euclidean space the jets live in.
    int embedding_dim() const noexcept { return form_dim + curvature_flag; }
    /// Sectional curvature of the ambient space form.
    double curvature() const noexcept { return curvature_flag ? 1.0 / (sphere_radius * sphere_radius) : 0.0; }
    int codimension(int n) const noexcept { return form_dim - n; }

    void validate() const;
};

/// Box of parameters; periodic coordinates are metadata only.
struct ParameterDomain {
    Vec lower;
    Vec upper;
    std::vector<bool> periodic;

    int dim() const noexcept { return static_cast<int>(lower.size()); }
    static ParameterDomain box(Vec lower, Vec upper) {
        std::vector<bool> p(static_cast<std::size_t>(lower.size()), false);
        return {std::move(lower), std::move(upper), std::move(p)};
    }
    bool contains(const Vec& u) const;
    /// Tensor grid with `per_dim` points per coordinate (cell centres), in row-major order.
    std::vector<Vec> grid(int per_dim) const;
    /// Uniform sample from a unit-interval vector t in [0,1)^n.
    Vec at_fraction(const Vec& t) const;
};

/// Position and first and second partial derivatives at a parameter point.
/// d1 columns are the partials; d2 columns are the second partials in pair_index order.
struct Jet2 {
    Vec position;
    Mat d1;
    Mat d2;

    int vars() const noexcept { return static_cast<int>(d1.cols()); }
    auto second(int i, int j) const { return d2.col(pair_index(i, j, vars())); }
};

class Chart {
public:
    using JetFn = std::function<Jet2(const Vec&)>;
    using PositionFn = std::function<Vec(const Vec&)>;

    Chart(std::string name, int n, AmbientSpace ambient, ParameterDomain domain, JetFn jet, PositionFn position);

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return n_; }
    const AmbientSpace& ambient() const noexcept { return ambient_; }
    const ParameterDomain& domain() const noexcept { return domain_; }

    Jet2 jet(const Vec& u) const { return jet_(u); }
    Vec position(const Vec& u) const { return position_(u); }

private:
    std::string name_;
    int n_;
    AmbientSpace ambient_;
    ParameterDomain domain_;
    JetFn jet_;
    PositionFn position_;
};

/// Build a chart from a generic position map. `map` must accept both
/// std::vector<double> and std::vector<JetN> and return a vector of the same type;
/// jets are obtained by running it on JetN variables, so they are exact.
template <class Map>
Chart make_chart(std::string name, int n, AmbientSpace ambient, ParameterDomain domain, Map map) {
    if (n < 1 || n > kMaxJetVars) throw ParameterError("chart dimension out of range");
    auto jet = [map, n](const Vec& u) {
        std::vector<JetN> vars;
        vars.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) vars.push_back(JetN::variable(n, i, u[i]));
        const std::vector<JetN> f = map(vars);
        const int E = static_cast<int>(f.size());
        Jet2 j{Vec(E), Mat(E, n), Mat(E, pair_count(n))};
        for (int a = 0; a < E; ++a) {
            j.position[a] = f[a].value();
            for (int i = 0; i < n; ++i) {
                j.d1(a, i) = f[a].grad(i);
                for (int k = i; k < n; ++k) j.d2(a, pair_index(i, k, n)) = f[a].hess(i, k);
            }
        }
        return j;
    };
    auto position = [map, n](const Vec& u) {
        std::vector<double> x(u.data(), u.data() + n);
        const std::vector<double> f = map(x);
        return Vec(Eigen::Map<const Vec>(f.data(), static_cast<Eigen::Index>(f.size())));
    };
    return Chart(std::move(name), n, ambient, std::move(domain), jet, position);
}

/// Central finite-difference jet of the position map. Step per coordinate is
/// cbrt(eps)(1+|u_i|) for first derivatives and eps^(1/4)(1+|u_i|) for second
/// derivatives; `richardson` adds one extrapolation level to both.
Jet2 finite_difference_jet(const Chart& chart, const Vec& u, bool richardson = false);

struct FramedPoint {
    Mat tangent;       // E x n, orthonormal columns spanning the image of d1
    Mat normal;        // E x m, orthonormal, orthogonal to tangent (and to the radial direction when c = 1)
    Mat coords;        // n x n upper triangular C with tangent = d1 * C
    Vec radial;        // unit position direction for c = 1, empty otherwise

    int dim() const noexcept { return static_cast<int>(tangent.cols()); }
    int codim() const noexcept { return static_cast<int>(normal.cols()); }
    /// Largest deviation of the Gram matrix of [tangent normal radial] from identity.
    double gram_residual() const;
};

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kNullityThreshold = 1e-8;

FramedPoint frames_from_jet(const AmbientSpace& ambient, const Jet2& jet);
FramedPoint frames_at(const Chart& chart, const Vec& u);

/// Second fundamental form alpha_{ij}^a in orthonormal tangent/normal frames.
/// Stored once per unordered pair (i <= j), so symmetry is exact.
class SFF {
public:
    SFF() = default;
    SFF(int n, int m, double c);

    int dim() const noexcept { return n_; }
    int codim() const noexcept { return m_; }
    /// Sectional curvature of the ambient space form.
    double c() const noexcept { return c_; }
    void set_c(double c) noexcept { c_ = c; }

    Eigen::Map<const Vec> operator()(int i, int j) const {
        return Eigen::Map<const Vec>(data_.data() + static_cast<std::size_t>(pair_index(i, j, n_) * m_), m_);
    }
    Eigen::Map<Vec> operator()(int i, int j) {
        return Eigen::Map<Vec>(data_.data() + static_cast<std::size_t>(pair_index(i, j, n_) * m_), m_);
    }
    double component(int i, int j, int a) const noexcept {
        return data_[static_cast<std::size_t>(pair_index(i, j, n_) * m_ + a)];
    }

    /// Shape operator matrix of the a-th normal frame vector.
    Mat shape(int a) const;
    /// Same tensor expressed in new frames: tangent columns of Q (n x n orthogonal),
    /// normal columns of P (m x m orthogonal).
    SFF transformed(const Mat& Q, const Mat& P) const;
    SFF transformed(const Mat& Q) const { return transformed(Q, Mat::Identity(m_, m_)); }
    SFF scaled(double s) const;

    /// |alpha_ii - radial umbilic part| residual of the discarded radial component (c = 1).
    double radial_residual = 0.0;

    const std::vector<double>& raw() const noexcept { return data_; }

private:
    int n_ = 0;
    int m_ = 0;
    double c_ = 0.0;
    std::vector<double> data_;
};

SFF second_fundamental_form(const AmbientSpace& ambient, const FramedPoint& fp, const Jet2& jet);
inline SFF second_fundamental_form(const Chart& chart, const FramedPoint& fp, const Jet2& jet) {
    return second_fundamental_form(chart.ambient(), fp, jet);
}
/// frames_at + second_fundamental_form in one call.
SFF sff_at(const Chart& chart, const Vec& u);

struct Invariants {
    double S = 0.0;            // squared length of alpha
    double H = 0.0;            // norm of the mean curvature vector
    Vec mean_vector;           // (1/n) trace alpha, in normal-frame coordinates
    double traceless_sq = 0.0; // S - n H^2
    int nullity_dim = 0;       // dimension of the relative nullity subspace
};

Invariants invariants(const SFF& sff);

/// A_xi = sum_a xi_a alpha^a; xi must be a unit vector (1e-10).
Mat shape_operator(const SFF& sff, const Vec& xi);

}  // namespace subgeom
