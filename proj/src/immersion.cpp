#include "subgeom/immersion.hpp"

#include <cmath>
#include <limits>

namespace subgeom {

void AmbientSpace::validate() const {
    if (curvature_flag != 0 && curvature_flag != 1) throw ParameterError("ambient curvature flag must be 0 or 1");
    if (form_dim < 1) throw ParameterError("ambient dimension must be positive");
    if (curvature_flag == 1 && !(sphere_radius > 0.0)) throw ParameterError("sphere radius must be positive");
}

bool ParameterDomain::contains(const Vec& u) const {
    if (u.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] < lower[i] || u[i] > upper[i]) return false;
    }
    return true;
}

std::vector<Vec> ParameterDomain::grid(int per_dim) const {
    const int n = dim();
    std::vector<Vec> out;
    if (per_dim <= 0 || n == 0) return out;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_dim);
    out.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        for (int i = n - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(per_dim));
            rest /= static_cast<std::size_t>(per_dim);
        }
        Vec t(n);
        for (int i = 0; i < n; ++i) t[i] = (idx[static_cast<std::size_t>(i)] + 0.5) / per_dim;
        out.push_back(at_fraction(t));
    }
    return out;
}

Vec ParameterDomain::at_fraction(const Vec& t) const {
    return lower + t.cwiseProduct(upper - lower);
}

Chart::Chart(std::string name, int n, AmbientSpace ambient, ParameterDomain domain, JetFn jet, PositionFn position)
    : name_(std::move(name)),
      n_(n),
      ambient_(ambient),
      domain_(std::move(domain)),
      jet_(std::move(jet)),
      position_(std::move(position)) {
    ambient_.validate();
    if (domain_.dim() != n_) throw ParameterError("parameter domain dimension does not match chart dimension");
    if (ambient_.codimension(n_) < 0) throw ParameterError("ambient space smaller than the chart");
}

Jet2 finite_difference_jet(const Chart& chart, const Vec& u, bool richardson) {
    const int n = chart.dim();
    const double eps = std::numeric_limits<double>::epsilon();
    const Vec f0 = chart.position(u);
    const int E = static_cast<int>(f0.size());
    Jet2 j{f0, Mat(E, n), Mat(E, pair_count(n))};

    auto shifted = [&](int i, double hi, int k, double hk) {
        Vec v = u;
        v[i] += hi;
        if (k >= 0) v[k] += hk;
        return chart.position(v);
    };
    auto first = [&](int i, double h) -> Vec { return (shifted(i, h, -1, 0) - shifted(i, -h, -1, 0)) / (2 * h); };
    auto second = [&](int i, int k, double hi, double hk) -> Vec {
        if (i == k) return (shifted(i, hi, -1, 0) - 2 * f0 + shifted(i, -hi, -1, 0)) / (hi * hi);
        return (shifted(i, hi, k, hk) - shifted(i, hi, k, -hk) - shifted(i, -hi, k, hk) + shifted(i, -hi, k, -hk)) /
               (4 * hi * hk);
    };

    std::vector<double> h1(static_cast<std::size_t>(n)), h2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        h1[static_cast<std::size_t>(i)] = std::cbrt(eps) * (1 + std::abs(u[i]));
        h2[static_cast<std::size_t>(i)] = std::sqrt(std::sqrt(eps)) * (1 + std::abs(u[i]));
    }
    for (int i = 0; i < n; ++i) {
        const double h = h1[static_cast<std::size_t>(i)];
        j.d1.col(i) = richardson ? Vec((4 * first(i, h / 2) - first(i, h)) / 3) : first(i, h);
        for (int k = i; k < n; ++k) {
            const double hi = h2[static_cast<std::size_t>(i)], hk = h2[static_cast<std::size_t>(k)];
            j.d2.col(pair_index(i, k, n)) =
                richardson ? Vec((4 * second(i, k, hi / 2, hk / 2) - second(i, k, hi, hk)) / 3) : second(i, k, hi, hk);
        }
    }
    return j;
}

double FramedPoint::gram_residual() const {
    const int k = static_cast<int>(tangent.cols() + normal.cols() + (radial.size() > 0 ? 1 : 0));
    Mat all(tangent.rows(), k);
    all << tangent, normal;
    if (radial.size() > 0) all.col(k - 1) = radial;
    return (all.transpose() * all - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
}

FramedPoint frames_from_jet(const AmbientSpace& ambient, const Jet2& jet) {
    const int n = jet.vars();
    const int E = static_cast<int>(jet.position.size());
    if (E != ambient.embedding_dim() || jet.d1.rows() != E || jet.d2.rows() != E || jet.d2.cols() != pair_count(n)) {
        throw PreconditionError("normal-space dimension mismatch: jet size does not match the ambient space");
    }
    const Eigen::JacobiSVD<Mat> svd(jet.d1);
    const Vec& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] <= kRankThreshold * sv[0]) {
        throw RankError("rank-deficient jet: the immersion condition fails");
    }

    FramedPoint fp;
    if (ambient.curvature_flag == 1) {
        const double R = ambient.sphere_radius;
        const double pp = jet.position.squaredNorm();
        if (std::abs(pp - R * R) > 1e-10 * (1 + R * R)) {
            throw PreconditionError("jet position does not lie on the ambient sphere");
        }
        for (int i = 0; i < n; ++i) {
            if (std::abs(jet.d1.col(i).dot(jet.position)) > 1e-10 * (1 + jet.d1.col(i).norm() * R)) {
                throw PreconditionError("jet velocity is not tangent to the ambient sphere");
            }
        }
        fp.radial = jet.position / std::sqrt(pp);
    }

    // modified Gram-Schmidt, applied twice; d1 = tangent * Rfac
    fp.tangent = Mat::Zero(E, n);
    Mat rfac = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        Vec v = jet.d1.col(i);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < i; ++k) {
                const double r = fp.tangent.col(k).dot(v);
                rfac(k, i) += r;
                v -= r * fp.tangent.col(k);
            }
        }
        rfac(i, i) = v.norm();
        fp.tangent.col(i) = v / rfac(i, i);
    }
    fp.coords = rfac.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));

    const int m = ambient.codimension(n);
    const int used = n + ambient.curvature_flag;
    Mat span(E, used);
    span << fp.tangent;
    if (ambient.curvature_flag == 1) span.col(n) = fp.radial;
    const Eigen::HouseholderQR<Mat> qr(span);
    const Mat q = qr.householderQ() * Mat::Identity(E, E);
    fp.normal = q.rightCols(m);
    if (fp.normal.cols() + used != E) throw PreconditionError("normal-space dimension mismatch");
    return fp;
}

FramedPoint frames_at(const Chart& chart, const Vec& u) { return frames_from_jet(chart.ambient(), chart.jet(u)); }

SFF::SFF(int n, int m, double c) : n_(n), m_(m), c_(c), data_(static_cast<std::size_t>(pair_count(n) * m), 0.0) {}

Mat SFF::shape(int a) const {
    Mat A(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) A(i, j) = A(j, i) = component(i, j, a);
    return A;
}

SFF SFF::transformed(const Mat& Q, const Mat& P) const {
    SFF out(n_, m_, c_);
    // alpha'_{ij} = P^T sum_{kl} Q_{ki} Q_{lj} alpha_{kl}
    std::vector<Mat> shapes;
    shapes.reserve(static_cast<std::size_t>(m_));
    for (int a = 0; a < m_; ++a) shapes.push_back(Q.transpose() * shape(a) * Q);
    for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
            Vec v(m_);
            for (int a = 0; a < m_; ++a) v[a] = shapes[static_cast<std::size_t>(a)](i, j);
            out(i, j) = P.transpose() * v;
        }
    }
    out.radial_residual = radial_residual;
    return out;
}

SFF SFF::scaled(double s) const {
    SFF out = *this;
    for (double& x : out.data_) x *= s;
    return out;
}

SFF second_fundamental_form(const AmbientSpace& ambient, const FramedPoint& fp, const Jet2& jet) {
    const int n = fp.dim();
    const int m = fp.codim();
    SFF sff(n, m, ambient.curvature());
    const Mat& C = fp.coords;
    Mat G(n, n);
    std::vector<Mat> proj;
    for (int a = 0; a < m; ++a) {
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) G(k, l) = G(l, k) = jet.second(k, l).dot(fp.normal.col(a));
        proj.push_back(C.transpose() * G * C);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int a = 0; a < m; ++a) sff(i, j)[a] = proj[static_cast<std::size_t>(a)](i, j);

    if (fp.radial.size() > 0) {
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) G(k, l) = G(l, k) = jet.second(k, l).dot(fp.radial);
        const Mat radial = C.transpose() * G * C;
        sff.radial_residual = (radial + Mat::Identity(n, n) / ambient.sphere_radius).cwiseAbs().maxCoeff();
    }
    return sff;
}

SFF sff_at(const Chart& chart, const Vec& u) {
    const Jet2 j = chart.jet(u);
    return second_fundamental_form(chart.ambient(), frames_from_jet(chart.ambient(), j), j);
}

Invariants invariants(const SFF& sff) {
    const int n = sff.dim();
    const int m = sff.codim();
    Invariants inv;
    inv.mean_vector = Vec::Zero(m);
    for (int i = 0; i < n; ++i) {
        inv.mean_vector += sff(i, i);
        for (int j = 0; j < n; ++j) inv.S += sff(i, j).squaredNorm();
    }
    inv.mean_vector /= n;
    inv.H = inv.mean_vector.norm();
    inv.traceless_sq = inv.S - n * inv.H * inv.H;

    if (m == 0) {
        inv.nullity_dim = n;
        return inv;
    }
    Mat flat(n, n * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) flat.block(i, j * m, 1, m) = sff(i, j).transpose();
    const Vec sv = Eigen::JacobiSVD<Mat>(flat).singularValues();
    int rank = 0;
    if (sv.size() > 0 && sv[0] > 0.0) {
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv[k] > kNullityThreshold * sv[0]) ++rank;
    }
    inv.nullity_dim = n - rank;
    return inv;
}

Mat shape_operator(const SFF& sff, const Vec& xi) {
    if (xi.size() != sff.codim()) throw PreconditionError("normal vector has the wrong dimension");
    if (std::abs(xi.norm() - 1.0) > 1e-10) throw PreconditionError("normal vector is not a unit vector");
    Mat A = Mat::Zero(sff.dim(), sff.dim());
    for (int a = 0; a < sff.codim(); ++a) A += xi[a] * sff.shape(a);
    return A;
}

}  // namespace subgeom
