#pragma once

// Hand-built second fundamental forms shared by the unit tests.

#include <cmath>

#include "subgeom/immersion.hpp"
#include "subgeom/rng.hpp"

namespace fixtures {

using subgeom::Mat;
using subgeom::SFF;
using subgeom::Vec;

/// alpha_ij = delta_ij * eta.
inline SFF umbilical(int n, const Vec& eta, double c) {
    SFF s(n, static_cast<int>(eta.size()), c);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s(i, j) = i == j ? eta : Vec(Vec::Zero(eta.size()));
    return s;
}

/// Hypersurface point with principal curvatures `lam` (first k directions) and `mu`.
inline SFF two_curvatures(int n, int k, double lam, double mu, double c) {
    SFF s(n, 1, c);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s(i, j)[0] = i == j ? (i < k ? lam : mu) : 0.0;
    return s;
}

/// Point of S^k(r) x S^{n-k}(sqrt(1-r^2)) in the unit sphere.
inline SFF torus_point(int n, int k, double r) {
    const double lam = std::sqrt(1 - r * r) / r, mu = -r / std::sqrt(1 - r * r);
    return two_curvatures(n, k, lam, mu, 1.0);
}

/// Point of S^k(r1) x S^k(r2) in R^{2k+2}: two orthogonal principal normals.
inline SFF sphere_product_point(int k, double r1, double r2) {
    SFF s(2 * k, 2, 0.0);
    for (int i = 0; i < 2 * k; ++i)
        for (int j = i; j < 2 * k; ++j) {
            Vec v = Vec::Zero(2);
            if (i == j) v[i < k ? 0 : 1] = i < k ? 1 / r1 : 1 / r2;
            s(i, j) = v;
        }
    return s;
}

/// Same tensor in frames Q (tangent) and P (normal), both Haar random.
inline SFF random_conjugate(const SFF& s, subgeom::Rng& rng) {
    return s.transformed(subgeom::haar_orthogonal(s.dim(), rng), subgeom::haar_orthogonal(s.codim(), rng));
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace fixtures
