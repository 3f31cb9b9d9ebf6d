#pragma once

// Curvature of the induced metric computed without the second fundamental form:
// Christoffel symbols from the exact first and second derivatives of the position map,
// and their parameter derivatives by central differences.

#include <vector>

#include "subgeom/immersion.hpp"

namespace subgeom {

/// Gamma^l_ij = g^{lm} <d_i d_j f, d_m f>; element l of the result holds (i, j).
std::vector<Mat> christoffel(const Chart& chart, const Vec& u);

/// Sectional curvature of span{d/du_i, d/du_j} of the induced metric. Christoffel
/// symbols from the exact jets, their derivatives by Richardson-extrapolated central
/// differences with step h(1+|u|).
double intrinsic_sectional(const Chart& chart, const Vec& u, int i, int j, double h = 1e-4);

/// Sectional curvature of the same coordinate plane from the Gauss equation.
double gauss_sectional(const Chart& chart, const Vec& u, int i, int j);

}  // namespace subgeom
