#include "subgeom/intrinsic.hpp"

#include <cmath>

#include "subgeom/curvature.hpp"

namespace subgeom {

std::vector<Mat> christoffel(const Chart& chart, const Vec& u) {
    const Jet2 j = chart.jet(u);
    const int n = chart.dim();
    const Mat g = j.d1.transpose() * j.d1;
    const Mat ginv = g.inverse();
    // first-kind symbols <d_i d_j f, d_m f>
    Mat first(pair_count(n), n);
    for (int p = 0; p < pair_count(n); ++p) first.row(p) = j.d2.col(p).transpose() * j.d1;
    std::vector<Mat> gamma(static_cast<std::size_t>(n), Mat(n, n));
    for (int l = 0; l < n; ++l)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) gamma[static_cast<std::size_t>(l)](a, b) = first.row(pair_index(a, b, n)).dot(ginv.row(l));
    return gamma;
}

double intrinsic_sectional(const Chart& chart, const Vec& u, int i, int j, double h) {
    const int n = chart.dim();
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw PreconditionError("need two distinct coordinate directions");
    auto central = [&](int dir, double step) {
        Vec up = u, dn = u;
        up[dir] += step;
        dn[dir] -= step;
        const std::vector<Mat> gp = christoffel(chart, up), gm = christoffel(chart, dn);
        std::vector<Mat> d(static_cast<std::size_t>(n));
        for (std::size_t l = 0; l < d.size(); ++l) d[l] = (gp[l] - gm[l]) / (2 * step);
        return d;
    };
    // one Richardson level: near chart poles the plain central difference is too coarse
    auto derivative = [&](int dir) {
        const double step = h * (1 + std::abs(u[dir]));
        std::vector<Mat> coarse = central(dir, step);
        const std::vector<Mat> fine = central(dir, step / 2);
        for (std::size_t l = 0; l < coarse.size(); ++l) coarse[l] = (4 * fine[l] - coarse[l]) / 3;
        return coarse;
    };
    const std::vector<Mat> G = christoffel(chart, u);
    const std::vector<Mat> dGi = derivative(i), dGj = derivative(j);
    const Jet2 jet = chart.jet(u);
    const Mat g = jet.d1.transpose() * jet.d1;

    // R(d_i, d_j) d_j = R^l d_l
    Vec Rl(n);
    for (int l = 0; l < n; ++l) {
        const auto L = static_cast<std::size_t>(l);
        double v = dGi[L](j, j) - dGj[L](i, j);
        for (int m = 0; m < n; ++m) {
            const auto M = static_cast<std::size_t>(m);
            v += G[M](j, j) * G[L](i, m) - G[M](i, j) * G[L](j, m);
        }
        Rl[l] = v;
    }
    return Rl.dot(g.col(i)) / (g(i, i) * g(j, j) - g(i, j) * g(i, j));
}

double gauss_sectional(const Chart& chart, const Vec& u, int i, int j) {
    const Jet2 jet = chart.jet(u);
    const FramedPoint fp = frames_from_jet(chart.ambient(), jet);
    const SFF s = second_fundamental_form(chart.ambient(), fp, jet);
    const Mat coord = fp.coords.inverse();
    return curvature::gauss_curvature(s).sectional(coord.col(i), coord.col(j));
}

}  // namespace subgeom
