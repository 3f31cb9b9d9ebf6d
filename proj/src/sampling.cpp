#include "subgeom/sampling.hpp"

#include "subgeom/error.hpp"
#include "subgeom/rng.hpp"

namespace subgeom {

int default_per_dim(int n) {
    if (n < 1) throw ParameterError("grid dimension must be positive");
    int k = 1;
    while (k < 20) {
        double total = 1.0;
        for (int i = 0; i < n; ++i) total *= k + 1;
        if (total > 5000) break;
        ++k;
    }
    return k;
}

std::vector<Vec> sample_points(const ParameterDomain& domain, const GridSpec& spec) {
    if (spec.per_dim < 0 || spec.random < 0) throw ParameterError("grid sizes must be nonnegative");
    const int n = domain.dim();
    const int per_dim = spec.per_dim == 0 ? default_per_dim(n) : spec.per_dim;
    std::vector<Vec> pts = domain.grid(per_dim);
    Rng rng(spec.seed);
    for (int i = 0; i < spec.random; ++i) {
        Vec t(n);
        for (int k = 0; k < n; ++k) t[k] = rng.uniform();
        pts.push_back(domain.at_fraction(t));
    }
    return pts;
}

std::vector<SFF> evaluate_sff(const Chart& chart, const std::vector<Vec>& points, Exec exec) {
    std::vector<SFF> out(points.size());
    for_each_index(static_cast<int>(points.size()), exec,
                   [&](int i) { out[static_cast<std::size_t>(i)] = sff_at(chart, points[static_cast<std::size_t>(i)]); });
    return out;
}

std::vector<SFF> evaluate_sff(const JetFile& file, Exec exec) {
    std::vector<SFF> out(file.points.size());
    for_each_index(static_cast<int>(file.points.size()), exec, [&](int i) {
        const Jet2& jet = file.points[static_cast<std::size_t>(i)].jet;
        out[static_cast<std::size_t>(i)] = second_fundamental_form(file.ambient, frames_from_jet(file.ambient, jet), jet);
    });
    return out;
}

std::vector<Invariants> evaluate_invariants(const std::vector<SFF>& sffs, Exec exec) {
    std::vector<Invariants> out(sffs.size());
    for_each_index(static_cast<int>(sffs.size()), exec,
                   [&](int i) { out[static_cast<std::size_t>(i)] = invariants(sffs[static_cast<std::size_t>(i)]); });
    return out;
}

std::vector<pinching::PinchReport> evaluate_pinch(const std::vector<SFF>& sffs, int k, double tol, Exec exec) {
    std::vector<pinching::PinchReport> out(sffs.size());
    for_each_index(static_cast<int>(sffs.size()), exec, [&](int i) {
        out[static_cast<std::size_t>(i)] = pinching::pinch_check(sffs[static_cast<std::size_t>(i)], k, tol);
    });
    return out;
}

}  // namespace subgeom
