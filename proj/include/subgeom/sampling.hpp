#pragma once

// Sample points over a parameter domain and per-point evaluation kernels. Every kernel
// has a serial path and an OpenMP path over points; outputs are indexed by point, so
// both paths return identical results.

#include <cstdint>
#include <vector>

#include "subgeom/immersion.hpp"
#include "subgeom/jetfile.hpp"
#include "subgeom/parallel.hpp"
#include "subgeom/pinch.hpp"

namespace subgeom {

struct GridSpec {
    int per_dim = 0;        // 0: default_per_dim(n)
    int random = 100;       // uniform random points appended after the tensor grid
    std::uint64_t seed = 0;
};

/// Largest k <= 20 with k^n <= 5000, at least 1.
int default_per_dim(int n);

/// Tensor-grid points (row-major, cell centres) followed by seeded random points.
std::vector<Vec> sample_points(const ParameterDomain& domain, const GridSpec& spec);

std::vector<SFF> evaluate_sff(const Chart& chart, const std::vector<Vec>& points, Exec exec = Exec::Parallel);
std::vector<SFF> evaluate_sff(const JetFile& file, Exec exec = Exec::Parallel);

std::vector<Invariants> evaluate_invariants(const std::vector<SFF>& sffs, Exec exec = Exec::Parallel);

std::vector<pinching::PinchReport> evaluate_pinch(const std::vector<SFF>& sffs, int k, double tol,
                                                  Exec exec = Exec::Parallel);

}  // namespace subgeom
