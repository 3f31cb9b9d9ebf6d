#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace subgeom {

/// SplitMix64 finalizer; used to derive independent stream seeds from (seed, index).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

/// Seeded generator. Streams derived with derive_seed make per-sample draws
/// independent of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Eigen::VectorXd normal_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }
    Eigen::MatrixXd normal_matrix(int r, int c) {
        Eigen::MatrixXd m(r, c);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < r; ++i) m(i, j) = normal();
        return m;
    }
    Eigen::VectorXd unit_vector(int n) {
        Eigen::VectorXd v;
        do {
            v = normal_vector(n);
        } while (v.norm() < 1e-12);
        return v.normalized();
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs of
/// R's diagonal absorbed into Q.
inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
    const Eigen::MatrixXd g = rng.normal_matrix(n, n);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

/// Haar-random rotation (determinant +1).
inline Eigen::MatrixXd random_rotation(int n, Rng& rng) {
    Eigen::MatrixXd q = haar_orthogonal(n, rng);
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return q;
}

}  // namespace subgeom
