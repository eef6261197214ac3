#pragma once

#include <cmath>
#include <cstdint>

#include "switchlab/linalg.hpp"

namespace switchlab {

/// Counter-based generator: the value stream is a pure function of
/// (seed, stream, counter), so disjoint streams can be handed to workers and
/// the output never depends on thread scheduling. Mixing is the splitmix64
/// finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ull))), counter_(0) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1].
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }

    double next_gaussian() {
        // Box-Muller; one value per call keeps the stream position simple.
        double u1 = next_unit();
        double u2 = next_unit();
        while (u1 <= 1e-300) u1 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Uniform point in the Bloch ball.
inline Vec3 random_bloch_point(CounterRng& rng) {
    for (;;) {
        Vec3 a(rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric());
        if (a.squaredNorm() <= 1.0) return a;
    }
}

/// Probability 4-vector uniform on the simplex.
inline Vec4 random_simplex_point(CounterRng& rng) {
    Vec4 g;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        double u = rng.next_unit();
        while (u <= 1e-300) u = rng.next_unit();
        g[i] = -std::log(u);
        total += g[i];
    }
    return g / total;
}

/// Haar-random 2x2 unitary (QR of a complex Gaussian matrix, phases fixed).
inline Mat2 random_unitary(CounterRng& rng) {
    Mat2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = cd(rng.next_gaussian(), rng.next_gaussian());
    Eigen::HouseholderQR<Mat2> qr(g);
    Mat2 q = qr.householderQ();
    Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 2; ++j) {
        cd d = r(j, j);
        double mag = std::abs(d);
        if (mag > 0) q.col(j) *= d / mag;
    }
    return q;
}

/// Random pure 2x2 state projector.
inline Mat2 random_pure_state(CounterRng& rng) {
    Vec2c v(cd(rng.next_gaussian(), rng.next_gaussian()),
            cd(rng.next_gaussian(), rng.next_gaussian()));
    v.normalize();
    return v * v.adjoint();
}

/// Random mixed 2x2 state (uniform Bloch ball).
inline Mat2 random_mixed_state(CounterRng& rng) {
    Vec3 a = random_bloch_point(rng);
    Mat2 m = 0.5 * pauli(0);
    for (int k = 0; k < 3; ++k) m += 0.5 * a[k] * pauli(k + 1);
    return m;
}

}  // namespace switchlab
