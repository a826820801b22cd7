#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace yardstick {

/// xoshiro256** (Blackman & Vigna) with its state expanded from a 64-bit
/// seed by splitmix64. Every variate below is derived from this stream with
/// fixed arithmetic, so a seed reproduces the same numbers on any platform
/// with IEEE doubles and a correctly rounded sqrt/log.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed);

    result_type operator()();
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

private:
    std::array<std::uint64_t, 4> s_{};
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1): top 53 bits times 2^-53.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Standard normal by the Marsaglia polar method; variates come in
    /// pairs and the second of each pair is returned on the next call.
    double normal();
    /// Student-t with `dof` > 2 degrees of freedom, rescaled to unit variance:
    /// Z / sqrt(chi2/dof) * sqrt((dof - 2)/dof), chi2 a sum of `dof` squared normals.
    double student_t_unit(int dof);
    /// Zero-mean Laplace with scale b: random sign times -b*ln(U).
    double laplace(double scale);

private:
    Xoshiro256 engine_;
    std::optional<double> spare_;
};

}  // namespace yardstick
