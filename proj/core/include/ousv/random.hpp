#pragma once

// Counter-based random streams.
//
// Every Gaussian draw is a pure function of (seed, stream tag, path index,
// draw index), so paths can be generated in any order, on any number of
// workers, and still reproduce bit-for-bit.

#include <array>
#include <cstdint>

namespace ousv {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type generate(counter_type counter, key_type key) noexcept;
};

/// Stream identifiers: independent driving noises of one path.
enum class StreamTag : std::uint32_t {
    OuDriver = 1,     // W (or Z when rho != 0)
    PriceDriver = 2,  // B
    Auxiliary = 3,    // Z for correlated / density simulations
};

/// Map a pair of 32-bit words to a double in the open interval (0, 1).
double uniform_open(std::uint32_t hi, std::uint32_t lo) noexcept;

/// Inverse standard normal CDF (Wichura AS241, ~1e-16 relative accuracy).
double inverse_normal_cdf(double p);

/// Gaussian draws for one (seed, tag, path) triple.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, StreamTag tag, std::uint64_t path_index,
                 bool mirrored = false) noexcept;

    double next();

    /// Number of normals consumed so far.
    std::uint64_t position() const noexcept { return position_; }

private:
    void refill();

    Philox4x32::key_type key_{};
    Philox4x32::counter_type counter_{};
    std::array<double, 2> buffer_{};
    std::uint64_t position_ = 0;
    std::uint32_t block_ = 0;
    double sign_ = 1.0;
};

}  // namespace ousv
