#pragma once

#include <cstdint>
#include <random>

namespace hhsv {

/// Distinct purposes get statistically independent substreams of the same path.
enum class StreamPurpose : std::uint64_t {
    hawkes = 1,
    variance = 2,
    stock = 3,
    q_hawkes = 4,
    q_variance = 5,
    q_stock = 6,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for (master seed, path index, purpose); a pure function of its arguments.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                             StreamPurpose purpose);

/// Engine plus the distributions the simulators draw from.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master_seed, std::uint64_t path_index, StreamPurpose purpose)
        : engine_(substream_seed(master_seed, path_index, purpose)) {}

    double uniform();
    double gaussian();
    double exponential(double rate);
    double gamma(double shape, double rate);
    double chi_squared(double dof);
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hhsv
