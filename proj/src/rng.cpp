#include "hhsv/rng.hpp"

namespace hhsv {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                             StreamPurpose purpose) {
    std::uint64_t state = master_seed;
    std::uint64_t h = splitmix64(state);
    state = h ^ path_index;
    h = splitmix64(state);
    state = h ^ static_cast<std::uint64_t>(purpose);
    return splitmix64(state);
}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::gaussian() { return normal_(engine_); }

double RngStream::exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
}

double RngStream::gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
}

double RngStream::chi_squared(double dof) {
    return std::chi_squared_distribution<double>(dof)(engine_);
}

std::uint64_t RngStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

}  // namespace hhsv
