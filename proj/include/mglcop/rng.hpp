#pragma once

#include <cstdint>
#include <random>

namespace mglcop {

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Uniform on the open interval (0,1), 53-bit resolution.
    double uniform();
    double normal();
    double gamma(double shape, double rate = 1.0);
    std::uint64_t next() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mglcop
