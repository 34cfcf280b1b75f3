#ifndef ORLICZ_TEST_SEEDED_HPP
#define ORLICZ_TEST_SEEDED_HPP

#include <cmath>
#include <cstdint>

// splitmix64; small, seeded, reproducible everywhere
struct Seeded {
    std::uint64_t state;

    explicit Seeded(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin() { return (next() >> 63) != 0; }
};

#endif
