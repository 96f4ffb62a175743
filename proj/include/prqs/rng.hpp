#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace prqs {

// splitmix64, used only to key per-trial generator states.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ with splittable per-stream seeding: stream(seed, index) is a
// pure function of its two arguments, so trials can be generated in any
// order, on any number of threads, with identical draws.
class Xoshiro256pp {
public:
    Xoshiro256pp() : s_{1, 2, 3, 4} {}

    static Xoshiro256pp from_seed(std::uint64_t seed) { return stream(seed, 0); }

    static Xoshiro256pp stream(std::uint64_t seed, std::uint64_t stream_index) {
        // Advance a splitmix sequence to the stream's slot, then draw the
        // four state words from there.
        SplitMix64 sm{seed + (stream_index + 1) * 0x9e3779b97f4a7c15ULL};
        Xoshiro256pp g;
        g.s_[0] = sm.next();
        g.s_[1] = sm.next();
        g.s_[2] = sm.next();
        g.s_[3] = sm.next();
        if ((g.s_[0] | g.s_[1] | g.s_[2] | g.s_[3]) == 0) g.s_[0] = 1;
        return g;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1), 53-bit mantissa
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]; safe as a log() argument
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Box-Muller pair of independent standard normals (consumes 2 words)
    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        z0 = rad * std::cos(ang);
        z1 = rad * std::sin(ang);
    }

    // circularly symmetric complex normal, mean 0, total variance 1
    std::complex<double> complex_normal() {
        double z0, z1;
        normal_pair(z0, z1);
        return {z0 * std::numbers::sqrt2 / 2.0, z1 * std::numbers::sqrt2 / 2.0};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace prqs
