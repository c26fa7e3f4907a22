#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cfris {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kLn2 = 0.69314718055994530942;

// dB / dBm appear only at config-file and report boundaries; everything
// internal runs in linear watts and linear gains.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic substream derivation. Every randomized quantity (user drop,
// each fading link, initial RIS phases, each sweep trial) gets its own seed
// derived from the master seed, so regenerating any one piece in isolation
// reproduces it bit-exactly.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return detail::mix64(base ^ detail::mix64(tag));
}
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(derive_seed(base, a), b), c);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return unif_(eng_); }
    double normal() { return norm_(eng_); }

    // circularly-symmetric complex Gaussian, unit variance
    cplx cnormal() {
        const double re = norm_(eng_);
        const double im = norm_(eng_);
        return cplx(re * kInvSqrt2, im * kInvSqrt2);
    }

  private:
    static constexpr double kInvSqrt2 = 0.70710678118654752440;
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace cfris
