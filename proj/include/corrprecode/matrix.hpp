// SPDX-License-Identifier: Apache-2.0
//
// corrprecode: statistics-adapted limited-feedback precoding for correlated MIMO channels
// Copyright (C) 2026 The corrprecode authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CORRPRECODE_MATRIX_HPP
#define CORRPRECODE_MATRIX_HPP

// Core numeric carriers, error types and the seeded random source.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace corrprecode
{

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy. Everything derives from a std exception so callers can
// catch broadly or narrowly.
struct invalid_input : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct empty_null_space : invalid_input
{
    using invalid_input::invalid_input;
};

struct invalid_statistics : invalid_input
{
    using invalid_input::invalid_input;
};

struct degenerate_statistics : std::domain_error
{
    using std::domain_error::domain_error;
};

struct infeasible_plan : std::domain_error
{
    using std::domain_error::domain_error;
};

inline void require(bool condition, const std::string &message)
{
    if (!condition)
        throw invalid_input(message);
}

inline bool all_finite(const ComplexMatrix &a)
{
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                return false;
    return true;
}

inline bool all_finite(const RealMatrix &a)
{
    return a.allFinite();
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Hash a base seed together with a path of indices (e.g. snr index, trial index).
/// The result depends only on the arguments, never on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = splitmix64(base);
    for (auto p : path)
        h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return h;
}

/// Deterministic random source: a 64-bit Mersenne Twister (bit-exact across
/// standard libraries) with hand-rolled uniform and Box-Muller Gaussian
/// transforms so that draws do not depend on the std distribution
/// implementations. Single owner; copy it to fork a stream.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open()
    {
        double u = 0.0;
        while (u == 0.0)
            u = uniform();
        return u;
    }

    /// Standard real normal.
    double gaussian()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_gaussian(double variance = 1.0)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace corrprecode

#endif
