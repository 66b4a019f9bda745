// numeric.hpp -- shared numeric plumbing: extended precision types, exact
// rationals, compensated summation and a deterministic parallel loop.
#ifndef SZETA_NUMERIC_HPP
#define SZETA_NUMERIC_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace szeta {

using BigInt = boost::multiprecision::cpp_int;

// 60 decimal digits; used by the Diophantine scans and high-precision oracles.
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Bad arguments (CLI exit code 2).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Request exceeds tabulated coverage (CLI exit code 3).
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier variant of Kahan summation. Terms are always fed in increasing n,
// so results are reproducible to the last bit for a fixed term order.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct ComplexSum {
    CompensatedSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// Runs fn(i) for i in [0, count) split into contiguous chunks across threads.
// Each index writes only its own slot, so the result does not depend on the
// thread count; reductions happen sequentially afterwards.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn);

// Shortest round-trip decimal formatting, used by every serializer so that
// byte-identical output is a matter of summation order only.
std::string fmt_double(double x);

}  // namespace szeta

#endif
