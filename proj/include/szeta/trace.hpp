// trace.hpp -- exact arithmetic of hyperbolic trace values.
//
// For an integer trace n >= 3 the unit eps(n) = (n + sqrt(n^2-4))/2 is the
// larger root of X^2 - n X + 1, so eps + 1/eps = n and N(gamma) = eps(n)^2
// for a primitive class of trace n.  Powers of units stay integral on the
// trace side: the Lucas-type sequence t_0 = 2, t_1 = n0, t_{k+1} = n0 t_k -
// t_{k-1} satisfies eps(t_k) = eps(n0)^k.  A trace is "core" when its unit
// is not a proper power of a smaller unit; the core traces have Q-linearly
// independent log eps and carry the equidistribution arguments downstream.
#ifndef SZETA_TRACE_HPP
#define SZETA_TRACE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "szeta/numeric.hpp"

namespace szeta {

// Integer trace of a hyperbolic element. n^2-4 is positive and never a
// perfect square for n >= 3, which the constructor asserts anyway.
class TraceValue {
  public:
    explicit TraceValue(std::int64_t n);
    std::int64_t value() const { return n_; }
    std::int64_t disc() const { return n_ * n_ - 4; }

  private:
    std::int64_t n_;
};

struct UnitValue {
    TraceValue n;
    double eps;
    double log_eps;
    double requested_precision;
    // populated when the requested precision exceeds double range
    bool has_big = false;
    BigFloat eps_big;
    BigFloat log_eps_big;
};

// eps(n) and log eps(n) with relative error <= precision, precision in
// (0, 1e-6]. Doubles cover requests down to ~1e-15; below that the 60-digit
// path fills the big fields as well.
UnitValue epsilon(TraceValue n, double precision = 1e-12);

// Delta(n) = 1/(1 - eps(n)^{-2}), strictly decreasing, in (1, 1.25].
double delta(TraceValue n);

// 60-digit evaluations used by the independence scans and test oracles.
BigFloat epsilon_big(std::int64_t n);
BigFloat log_epsilon_big(std::int64_t n);

// t_k with eps(t_k) = eps(n0)^k; exact, values grow like n0^k.
BigInt lucas_trace(TraceValue n0, std::int64_t k);

// Bounded variant for enumeration loops: nullopt once t_k > bound.
std::optional<std::int64_t> lucas_trace_leq(std::int64_t n0, std::int64_t k,
                                            std::int64_t bound);

// U_k in M^k = U_k M - U_{k-1} I for tr M = n0 (U_1 = 1, U_2 = n0); this is
// the content multiplier of the associated form of a k-th power.
std::int64_t lucas_u(std::int64_t n0, std::int64_t k, std::int64_t bound);

struct PowerRelation {
    std::int64_t n;   // non-core trace
    std::int64_t n0;  // core base
    std::int64_t k;   // exponent >= 2, lucas_trace(n0,k) = n
};

// Canonical decomposition over the smallest (hence core) base, or nullopt
// when n is core.
std::optional<PowerRelation> power_decomposition(TraceValue n);

// Every (n0, k>=2) with lucas_trace(n0,k) = n, n0 not restricted to core;
// this is what the multiplicity recursion sums over.
std::vector<std::pair<std::int64_t, std::int64_t>> power_routes(std::int64_t n);

struct CoreTraceIndex {
    std::int64_t bound = 0;
    std::vector<PowerRelation> non_core;  // sorted by n

    bool is_core(std::int64_t n) const;
    const PowerRelation* find(std::int64_t n) const;
};

CoreTraceIndex build_core_index(std::int64_t x);

// X(x) = sqrt(x) + 1/sqrt(x): eps(n)^2 < x iff n < X(x) for integer n.
double upper_cutoff(double x);

}  // namespace szeta

#endif
