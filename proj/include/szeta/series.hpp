// series.hpp -- partial Dirichlet series over trace values and the
// evaluation of log Z and Z.
//
// The basic object is L(s; A) = sum over n in A of m(n) Delta(n) eps(n)^{-2s}
// with optional phase twists e(a_n).  Over the full trace set this equals
// -log Z(s) for Re s > 1 (branch fixed by log Z -> 0 as Re s -> infinity).
// In the strip 5/6 < Re s < 1 the smoothed sum
//   psi_s(x) = sum_{n < X(x)} m(n) Delta(n) (1 - eps(n)^2/x) eps(n)^{-2s}
// approximates -log Z(s + it) with an error budget of shape
// t^-2 x^{1-sigma} + t^{1.1} x^{0.6-sigma}.  Budgets are heuristic (unit
// constants, exponent eta = 0.1) and are reported, never asserted.
#ifndef SZETA_SERIES_HPP
#define SZETA_SERIES_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "szeta/class_numbers.hpp"
#include "szeta/group.hpp"
#include "szeta/trace.hpp"

namespace szeta {

struct ComplexPoint {
    double sigma = 0.0;
    double t = 0.0;
    std::complex<double> s() const { return {sigma, t}; }
};

enum class IndexBase { FullTraces, Core, NonCore, HatSet, CheckSet };

struct IndexSet {
    IndexBase base = IndexBase::FullTraces;
    double lo = 3.0;
    double hi = std::numeric_limits<double>::infinity();
    int j = 1;                            // 1-based, HatSet/CheckSet only
    std::vector<GroupDescriptor> groups;  // context for HatSet/CheckSet

    static IndexSet full();
    static IndexSet core(double lo = 3.0,
                         double hi = std::numeric_limits<double>::infinity());
    static IndexSet non_core(double lo = 3.0,
                             double hi = std::numeric_limits<double>::infinity());
    static IndexSet single(std::int64_t n);
};

struct SeriesResult {
    std::complex<double> value{0.0, 0.0};
    std::int64_t terms_used = 0;
    double tail_budget = 0.0;  // heuristic bound on the omitted mass
    double cutoff_x = 0.0;
    bool tolerance_met = true;
};

struct PhaseAssignment {
    std::map<std::int64_t, double> a;  // n -> a_n in [0,1)
    double of(std::int64_t n) const;
};

// A group together with its multiplicity table and core index; everything
// downstream evaluates against one of these.
struct ZetaContext {
    GroupDescriptor group;
    MultiplicityTable table;
    CoreTraceIndex core;

    std::int64_t coverage() const { return table.n_max; }
};

// Builds the table for the group (SL2Z or Gamma(N)); CustomTraceSet groups
// need an externally supplied table, see make_context_with_table.
ZetaContext make_context(const GroupDescriptor& group, std::int64_t n_max);
ZetaContext make_context_with_table(const GroupDescriptor& group, MultiplicityTable t);

// sum_{n in A} m(n) Delta(n) eps(n)^{-2s} e(a_n), compensated, ascending n.
SeriesResult partial_series(const ZetaContext& ctx, ComplexPoint s, const IndexSet& A,
                            const PhaseAssignment* phases = nullptr);

// -L(s; FullTraces) for sigma > 1, truncated so the tail heuristic falls
// below tol where the coverage allows it.
SeriesResult log_zeta_euler(const ZetaContext& ctx, ComplexPoint s, double tol = 1e-6);

// smoothed sum psi_s(x); exact finite sum, tail budget 0.
SeriesResult psi(const ZetaContext& ctx, ComplexPoint s, double x);

// -psi(s, x) in the strip 5/6 < sigma < 1, t >= 1; x = 0 selects the
// default max(1e6, t^3).
SeriesResult log_zeta_strip(const ZetaContext& ctx, ComplexPoint s, double x = 0.0);

// L(s; NonCore cap [lo, infinity)), sigma > 3/4.
SeriesResult complement_tail(const ZetaContext& ctx, ComplexPoint s, double lo);

// trapezoid estimate of (1/T) int_1^T |L(sigma+it; Core cap [Y,inf))|^2 dt
double mean_square(const ZetaContext& ctx, double sigma, double Y, double T,
                   double step, int threads = 1);

// (1/d) sqrt(l2_mass/pi)
double l2_to_sup_bound(double l2_mass, double d);

// heuristic tail budgets (exposed for tests and reports)
double tail_budget_full(double X, double sigma);
double tail_budget_noncore(double X, double sigma);
double strip_budget(double t, double x, double sigma);

}  // namespace szeta

#endif
