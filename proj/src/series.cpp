#include "szeta/series.hpp"

#include <algorithm>
#include <cmath>

#include "szeta/congruence.hpp"

namespace szeta {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool in_base(const ZetaContext& ctx, const IndexSet& A, std::int64_t n,
             const std::vector<TraceSetDescriptor>& hats,
             const std::vector<TraceSetDescriptor>& checks) {
    switch (A.base) {
        case IndexBase::FullTraces: return true;
        case IndexBase::Core: return ctx.core.is_core(n);
        case IndexBase::NonCore: return !ctx.core.is_core(n);
        case IndexBase::HatSet:
            return ctx.core.is_core(n) && hats[A.j - 1].contains(n);
        case IndexBase::CheckSet:
            return ctx.core.is_core(n) && checks[A.j - 1].contains(n);
    }
    return false;
}

}  // namespace

IndexSet IndexSet::full() { return IndexSet{}; }

IndexSet IndexSet::core(double lo, double hi) {
    return IndexSet{IndexBase::Core, lo, hi, 1, {}};
}

IndexSet IndexSet::non_core(double lo, double hi) {
    return IndexSet{IndexBase::NonCore, lo, hi, 1, {}};
}

IndexSet IndexSet::single(std::int64_t n) {
    return IndexSet{IndexBase::FullTraces, static_cast<double>(n),
                    static_cast<double>(n) + 0.5, 1, {}};
}

double PhaseAssignment::of(std::int64_t n) const {
    auto it = a.find(n);
    return it == a.end() ? 0.0 : it->second;
}

ZetaContext make_context(const GroupDescriptor& group, std::int64_t n_max) {
    switch (group.kind) {
        case GroupDescriptor::Kind::ModularGroup:
            return make_context_with_table(group, multiplicity_table_sl2z(n_max));
        case GroupDescriptor::Kind::PrincipalCongruence:
            return make_context_with_table(group,
                                           multiplicity_table_congruence(group.N, n_max));
        case GroupDescriptor::Kind::CustomTraceSet:
            throw ValidationError(
                "custom trace-set groups need an externally supplied multiplicity table");
    }
    throw std::logic_error("bad group kind");
}

ZetaContext make_context_with_table(const GroupDescriptor& group, MultiplicityTable t) {
    ZetaContext ctx;
    ctx.group = group;
    ctx.core = build_core_index(std::max<std::int64_t>(t.n_max, 3));
    ctx.table = std::move(t);
    return ctx;
}

SeriesResult partial_series(const ZetaContext& ctx, ComplexPoint s, const IndexSet& A,
                            const PhaseAssignment* phases) {
    if (!(s.sigma > 0.5))
        throw ValidationError("partial series requires sigma > 1/2");
    if (A.j < 1 || ((A.base == IndexBase::HatSet || A.base == IndexBase::CheckSet) &&
                    static_cast<std::size_t>(A.j) > A.groups.size()))
        throw ValidationError("hat/check index out of range");
    std::vector<TraceSetDescriptor> hats, checks;
    if (A.base == IndexBase::HatSet || A.base == IndexBase::CheckSet) {
        hats = hat_sets(A.groups);
        for (std::size_t j = 0; j < A.groups.size(); ++j)
            checks.push_back(trace_set(A.groups[j]).difference(hats[j]));
    }
    if (phases) {
        for (const auto& [n, a] : phases->a) {
            if (!(a >= 0.0 && a < 1.0))
                throw ValidationError("phases must lie in [0,1)");
            if (static_cast<double>(n) < A.lo || static_cast<double>(n) >= A.hi)
                throw ValidationError("phase assigned outside the index set");
        }
    }
    double hi = A.hi;
    if (std::isfinite(A.hi)) {
        if (A.hi > static_cast<double>(ctx.coverage()) + 1.0)
            throw CoverageError("index set extends beyond table coverage");
    } else {
        hi = static_cast<double>(ctx.coverage()) + 1.0;  // tail-bounded set
    }
    ComplexSum acc;
    std::int64_t terms = 0;
    std::int64_t lo = std::max<std::int64_t>(3, static_cast<std::int64_t>(std::ceil(A.lo)));
    for (std::int64_t n = lo; static_cast<double>(n) < hi && n <= ctx.coverage(); ++n) {
        if (!in_base(ctx, A, n, hats, checks)) continue;
        Rational mr = ctx.table.m[n];
        if (mr.numerator() == 0) continue;
        TraceValue tv(n);
        double le = epsilon(tv).log_eps;
        double coeff = to_double(mr) * delta(tv);
        std::complex<double> term =
            coeff * std::exp(std::complex<double>(-2.0 * s.sigma * le, -2.0 * s.t * le));
        if (phases) {
            double a = phases->of(n);
            if (a != 0.0)
                term *= std::exp(std::complex<double>(0.0, 2.0 * kPi * a));
        }
        acc.add(term);
        ++terms;
    }
    SeriesResult r;
    r.value = acc.value();
    r.terms_used = terms;
    r.cutoff_x = std::isfinite(A.hi) ? A.hi : static_cast<double>(ctx.coverage()) + 1.0;
    r.tail_budget = 0.0;
    return r;
}

// integral comparison for sum_{n >= X} n^{1.2} eps(n)^{-2 sigma}; diverges
// for 2 sigma <= 2.2 and the budget is then reported as infinite.
double tail_budget_full(double X, double sigma) {
    double e = 2.0 * sigma - 2.2;
    if (e <= 1e-12) return std::numeric_limits<double>::infinity();
    return std::pow(X, -e) / e;
}

// same with the non-core counting density 3 x^{0.6} folded in
double tail_budget_noncore(double X, double sigma) {
    double e = 2.0 * sigma - 1.8;
    if (e <= 1e-12) return std::numeric_limits<double>::infinity();
    return 1.8 * std::pow(X, -e) / e;
}

double strip_budget(double t, double x, double sigma) {
    return std::pow(t, -2.0) * std::pow(x, 1.0 - sigma) +
           std::pow(t, 1.1) * std::pow(x, 0.6 - sigma);
}

SeriesResult log_zeta_euler(const ZetaContext& ctx, ComplexPoint s, double tol) {
    if (!(s.sigma > 1.0)) throw ValidationError("log_zeta_euler requires sigma > 1");
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    // smallest cutoff X with tail budget below tol, clipped at coverage
    std::int64_t cutoff = ctx.coverage() + 1;
    bool met = false;
    for (std::int64_t X = 8; X <= ctx.coverage() + 1; X *= 2) {
        if (tail_budget_full(static_cast<double>(X), s.sigma) < tol) {
            cutoff = X;
            met = true;
            break;
        }
    }
    // refine the power-of-two bracket downward
    if (met) {
        std::int64_t lo = cutoff / 2, hi = cutoff;
        while (lo + 1 < hi) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (tail_budget_full(static_cast<double>(mid), s.sigma) < tol)
                hi = mid;
            else
                lo = mid;
        }
        cutoff = std::max<std::int64_t>(hi, 8);
    }
    IndexSet A = IndexSet::full();
    A.hi = static_cast<double>(cutoff);
    SeriesResult r = partial_series(ctx, s, A);
    r.value = -r.value;
    r.cutoff_x = static_cast<double>(cutoff);
    r.tail_budget = tail_budget_full(static_cast<double>(cutoff), s.sigma);
    r.tolerance_met = r.tail_budget < tol;
    return r;
}

SeriesResult psi(const ZetaContext& ctx, ComplexPoint s, double x) {
    if (!(x > 0.0)) throw ValidationError("psi requires x > 0");
    double X = upper_cutoff(x);
    if (X > static_cast<double>(ctx.coverage()) + 1.0)
        throw CoverageError("psi cutoff beyond table coverage");
    ComplexSum acc;
    std::int64_t terms = 0;
    for (std::int64_t n = 3; static_cast<double>(n) < X; ++n) {
        Rational mr = ctx.table.m[n];
        if (mr.numerator() == 0) continue;
        TraceValue tv(n);
        UnitValue u = epsilon(tv);
        double w = 1.0 - u.eps * u.eps / x;
        double coeff = to_double(mr) * delta(tv) * w;
        acc.add(coeff * std::exp(std::complex<double>(-2.0 * s.sigma * u.log_eps,
                                                      -2.0 * s.t * u.log_eps)));
        ++terms;
    }
    SeriesResult r;
    r.value = acc.value();
    r.terms_used = terms;
    r.cutoff_x = x;
    r.tail_budget = 0.0;  // complete sum
    return r;
}

SeriesResult log_zeta_strip(const ZetaContext& ctx, ComplexPoint s, double x) {
    if (!(s.sigma > 5.0 / 6.0 && s.sigma < 1.0))
        throw ValidationError("log_zeta_strip requires 5/6 < sigma < 1");
    if (!(s.t >= 1.0)) throw ValidationError("log_zeta_strip requires t >= 1");
    if (x == 0.0) x = std::max(1e6, s.t * s.t * s.t);
    SeriesResult r = psi(ctx, s, x);
    r.value = -r.value;
    r.tail_budget = strip_budget(s.t, x, s.sigma);
    return r;
}

SeriesResult complement_tail(const ZetaContext& ctx, ComplexPoint s, double lo) {
    if (!(s.sigma > 0.75))
        throw ValidationError("complement tail requires sigma > 3/4");
    IndexSet A = IndexSet::non_core(std::max(3.0, lo));
    SeriesResult r = partial_series(ctx, s, A);
    r.tail_budget =
        tail_budget_noncore(static_cast<double>(ctx.coverage()) + 1.0, s.sigma);
    return r;
}

double mean_square(const ZetaContext& ctx, double sigma, double Y, double T,
                   double step, int threads) {
    if (!(sigma > 0.5 && sigma < 1.0))
        throw ValidationError("mean_square requires 1/2 < sigma < 1");
    if (!(Y > 0.0 && Y < std::pow(T, 1.5)))
        throw ValidationError("mean_square requires 0 < Y < T^{3/2}");
    if (!(T > 1.0)) throw ValidationError("mean_square requires T > 1");
    std::int64_t cut = ctx.coverage();
    double log_eps_cut = epsilon(TraceValue(std::max<std::int64_t>(cut, 3))).log_eps;
    if (!(step > 0.0) || step > kPi / (2.0 * log_eps_cut))
        throw ValidationError("mean_square step too coarse for the cutoff");
    // precompute coefficients of the core series on [Y, coverage]
    std::vector<double> coeff, tlog;
    for (std::int64_t n = std::max<std::int64_t>(3, static_cast<std::int64_t>(std::ceil(Y)));
         n <= cut; ++n) {
        if (!ctx.core.is_core(n)) continue;
        Rational mr = ctx.table.m[n];
        if (mr.numerator() == 0) continue;
        TraceValue tv(n);
        UnitValue u = epsilon(tv);
        coeff.push_back(to_double(mr) * delta(tv) * std::exp(-2.0 * sigma * u.log_eps));
        tlog.push_back(2.0 * u.log_eps);
    }
    if (coeff.empty()) return 0.0;
    std::int64_t K = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((T - 1.0) / step)));
    double h = (T - 1.0) / static_cast<double>(K);
    std::vector<double> sq(K + 1);
    parallel_for(K + 1, threads, [&](std::int64_t k) {
        double t = 1.0 + h * static_cast<double>(k);
        CompensatedSum re, im;
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            re.add(coeff[i] * std::cos(tlog[i] * t));
            im.add(-coeff[i] * std::sin(tlog[i] * t));
        }
        double a = re.value(), b = im.value();
        sq[k] = a * a + b * b;
    });
    CompensatedSum integral;
    integral.add(0.5 * sq[0]);
    for (std::int64_t k = 1; k < K; ++k) integral.add(sq[k]);
    integral.add(0.5 * sq[K]);
    return integral.value() * h / T;
}

double l2_to_sup_bound(double l2_mass, double d) {
    if (l2_mass < 0.0) throw ValidationError("l2 mass must be nonnegative");
    if (!(d > 0.0)) throw ValidationError("distance d must be positive");
    return std::sqrt(l2_mass / kPi) / d;
}

}  // namespace szeta
