#include "szeta/universality.hpp"

#include <algorithm>
#include <cmath>

#include "szeta/congruence.hpp"

namespace szeta {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGolden = 1.6180339887498948482;

double frac(double x) { return x - std::floor(x); }

double circle_dist(double x) {
    double f = frac(x);
    return std::min(f, 1.0 - f);
}

}  // namespace

void validate_problem(const PhaseTargetProblem& p) {
    if (p.traces.empty()) throw ValidationError("Lambda_1 must be nonempty");
    if (p.traces.size() != p.theta.size())
        throw ValidationError("trace/theta size mismatch");
    if (!(p.delta > 0.0 && p.delta < 0.5))
        throw ValidationError("delta must lie in (0, 1/2)");
    std::int64_t mx = *std::max_element(p.traces.begin(), p.traces.end());
    CoreTraceIndex idx = build_core_index(std::max<std::int64_t>(mx, 3));
    for (std::size_t i = 0; i < p.traces.size(); ++i) {
        TraceValue tv(p.traces[i]);
        if (!idx.is_core(tv.value()))
            throw ValidationError("trace " + std::to_string(tv.value()) + " is not core");
        if (!(p.theta[i] >= 0.0 && p.theta[i] < 1.0))
            throw ValidationError("phase targets must lie in [0,1)");
    }
    for (std::size_t i = 0; i < p.traces.size(); ++i)
        for (std::size_t j = i + 1; j < p.traces.size(); ++j)
            if (p.traces[i] == p.traces[j])
                throw ValidationError("duplicate trace in Lambda_1");
}

void validate_region(const CompactRegion& r) {
    if (!(r.sigma_lo > 5.0 / 6.0 && r.sigma_hi < 1.0 && r.sigma_lo <= r.sigma_hi))
        throw ValidationError("region must sit inside {5/6 < Re s < 1}");
    if (!(r.t_lo <= r.t_hi)) throw ValidationError("empty height range");
    if (r.rows < 5 || r.cols < 5) throw ValidationError("grid must be at least 5x5");
}

std::vector<ComplexPoint> CompactRegion::grid_points() const {
    std::vector<ComplexPoint> pts;
    pts.reserve(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i) {
        double t = rows == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (rows - 1);
        for (int j = 0; j < cols; ++j) {
            double sg = cols == 1 ? sigma_lo : sigma_lo + (sigma_hi - sigma_lo) * j / (cols - 1);
            pts.push_back(ComplexPoint{sg, t});
        }
    }
    return pts;
}

TargetFunction TargetFunction::constant(std::complex<double> c) {
    if (c == std::complex<double>(0.0, 0.0))
        throw ValidationError("constant target must be nonzero");
    TargetFunction f;
    f.kind_ = Kind::Constant;
    f.c_ = c;
    return f;
}

TargetFunction TargetFunction::exp_polynomial(std::vector<std::complex<double>> coeffs) {
    TargetFunction f;
    f.kind_ = Kind::ExpPolynomial;
    f.coeffs_ = std::move(coeffs);
    return f;
}

TargetFunction TargetFunction::grid_samples(std::vector<std::complex<double>> values) {
    for (const auto& v : values)
        if (v == std::complex<double>(0.0, 0.0))
            throw ValidationError("grid samples must be nonvanishing");
    TargetFunction f;
    f.kind_ = Kind::GridSamples;
    f.values_ = std::move(values);
    return f;
}

std::vector<std::complex<double>> TargetFunction::log_on_grid(const CompactRegion& r) const {
    std::size_t count = static_cast<std::size_t>(r.rows) * r.cols;
    std::vector<std::complex<double>> out(count);
    switch (kind_) {
        case Kind::Constant: {
            std::fill(out.begin(), out.end(), std::log(c_));
            return out;
        }
        case Kind::ExpPolynomial: {
            auto pts = r.grid_points();
            for (std::size_t i = 0; i < count; ++i) {
                std::complex<double> s = pts[i].s(), acc = 0.0, pw = 1.0;
                for (const auto& c : coeffs_) {
                    acc += c * pw;
                    pw *= s;
                }
                out[i] = acc;
            }
            return out;
        }
        case Kind::GridSamples: {
            if (values_.size() != count)
                throw ValidationError("grid sample count does not match region grid");
            // continue the branch from the first point: adjust each raw log
            // by the multiple of 2 pi i closest to its already-fixed neighbor
            auto continue_from = [](std::complex<double> raw, std::complex<double> prev) {
                double k = std::round((prev.imag() - raw.imag()) / (2.0 * kPi));
                return raw + std::complex<double>(0.0, 2.0 * kPi * k);
            };
            out[0] = std::log(values_[0]);
            for (int j = 1; j < r.cols; ++j)
                out[j] = continue_from(std::log(values_[j]), out[j - 1]);
            for (int i = 1; i < r.rows; ++i)
                for (int j = 0; j < r.cols; ++j) {
                    std::size_t k = static_cast<std::size_t>(i) * r.cols + j;
                    std::complex<double> prev =
                        j == 0 ? out[k - r.cols] : out[k - 1];
                    out[k] = continue_from(std::log(values_[k]), prev);
                }
            return out;
        }
    }
    throw std::logic_error("bad target kind");
}

double default_tau_step(double max_log_eps, bool irrational) {
    double s = kPi / (8.0 * max_log_eps);
    return irrational ? s / kGolden : s;
}

namespace {

struct PhaseScan {
    std::vector<double> omega;  // log eps(n)/pi
    std::vector<double> theta;
    double delta;

    bool member(double tau) const {
        for (std::size_t i = 0; i < omega.size(); ++i)
            if (circle_dist(tau * omega[i] - theta[i]) >= delta) return false;
        return true;
    }
};

PhaseScan make_scan(const PhaseTargetProblem& p) {
    validate_problem(p);
    PhaseScan s;
    for (std::size_t i = 0; i < p.traces.size(); ++i) {
        s.omega.push_back(epsilon(TraceValue(p.traces[i])).log_eps / kPi);
        s.theta.push_back(p.theta[i]);
    }
    s.delta = p.delta;
    return s;
}

void validate_sampling(const PhaseTargetProblem& p, double T, double step) {
    double max_log = 0.0;
    for (auto n : p.traces)
        max_log = std::max(max_log, epsilon(TraceValue(n)).log_eps);
    if (!(step > 0.0) || step > kPi / (8.0 * max_log) + 1e-15)
        throw ValidationError("step must satisfy step <= pi/(8 max log eps)");
    if (!(T >= 1e3 * step)) throw ValidationError("T must be at least 1000 steps");
}

}  // namespace

double shift_set_density(const PhaseTargetProblem& p, double T, double step,
                         int threads) {
    validate_sampling(p, T, step);
    PhaseScan scan = make_scan(p);
    std::int64_t K = static_cast<std::int64_t>(std::floor(T / step));
    // integer per-chunk counts: reduction order cannot matter
    int nchunks = std::max(1, threads * 8);
    std::vector<std::int64_t> counts(nchunks, 0);
    std::int64_t chunk = (K + 1 + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](std::int64_t c) {
        std::int64_t lo = c * chunk, hi = std::min<std::int64_t>(K + 1, lo + chunk);
        std::int64_t cnt = 0;
        for (std::int64_t k = lo; k < hi; ++k)
            if (scan.member(static_cast<double>(k) * step)) ++cnt;
        counts[c] = cnt;
    });
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    return static_cast<double>(total) / static_cast<double>(K + 1);
}

std::optional<double> find_shift(const PhaseTargetProblem& p, double T, double step) {
    validate_sampling(p, T, step);
    PhaseScan scan = make_scan(p);
    std::int64_t K = static_cast<std::int64_t>(std::floor(T / step));
    for (std::int64_t k = 0; k <= K; ++k) {
        double tau = static_cast<double>(k) * step;
        if (!scan.member(tau)) continue;
        if (k == 0) return 0.0;
        // bisect the entry boundary, keeping the upper end inside the set
        double lo = tau - step, hi = tau;
        while (hi - lo > step / 100.0) {
            double mid = 0.5 * (lo + hi);
            if (scan.member(mid))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }
    return std::nullopt;
}

namespace {

// Shared-phase evaluator: coefficients of -psi per grid point are fixed,
// a shift tau only rotates each trace term by exp(-2 i tau log eps(n)).
struct GridEvaluator {
    std::vector<double> two_log_eps;                       // per trace term
    std::vector<std::vector<std::complex<double>>> coeff;  // [point][term]
    std::vector<std::complex<double>> log_f;               // per point
    std::vector<double> abs_f;

    std::size_t points() const { return coeff.size(); }

    double sup_error_at(double tau) const {
        std::size_t terms = two_log_eps.size();
        std::vector<std::complex<double>> phase(terms);
        for (std::size_t i = 0; i < terms; ++i) {
            double a = -two_log_eps[i] * tau;
            phase[i] = {std::cos(a), std::sin(a)};
        }
        double worst = 0.0;
        for (std::size_t pnt = 0; pnt < coeff.size(); ++pnt) {
            ComplexSum acc;
            const auto& row = coeff[pnt];
            for (std::size_t i = 0; i < terms; ++i) acc.add(row[i] * phase[i]);
            std::complex<double> log_z = -acc.value();
            double err = abs_f[pnt] * std::abs(std::exp(log_z - log_f[pnt]) -
                                               std::complex<double>(1.0, 0.0));
            worst = std::max(worst, err);
        }
        return worst;
    }
};

GridEvaluator make_evaluator(const ZetaContext& ctx, const CompactRegion& region,
                             const TargetFunction& target, double x) {
    validate_region(region);
    double X = upper_cutoff(x);
    if (X > static_cast<double>(ctx.coverage()) + 1.0)
        throw CoverageError("scan cutoff beyond table coverage");
    GridEvaluator ev;
    std::vector<double> base_coeff;
    for (std::int64_t n = 3; static_cast<double>(n) < X; ++n) {
        Rational mr = ctx.table.m[n];
        if (mr.numerator() == 0) continue;
        TraceValue tv(n);
        UnitValue u = epsilon(tv);
        base_coeff.push_back(to_double(mr) * delta(tv) * (1.0 - u.eps * u.eps / x));
        ev.two_log_eps.push_back(2.0 * u.log_eps);
    }
    auto pts = region.grid_points();
    ev.coeff.resize(pts.size());
    for (std::size_t pnt = 0; pnt < pts.size(); ++pnt) {
        if (!(pts[pnt].t >= 1.0))
            throw ValidationError("grid heights must satisfy t >= 1");
        ev.coeff[pnt].resize(base_coeff.size());
        for (std::size_t i = 0; i < base_coeff.size(); ++i) {
            double le = 0.5 * ev.two_log_eps[i];
            ev.coeff[pnt][i] =
                base_coeff[i] * std::exp(std::complex<double>(-2.0 * pts[pnt].sigma * le,
                                                              -2.0 * pts[pnt].t * le));
        }
    }
    ev.log_f = target.log_on_grid(region);
    for (const auto& lf : ev.log_f) ev.abs_f.push_back(std::exp(lf.real()));
    return ev;
}

double scan_step(const ZetaContext& ctx, double step, double x) {
    if (step > 0.0) return step;
    double X = upper_cutoff(x);
    std::int64_t n_cut =
        std::min<std::int64_t>(ctx.coverage(), static_cast<std::int64_t>(std::ceil(X)) - 1);
    return default_tau_step(epsilon(TraceValue(std::max<std::int64_t>(n_cut, 3))).log_eps,
                            /*irrational=*/false);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  int iters, double* arg) {
    double inv = 1.0 / kGolden;
    double x1 = b - (b - a) * inv, x2 = a + (b - a) * inv;
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv;
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv;
            f2 = f(x2);
        }
    }
    if (f1 < f2) {
        *arg = x1;
        return f1;
    }
    *arg = x2;
    return f2;
}

ShiftSearchResult run_scan(const std::vector<GridEvaluator>& evs, double T_max,
                           double step, int threads,
                           std::vector<std::pair<double, double>>* samples_out) {
    std::int64_t K = static_cast<std::int64_t>(std::floor(T_max / step));
    std::vector<double> err(K + 1);
    parallel_for(K + 1, threads, [&](std::int64_t k) {
        double tau = static_cast<double>(k) * step;
        double worst = 0.0;
        for (const auto& ev : evs) worst = std::max(worst, ev.sup_error_at(tau));
        err[k] = worst;
    });
    ShiftSearchResult res;
    res.samples_evaluated = K + 1;
    if (samples_out) {
        samples_out->clear();
        for (std::int64_t k = 0; k <= K; ++k)
            samples_out->emplace_back(static_cast<double>(k) * step, err[k]);
    }
    for (std::int64_t k = 0; k <= K; ++k) {
        if (err[k] < res.best_error) {
            res.best_error = err[k];
            res.best_tau = static_cast<double>(k) * step;
            res.record_history.emplace_back(res.best_tau, res.best_error);
        }
    }
    // Refine every sampled local minimum, cheapest first.  A candidate is
    // skipped once even a slope-allowed improvement over its sample cannot
    // beat the current record.
    auto joint_err = [&](double tau) {
        double worst = 0.0;
        for (const auto& ev : evs) worst = std::max(worst, ev.sup_error_at(tau));
        return worst;
    };
    double max_slope = 0.0;
    for (std::int64_t k = 1; k <= K; ++k)
        max_slope = std::max(max_slope, std::abs(err[k] - err[k - 1]) / step);
    double allowance = 4.0 * max_slope * step;
    std::vector<std::int64_t> candidates;
    for (std::int64_t k = 0; k <= K; ++k) {
        bool left_ok = k == 0 || err[k] <= err[k - 1];
        bool right_ok = k == K || err[k] <= err[k + 1];
        if (left_ok && right_ok) candidates.push_back(k);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::int64_t a, std::int64_t b) { return err[a] < err[b]; });
    for (std::int64_t k : candidates) {
        if (err[k] - allowance > res.best_error) continue;
        double a = std::max(0.0, (static_cast<double>(k) - 1.0) * step);
        double b = std::min(T_max, (static_cast<double>(k) + 1.0) * step);
        double arg = 0.0;
        double val = golden_min(joint_err, a, b, 36, &arg);
        if (val < res.best_error) {
            res.best_error = val;
            res.best_tau = arg;
            res.record_history.emplace_back(arg, val);
        }
    }
    return res;
}

}  // namespace

double sup_error(const ZetaContext& ctx, const CompactRegion& region,
                 const TargetFunction& target, double tau, double x) {
    if (tau < 0.0) throw ValidationError("tau must be nonnegative");
    validate_region(region);
    auto log_f = target.log_on_grid(region);
    auto pts = region.grid_points();
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ComplexPoint shifted{pts[i].sigma, pts[i].t + tau};
        std::complex<double> log_z = log_zeta_strip(ctx, shifted, x).value;
        double abs_f = std::exp(log_f[i].real());
        worst = std::max(worst, abs_f * std::abs(std::exp(log_z - log_f[i]) -
                                                 std::complex<double>(1.0, 0.0)));
    }
    return worst;
}

ShiftSearchResult universality_scan(const ZetaContext& ctx, const CompactRegion& region,
                                    const TargetFunction& target, double T_max,
                                    double step, int threads, double x,
                                    std::vector<std::pair<double, double>>* samples_out) {
    if (!(T_max > 0.0)) throw ValidationError("T_max must be positive");
    step = scan_step(ctx, step, x);
    std::vector<GridEvaluator> evs;
    evs.push_back(make_evaluator(ctx, region, target, x));
    return run_scan(evs, T_max, step, threads, samples_out);
}

ShiftSearchResult joint_scan(const std::vector<JointComponent>& parts, double T_max,
                             double step, int threads, double x,
                             std::vector<std::pair<double, double>>* samples_out) {
    if (parts.empty()) throw ValidationError("joint scan needs at least one component");
    if (!(T_max > 0.0)) throw ValidationError("T_max must be positive");
    std::vector<GroupDescriptor> groups;
    for (const auto& p : parts) groups.push_back(p.ctx->group);
    bool ok = true;
    for (const auto& c : condition_check(groups)) ok = ok && c.nonempty;
    std::vector<GridEvaluator> evs;
    double st = step;
    for (const auto& p : parts) {
        evs.push_back(make_evaluator(*p.ctx, p.region, p.target, x));
        if (st <= 0.0) st = scan_step(*p.ctx, 0.0, x);
    }
    ShiftSearchResult res = run_scan(evs, T_max, st, threads, samples_out);
    res.condition_ok = ok;
    return res;
}

TailQuantileDiagnostic sprime_diagnostic(const ZetaContext& ctx,
                                         const PhaseTargetProblem& p, double sigma,
                                         double X2, double T, double step, int threads) {
    if (!(sigma > 0.75 && sigma < 1.0))
        throw ValidationError("sprime diagnostic requires 3/4 < sigma < 1");
    if (!(X2 >= 3.0)) throw ValidationError("X2 must be >= 3");
    validate_sampling(p, T, step);
    PhaseScan scan = make_scan(p);
    // core tail coefficients on [X2, coverage]
    std::vector<double> coeff, tlog;
    double square_sum = 0.0;
    std::int64_t below = 0;
    for (std::int64_t n = static_cast<std::int64_t>(std::ceil(X2));
         n <= ctx.coverage(); ++n) {
        if (!ctx.core.is_core(n)) continue;
        Rational mr = ctx.table.m[n];
        if (mr.numerator() == 0) continue;
        TraceValue tv(n);
        UnitValue u = epsilon(tv);
        double c = to_double(mr) * delta(tv) * std::exp(-2.0 * sigma * u.log_eps);
        coeff.push_back(c);
        tlog.push_back(2.0 * u.log_eps);
        square_sum += c * c;
    }
    double core_before = 0.0;
    for (std::int64_t n = 3; static_cast<double>(n) < X2 && n <= ctx.coverage(); ++n)
        if (ctx.core.is_core(n) && ctx.table.m[n].numerator() != 0) core_before += 1.0;
    TailQuantileDiagnostic diag;
    diag.threshold = std::pow(square_sum, 0.25);
    diag.st_reference = 0.5 * std::pow(2.0 * p.delta, core_before);
    std::int64_t K = static_cast<std::int64_t>(std::floor(T / step));
    int nchunks = std::max(1, threads * 8);
    std::vector<std::int64_t> members(nchunks, 0), hits(nchunks, 0);
    std::int64_t chunk = (K + 1 + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](std::int64_t c) {
        std::int64_t lo = c * chunk, hi = std::min<std::int64_t>(K + 1, lo + chunk);
        for (std::int64_t k = lo; k < hi; ++k) {
            double tau = static_cast<double>(k) * step;
            if (!scan.member(tau)) continue;
            members[c]++;
            CompensatedSum re, im;
            for (std::size_t i = 0; i < coeff.size(); ++i) {
                re.add(coeff[i] * std::cos(tlog[i] * tau));
                im.add(-coeff[i] * std::sin(tlog[i] * tau));
            }
            double a = re.value(), b = im.value();
            if (std::sqrt(a * a + b * b) < diag.threshold) hits[c]++;
        }
    });
    for (int c = 0; c < nchunks; ++c) {
        diag.members += members[c];
        below += hits[c];
    }
    diag.fraction = diag.members == 0
                        ? 0.0
                        : static_cast<double>(below) / static_cast<double>(diag.members);
    return diag;
}

double weyl_discrepancy(const std::vector<std::int64_t>& traces, double T, double step,
                        int threads) {
    if (traces.empty() || traces.size() > 3)
        throw ValidationError("discrepancy estimator supports 1 <= #Lambda_1 <= 3");
    CoreTraceIndex idx = build_core_index(
        std::max<std::int64_t>(*std::max_element(traces.begin(), traces.end()), 3));
    std::vector<double> omega;
    double max_log = 0.0;
    for (auto n : traces) {
        TraceValue tv(n);
        if (!idx.is_core(n))
            throw ValidationError("trace " + std::to_string(n) + " is not core");
        double le = epsilon(tv).log_eps;
        omega.push_back(le / kPi);
        max_log = std::max(max_log, le);
    }
    if (!(step > 0.0) || step > kPi / (8.0 * max_log) + 1e-15)
        throw ValidationError("step must satisfy step <= pi/(8 max log eps)");
    std::size_t dim = traces.size();
    std::int64_t K = static_cast<std::int64_t>(std::floor(T / step));
    std::int64_t cells = 1;
    for (std::size_t i = 0; i < dim; ++i) cells *= 10;
    // integer cell counts, chunked so thread count cannot matter
    int nchunks = std::max(1, threads * 8);
    std::vector<std::vector<std::int64_t>> counts(nchunks,
                                                  std::vector<std::int64_t>(cells, 0));
    std::int64_t chunk = (K + 1 + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](std::int64_t c) {
        std::int64_t lo = c * chunk, hi = std::min<std::int64_t>(K + 1, lo + chunk);
        for (std::int64_t k = lo; k < hi; ++k) {
            double tau = static_cast<double>(k) * step;
            std::int64_t cell = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                int d = static_cast<int>(frac(tau * omega[i]) * 10.0);
                d = std::min(d, 9);
                cell = cell * 10 + d;
            }
            counts[c][cell]++;
        }
    });
    std::vector<std::int64_t> hist(cells, 0);
    for (const auto& cc : counts)
        for (std::int64_t i = 0; i < cells; ++i) hist[i] += cc[i];
    double N = static_cast<double>(K + 1);
    // anchored boxes [0, j1/10) x ... : prefix sums over the cube
    double worst = 0.0;
    auto cell_count = [&](const std::vector<int>& ub) {
        std::int64_t total = 0;
        std::vector<int> it(dim, 0);
        while (true) {
            bool inside = true;
            for (std::size_t i = 0; i < dim; ++i)
                if (it[i] >= ub[i]) inside = false;
            if (inside) {
                std::int64_t cell = 0;
                for (std::size_t i = 0; i < dim; ++i) cell = cell * 10 + it[i];
                total += hist[cell];
            }
            std::size_t d = 0;
            while (d < dim && ++it[d] == 10) it[d++] = 0;
            if (d == dim) break;
        }
        return total;
    };
    std::vector<int> ub(dim, 1);
    while (true) {
        double vol = 1.0;
        for (std::size_t i = 0; i < dim; ++i) vol *= ub[i] / 10.0;
        double emp = static_cast<double>(cell_count(ub)) / N;
        worst = std::max(worst, std::abs(emp - vol));
        std::size_t d = 0;
        while (d < dim && ++ub[d] == 11) ub[d++] = 1;
        if (d == dim) break;
    }
    return worst;
}

}  // namespace szeta
