// szeta command line: trace sets, class numbers, Selberg zeta evaluation,
// shift-set densities and universality scans.  Exit codes: 0 ok, 2 bad
// arguments, 3 request beyond tabulated coverage.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "szeta/congruence.hpp"
#include "szeta/series.hpp"
#include "szeta/universality.hpp"

using namespace szeta;
using nlohmann::ordered_json;

namespace {

struct Options {
    std::string format = "json";
    std::string output;
    int threads = 1;
    std::int64_t nmax = 1100;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(opt.output);
    if (!os) throw ValidationError("cannot open output file: " + opt.output);
    os << text;
}

GroupDescriptor parse_group(const std::string& spec) {
    if (spec == "SL2Z" || spec == "sl2z") return GroupDescriptor::modular();
    if (spec.rfind("Gamma(", 0) == 0 && spec.back() == ')') {
        std::int64_t N = std::stoll(spec.substr(6, spec.size() - 7));
        return GroupDescriptor::principal_congruence(N);
    }
    if (spec.rfind("custom:", 0) == 0) {
        std::ifstream is(spec.substr(7));
        if (!is) throw ValidationError("cannot open group file: " + spec.substr(7));
        nlohmann::json j;
        is >> j;
        return GroupDescriptor::from_json(j);
    }
    throw ValidationError("unknown group: " + spec + " (use SL2Z, Gamma(N), custom:file)");
}

ZetaContext load_context(const std::string& group_spec, const Options& opt,
                         const std::string& table_path) {
    GroupDescriptor g = parse_group(group_spec);
    if (!table_path.empty()) {
        std::ifstream is(table_path);
        if (!is) throw ValidationError("cannot open table: " + table_path);
        return make_context_with_table(g, read_table_csv(is, g));
    }
    return make_context(g, opt.nmax);
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::complex<double> parse_complex(const std::string& s) {
    auto parts = parse_double_list(s);
    if (parts.empty() || parts.size() > 2)
        throw ValidationError("complex values are re or re,im");
    return {parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

TargetFunction parse_target(const std::string& spec, const ZetaContext& ctx,
                            const CompactRegion& region, double x) {
    if (spec.rfind("const:", 0) == 0)
        return TargetFunction::constant(parse_complex(spec.substr(6)));
    if (spec.rfind("exppoly:", 0) == 0) {
        std::vector<std::complex<double>> coeffs;
        std::istringstream ss(spec.substr(8));
        std::string item;
        while (std::getline(ss, item, ';')) coeffs.push_back(parse_complex(item));
        return TargetFunction::exp_polynomial(std::move(coeffs));
    }
    if (spec.rfind("grid:", 0) == 0) {
        std::ifstream is(spec.substr(5));
        if (!is) throw ValidationError("cannot open grid file: " + spec.substr(5));
        std::vector<std::complex<double>> vals;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            vals.push_back(parse_complex(line));
        }
        return TargetFunction::grid_samples(std::move(vals));
    }
    if (spec.rfind("self:", 0) == 0) {
        // the group's own zeta pre-shifted by tau0; handy for planted tests
        double tau0 = std::stod(spec.substr(5));
        std::vector<std::complex<double>> vals;
        for (const auto& p : region.grid_points()) {
            ComplexPoint shifted{p.sigma, p.t + tau0};
            vals.push_back(std::exp(log_zeta_strip(ctx, shifted, x).value));
        }
        return TargetFunction::grid_samples(std::move(vals));
    }
    throw ValidationError("unknown target: " + spec +
                          " (use const:c, exppoly:c0;c1;.., grid:file, self:tau0)");
}

std::string series_report(const Options& opt, const SeriesResult& r, double sigma,
                          double t, bool with_exp = false) {
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "sigma,t,re,im,tail_budget,terms_used\n"
           << fmt_double(sigma) << ',' << fmt_double(t) << ','
           << fmt_double(r.value.real()) << ',' << fmt_double(r.value.imag()) << ','
           << fmt_double(r.tail_budget) << ',' << r.terms_used << '\n';
        return os.str();
    }
    ordered_json j;
    j["sigma"] = sigma;
    j["t"] = t;
    j["re"] = r.value.real();
    j["im"] = r.value.imag();
    if (with_exp) {
        std::complex<double> z = std::exp(r.value);
        j["z_re"] = z.real();
        j["z_im"] = z.imag();
    }
    j["tail_budget"] = fmt_double(r.tail_budget);
    j["terms_used"] = r.terms_used;
    j["cutoff_x"] = r.cutoff_x;
    j["tolerance_met"] = r.tolerance_met;
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selberg zeta series toolkit for the modular group and its "
                 "congruence subgroups"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value config file with [subcommand] sections");

    Options opt;
    app.add_option("--format", opt.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("-o,--output", opt.output, "write the report to a file");
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--nmax", opt.nmax, "multiplicity table coverage (traces)")
        ->check(CLI::Range(std::int64_t{3}, std::int64_t{20000}));

    std::string group = "SL2Z", groups, table_path, target_spec = "const:1.5";
    std::string traces_arg = "3", theta_arg;
    double x = 0.0, sigma = 2.0, t = 0.0, Y = 50.0, T = 1e6, delta = 0.25, step = 0.0;
    double tol = 1e-6, Tmax = 100.0;
    std::int64_t xi = 18, D = 5, N = 2;
    CompactRegion region;
    std::string target_class;

    auto* core_set = app.add_subcommand("core-set", "non-core traces up to x with relations");
    core_set->add_option("--x", xi, "bound")->required();

    auto* classnum = app.add_subcommand("classnum", "reduction cycles and h+(D)");
    classnum->add_option("--D", D, "discriminant")->required();

    auto* mult = app.add_subcommand("mult", "multiplicity table (CSV schema)");
    mult->add_option("--group", group, "SL2Z | Gamma(N) | custom:file");
    mult->add_option("--table", table_path, "import a table CSV instead of computing");

    auto* traces_cmd = app.add_subcommand("traces", "trace-set descriptor of a group");
    traces_cmd->add_option("--group", group);

    auto* zeta = app.add_subcommand("zeta", "log Z and Z at one point");
    zeta->add_option("--group", group);
    zeta->add_option("--table", table_path);
    zeta->add_option("--sigma", sigma)->required();
    zeta->add_option("--t", t);
    zeta->add_option("--x", x, "strip smoothing cutoff (default max(1e6,t^3))");
    zeta->add_option("--tol", tol, "tail tolerance for sigma > 1");

    auto* psi_cmd = app.add_subcommand("psi", "smoothed trace sum psi_s(x)");
    psi_cmd->add_option("--group", group);
    psi_cmd->add_option("--table", table_path);
    psi_cmd->add_option("--sigma", sigma)->required();
    psi_cmd->add_option("--t", t);
    psi_cmd->add_option("--x", x)->required();

    auto* meansq = app.add_subcommand("meansq", "mean square of the core tail series");
    meansq->add_option("--group", group);
    meansq->add_option("--sigma", sigma)->required();
    meansq->add_option("--Y", Y)->required();
    meansq->add_option("--T", T)->required();
    meansq->add_option("--step", step);

    double x2 = 0.0;
    auto* density = app.add_subcommand("density", "measured density of S_T(delta)");
    density->add_option("--traces", traces_arg, "core traces, comma separated");
    density->add_option("--theta", theta_arg, "targets in [0,1), comma separated");
    density->add_option("--delta", delta)->required();
    density->add_option("--T", T)->required();
    density->add_option("--step", step);
    density->add_option("--x2", x2,
                        "also report the fourth-root tail diagnostic beyond this trace");
    density->add_option("--sigma", sigma, "sigma for the tail diagnostic");
    density->add_option("--group", group, "group for the tail diagnostic table");
    density->add_option("--table", table_path);

    auto* equidist = app.add_subcommand("equidist", "Weyl discrepancy of the phase curve");
    equidist->add_option("--traces", traces_arg);
    equidist->add_option("--T", T)->required();
    equidist->add_option("--step", step);

    auto* shift_find = app.add_subcommand("shift-find", "smallest shift in S_T(delta)");
    shift_find->add_option("--traces", traces_arg);
    shift_find->add_option("--theta", theta_arg);
    shift_find->add_option("--delta", delta)->required();
    shift_find->add_option("--T", T)->required();
    shift_find->add_option("--step", step);

    std::string dump_grid;
    auto* scan = app.add_subcommand("scan", "sup-norm universality scan over shifts");
    scan->add_option("--group", group);
    scan->add_option("--table", table_path);
    scan->add_option("--target", target_spec, "const:c | exppoly:c0;c1 | grid:file | self:tau0");
    scan->add_option("--Tmax", Tmax)->required();
    scan->add_option("--step", step);
    scan->add_option("--x", x);
    scan->add_option("--sigma-lo", region.sigma_lo);
    scan->add_option("--sigma-hi", region.sigma_hi);
    scan->add_option("--t-lo", region.t_lo);
    scan->add_option("--t-hi", region.t_hi);
    scan->add_option("--rows", region.rows);
    scan->add_option("--cols", region.cols);
    scan->add_option("--dump-grid", dump_grid,
                     "write target and best-shift zeta values over the grid");

    auto* joint = app.add_subcommand("joint-check", "condition (hat sets) for a group list");
    joint->add_option("--groups", groups, "comma separated group list")->required();

    auto* cheb = app.add_subcommand("chebotarev", "primitive classes per PSL2(Z/N) class");
    cheb->add_option("--N", N)->required();
    cheb->add_option("--x", T, "norm bound")->required();
    cheb->add_option("--target", target_class, "p,q,r,s of one class (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (core_set->parsed()) {
            CoreTraceIndex idx = build_core_index(xi);
            if (opt.format == "csv") {
                std::ostringstream os;
                os << "n,base,exp\n";
                for (const auto& r : idx.non_core)
                    os << r.n << ',' << r.n0 << ',' << r.k << '\n';
                emit(opt, os.str());
            } else {
                ordered_json rows = ordered_json::array();
                for (const auto& r : idx.non_core)
                    rows.push_back({{"n", r.n}, {"base", r.n0}, {"exp", r.k}});
                ordered_json j{{"x", xi}, {"count", idx.non_core.size()}, {"non_core", rows}};
                emit(opt, j.dump(2) + "\n");
            }
        } else if (classnum->parsed()) {
            auto cycles = class_cycles(D);
            ordered_json jc = ordered_json::array();
            for (const auto& c : cycles) {
                ordered_json forms = ordered_json::array();
                for (const auto& f : c.forms) forms.push_back({f.a, f.b, f.c});
                jc.push_back(forms);
            }
            ordered_json j{{"D", D},
                           {"h_plus", static_cast<std::int64_t>(cycles.size())},
                           {"cycles", jc}};
            emit(opt, j.dump(2) + "\n");
        } else if (mult->parsed()) {
            ZetaContext ctx = load_context(group, opt, table_path);
            std::ostringstream os;
            write_table_csv(ctx.table, os);
            emit(opt, os.str());
        } else if (traces_cmd->parsed()) {
            emit(opt, trace_set(parse_group(group)).to_json().dump(2) + "\n");
        } else if (zeta->parsed()) {
            ZetaContext ctx = load_context(group, opt, table_path);
            SeriesResult r;
            if (sigma > 1.0)
                r = log_zeta_euler(ctx, ComplexPoint{sigma, t}, tol);
            else
                r = log_zeta_strip(ctx, ComplexPoint{sigma, t}, x);
            emit(opt, series_report(opt, r, sigma, t, /*with_exp=*/true));
        } else if (psi_cmd->parsed()) {
            ZetaContext ctx = load_context(group, opt, table_path);
            emit(opt, series_report(opt, psi(ctx, ComplexPoint{sigma, t}, x), sigma, t));
        } else if (meansq->parsed()) {
            ZetaContext ctx = load_context(group, opt, table_path);
            if (step == 0.0)
                step = 3.14159265358979323846 /
                       (4.0 * epsilon(TraceValue(ctx.coverage())).log_eps);
            double v = mean_square(ctx, sigma, Y, T, step, opt.threads);
            ordered_json j{{"sigma", sigma}, {"Y", Y},     {"T", T},
                           {"step", step},  {"value", v}};
            emit(opt, j.dump(2) + "\n");
        } else if (density->parsed() || shift_find->parsed()) {
            PhaseTargetProblem p;
            p.traces = parse_int_list(traces_arg);
            p.delta = delta;
            p.theta = theta_arg.empty() ? std::vector<double>(p.traces.size(), 0.0)
                                        : parse_double_list(theta_arg);
            double maxlog = 0.0;
            for (auto n : p.traces)
                maxlog = std::max(maxlog, epsilon(TraceValue(n)).log_eps);
            if (step == 0.0) step = default_tau_step(maxlog);
            if (density->parsed()) {
                double measured = shift_set_density(p, T, step, opt.threads);
                double predicted = std::pow(2.0 * p.delta,
                                            static_cast<double>(p.traces.size()));
                ordered_json j{{"lambda_set", p.traces}, {"delta", p.delta},
                               {"T", T},                 {"step", step},
                               {"measured", measured},   {"predicted", predicted}};
                if (x2 > 0.0) {
                    ZetaContext ctx = load_context(group, opt, table_path);
                    double sg = sigma > 0.75 && sigma < 1.0 ? sigma : 0.9;
                    auto diag = sprime_diagnostic(ctx, p, sg, x2, T, step, opt.threads);
                    j["sprime"] = ordered_json{{"sigma", sg},
                                               {"X2", x2},
                                               {"members", diag.members},
                                               {"fraction", diag.fraction},
                                               {"threshold", diag.threshold},
                                               {"st_reference", diag.st_reference}};
                }
                emit(opt, j.dump(2) + "\n");
            } else {
                auto tau = find_shift(p, T, step);
                ordered_json j{{"lambda_set", p.traces},
                               {"delta", p.delta},
                               {"T", T},
                               {"step", step},
                               {"found", tau.has_value()}};
                if (tau) j["tau"] = *tau;
                emit(opt, j.dump(2) + "\n");
            }
        } else if (equidist->parsed()) {
            auto traces = parse_int_list(traces_arg);
            double maxlog = 0.0;
            for (auto n : traces)
                maxlog = std::max(maxlog, epsilon(TraceValue(n)).log_eps);
            if (step == 0.0) step = default_tau_step(maxlog);
            double d = weyl_discrepancy(traces, T, step, opt.threads);
            ordered_json j{{"lambda_set", traces}, {"T", T}, {"step", step},
                           {"discrepancy", d}};
            emit(opt, j.dump(2) + "\n");
        } else if (scan->parsed()) {
            ZetaContext ctx = load_context(group, opt, table_path);
            if (x == 0.0) x = 1e6;
            TargetFunction target = parse_target(target_spec, ctx, region, x);
            std::vector<std::pair<double, double>> samples;
            ShiftSearchResult res = universality_scan(ctx, region, target, Tmax, step,
                                                      opt.threads, x, &samples);
            if (!dump_grid.empty()) {
                std::ofstream gs(dump_grid);
                if (!gs) throw ValidationError("cannot open grid dump: " + dump_grid);
                gs << "i,j,sigma,t,f_re,f_im,z_re,z_im\n";
                auto pts = region.grid_points();
                auto log_f = target.log_on_grid(region);
                for (int i = 0; i < region.rows; ++i)
                    for (int j = 0; j < region.cols; ++j) {
                        std::size_t k = static_cast<std::size_t>(i) * region.cols + j;
                        ComplexPoint shifted{pts[k].sigma, pts[k].t + res.best_tau};
                        std::complex<double> z =
                            std::exp(log_zeta_strip(ctx, shifted, x).value);
                        std::complex<double> f = std::exp(log_f[k]);
                        gs << i << ',' << j << ',' << fmt_double(pts[k].sigma) << ','
                           << fmt_double(pts[k].t) << ',' << fmt_double(f.real()) << ','
                           << fmt_double(f.imag()) << ',' << fmt_double(z.real()) << ','
                           << fmt_double(z.imag()) << '\n';
                    }
            }
            if (opt.format == "csv") {
                std::ostringstream os;
                os << "tau,sup_error,is_record\n";
                std::size_t ri = 0;
                for (const auto& [tau, err] : samples) {
                    bool rec = ri < res.record_history.size() &&
                               res.record_history[ri].first == tau &&
                               res.record_history[ri].second == err;
                    if (rec) ++ri;
                    os << fmt_double(tau) << ',' << fmt_double(err) << ',' << (rec ? 1 : 0)
                       << '\n';
                }
                for (; ri < res.record_history.size(); ++ri)
                    os << fmt_double(res.record_history[ri].first) << ','
                       << fmt_double(res.record_history[ri].second) << ",1\n";
                emit(opt, os.str());
            } else {
                ordered_json recs = ordered_json::array();
                for (const auto& [tau, err] : res.record_history)
                    recs.push_back({{"tau", tau}, {"sup_error", err}});
                ordered_json j{{"best_tau", res.best_tau},
                               {"best_error", res.best_error},
                               {"samples_evaluated", res.samples_evaluated},
                               {"records", recs}};
                emit(opt, j.dump(2) + "\n");
            }
        } else if (joint->parsed()) {
            std::vector<GroupDescriptor> gs;
            std::istringstream ss(groups);
            std::string item;
            while (std::getline(ss, item, ',')) gs.push_back(parse_group(item));
            auto results = condition_check(gs);
            ordered_json arr = ordered_json::array();
            bool all_ok = true;
            for (std::size_t i = 0; i < gs.size(); ++i) {
                ordered_json j{{"group", gs[i].name()}, {"nonempty", results[i].nonempty}};
                if (results[i].witness) j["witness"] = *results[i].witness;
                arr.push_back(j);
                all_ok = all_ok && results[i].nonempty;
            }
            if (!all_ok)
                std::cerr << "warning: the hat-set condition fails for this ordering; "
                             "joint universality is not guaranteed\n";
            ordered_json j{{"condition_holds", all_ok}, {"groups", arr}};
            emit(opt, j.dump(2) + "\n");
        } else if (cheb->parsed()) {
            ClassEnumerator classes;
            ordered_json arr = ordered_json::array();
            std::int64_t total = 0;
            auto conj = psl2_conjugacy_classes(N);
            if (!target_class.empty()) {
                auto e = parse_int_list(target_class);
                if (e.size() != 4) throw ValidationError("target needs p,q,r,s");
                Mat2 m{e[0], e[1], e[2], e[3]};
                std::int64_t c = chebotarev_count(N, m, T, classes);
                arr.push_back({{"representative", {m.p, m.q, m.r, m.s}}, {"count", c}});
                total = c;
            } else {
                for (const auto& cls : conj) {
                    const Mat2& m = cls.front();
                    std::int64_t c = chebotarev_count(N, m, T, classes);
                    arr.push_back({{"representative", {m.p, m.q, m.r, m.s}},
                                   {"class_size", cls.size()},
                                   {"count", c}});
                    total += c;
                }
            }
            ordered_json j{{"N", N}, {"x", T}, {"group_order", psl2_group_order(N)},
                           {"total", total}, {"classes", arr}};
            emit(opt, j.dump(2) + "\n");
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CoverageError& e) {
        std::cerr << "coverage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
