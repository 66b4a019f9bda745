#include "szeta/class_numbers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace szeta {

Mat2 Mat2::mul(const Mat2& o) const {
    return Mat2{p * o.p + q * o.r, p * o.q + q * o.s,
                r * o.p + s * o.r, r * o.q + s * o.s};
}

Mat2 Mat2::mod(std::int64_t N) const {
    auto m = [N](std::int64_t v) { return ((v % N) + N) % N; };
    return Mat2{m(p), m(q), m(r), m(s)};
}

ConjClassRep representative_matrix(const QuadForm& form, TraceValue n) {
    std::int64_t D = n.disc();
    if (form.disc() != D)
        throw ValidationError("form discriminant does not match n^2-4");
    if (((form.b - n.value()) % 2) != 0)
        throw std::logic_error("b and n must share parity");  // forced by disc
    Mat2 m{(n.value() - form.b) / 2, -form.c, form.a, (n.value() + form.b) / 2};
    if (m.det() != 1 || m.trace() != n.value())
        throw std::logic_error("representative matrix construction failed");
    return ConjClassRep{m, form};
}

Mat2 SL2Class::matrix() const {
    QuadForm scaled{content * prim_rep.a, content * prim_rep.b, content * prim_rep.c};
    return representative_matrix(scaled, TraceValue(n)).m;
}

std::int64_t total_class_count(TraceValue n) {
    std::int64_t D = n.disc();
    std::int64_t total = 0;
    for (std::int64_t g = 1; g * g <= D; ++g) {
        if (D % (g * g) != 0) continue;
        std::int64_t q = D / (g * g);
        if (q % 4 == 0 || q % 4 == 1) total += narrow_class_number(q);
    }
    return total;
}

std::vector<SL2Class> ClassEnumerator::all_classes(std::int64_t n) {
    std::int64_t D = n * n - 4;
    std::vector<SL2Class> out;
    for (std::int64_t g = 1; g * g <= D; ++g) {
        if (D % (g * g) != 0) continue;
        std::int64_t q = D / (g * g);
        if (q % 4 != 0 && q % 4 != 1) continue;
        for (const auto& cyc : class_cycles(q))
            out.push_back(SL2Class{n, g, cyc.canonical()});
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<SL2Class>& ClassEnumerator::primitive_classes(std::int64_t n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;

    std::vector<SL2Class> all = all_classes(n);
    // Mark the power classes: gamma^k scales the associated form by U_k, so
    // the k-th powers of the primitive classes of trace n0 are exactly the
    // classes (U_k * content, same primitive cycle).
    std::vector<SL2Class> powers;
    for (auto [n0, k] : power_routes(n)) {
        std::int64_t u = lucas_u(n0, k, n);
        for (const auto& base : primitive_classes(n0))
            powers.push_back(SL2Class{n, u * base.content, base.prim_rep});
    }
    std::sort(powers.begin(), powers.end());
    std::vector<SL2Class> prim;
    std::set_difference(all.begin(), all.end(), powers.begin(), powers.end(),
                        std::back_inserter(prim));
    if (prim.size() + powers.size() != all.size())
        throw std::logic_error("power classes not found among classes of trace " +
                               std::to_string(n));
    auto [pos, inserted] = memo_.emplace(n, std::move(prim));
    (void)inserted;
    return pos->second;
}

MultiplicityTable multiplicity_table_sl2z(std::int64_t n_max) {
    if (n_max < 3) throw ValidationError("n_max must be >= 3");
    MultiplicityTable t;
    t.group = GroupDescriptor::modular();
    t.n_max = n_max;
    t.p.assign(n_max + 1, 0);
    t.m.assign(n_max + 1, Rational(0));
    for (std::int64_t n = 3; n <= n_max; ++n) {
        auto routes = power_routes(n);
        std::int64_t pn = total_class_count(TraceValue(n));
        Rational mn(0);
        for (auto [n0, k] : routes) {
            pn -= t.p[n0];
            mn += Rational(t.p[n0], k);
        }
        if (pn < 0) throw std::logic_error("negative primitive count");
        t.p[n] = pn;
        t.m[n] = mn + Rational(pn);
    }
    return t;
}

std::int64_t MultiplicityTable::p_of(std::int64_t n) const {
    if (n < 0 || n > n_max) throw CoverageError("trace beyond table coverage");
    return p[n];
}

Rational MultiplicityTable::m_of(std::int64_t n) const {
    if (n < 0 || n > n_max) throw CoverageError("trace beyond table coverage");
    return m[n];
}

std::int64_t pi_gamma(double x, const MultiplicityTable& table) {
    if (!(x > 0)) throw ValidationError("pi_gamma requires x > 0");
    double X = upper_cutoff(x);
    if (X > static_cast<double>(table.n_max) + 1.0)
        throw CoverageError("pi_gamma cutoff beyond table coverage");
    std::int64_t total = 0;
    for (std::int64_t n = 3; static_cast<double>(n) < X && n <= table.n_max; ++n)
        total += table.p[n];
    return total;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1]
constexpr double kGx[8] = {0.0950125098376374, 0.2816035507792589,
                           0.4580167776572274, 0.6178762444026438,
                           0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
constexpr double kGw[8] = {0.1894506104550685, 0.1826034150449236,
                           0.1691565193950025, 0.1495959888165767,
                           0.1246289712555339, 0.0951585116824928,
                           0.0622535239386479, 0.0271524594117541};

double gauss16(double a, double b, const std::function<double(double)>& f) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    CompensatedSum s;
    for (int i = 0; i < 8; ++i) {
        s.add(kGw[i] * f(mid + half * kGx[i]));
        s.add(kGw[i] * f(mid - half * kGx[i]));
    }
    return half * s.value();
}

}  // namespace

double li(double x) {
    if (x < 2.0) throw ValidationError("li requires x >= 2");
    if (x == 2.0) return 0.0;
    // substitute t = e^u; integrand e^u/u is smooth on [log 2, log x]
    double lo = std::log(2.0), hi = std::log(x);
    int panels = std::max(16, static_cast<int>(8.0 * (hi - lo)));
    double h = (hi - lo) / panels;
    CompensatedSum s;
    for (int k = 0; k < panels; ++k) {
        double a = lo + k * h, b = a + h;
        s.add(gauss16(a, b, [](double u) { return std::exp(u) / u; }));
    }
    return s.value();
}

void write_table_csv(const MultiplicityTable& t, std::ostream& os) {
    os << "n,p,m_num,m_den\n";
    for (std::int64_t n = 3; n <= t.n_max; ++n)
        os << n << ',' << t.p[n] << ',' << t.m[n].numerator() << ','
           << t.m[n].denominator() << '\n';
}

MultiplicityTable read_table_csv(std::istream& is, GroupDescriptor group) {
    MultiplicityTable t;
    t.group = std::move(group);
    std::string line;
    if (!std::getline(is, line) || line.rfind("n,p,m_num,m_den", 0) != 0)
        throw ValidationError("bad multiplicity CSV header");
    std::vector<std::tuple<std::int64_t, std::int64_t, Rational>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::int64_t n, p, num, den;
        char c;
        if (!(ss >> n >> c >> p >> c >> num >> c >> den) || den <= 0)
            throw ValidationError("bad multiplicity CSV row: " + line);
        rows.emplace_back(n, p, Rational(num, den));
    }
    if (rows.empty()) throw ValidationError("empty multiplicity CSV");
    t.n_max = std::get<0>(rows.back());
    t.p.assign(t.n_max + 1, 0);
    t.m.assign(t.n_max + 1, Rational(0));
    for (auto& [n, p, m] : rows) {
        if (n < 3 || n > t.n_max) throw ValidationError("row out of order in CSV");
        t.p[n] = p;
        t.m[n] = m;
    }
    return t;
}

}  // namespace szeta
