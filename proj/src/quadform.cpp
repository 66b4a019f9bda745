#include "szeta/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace szeta {

namespace {

bool square_test(std::int64_t v) {
    if (v < 0) return false;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
        if (c * c == v) return true;
    return false;
}

}  // namespace

std::int64_t QuadForm::content() const {
    std::int64_t g = std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c));
    return g == 0 ? 1 : g;
}

bool QuadForm::is_reduced() const {
    std::int64_t D = disc();
    if (D <= 0 || square_test(D)) return false;
    double sD = std::sqrt(static_cast<double>(D));
    double tb = static_cast<double>(b);
    double ta = 2.0 * std::abs(static_cast<double>(a));
    return 0 < b && tb < sD && sD - tb < ta && ta < sD + tb;
}

void validate_discriminant(std::int64_t D) {
    if (D <= 0) throw ValidationError("discriminant must be positive");
    if (square_test(D)) throw ValidationError("discriminant must be non-square");
    std::int64_t m = D % 4;
    if (m != 0 && m != 1) throw ValidationError("discriminant must be 0 or 1 mod 4");
}

QuadForm rho(const QuadForm& f) {
    std::int64_t D = f.disc();
    validate_discriminant(D);
    std::int64_t ac = std::llabs(f.c);
    if (ac == 0) throw ValidationError("degenerate form");
    double sD = std::sqrt(static_cast<double>(D));
    // r = -b mod 2|c|, shifted into the normalization window
    std::int64_t r = ((-f.b) % (2 * ac) + 2 * ac) % (2 * ac);
    if (static_cast<double>(ac) > sD) {
        if (r > ac) r -= 2 * ac;  // -|c| < r <= |c|
    } else {
        while (static_cast<double>(r) >= sD) r -= 2 * ac;  // sqrt(D)-2|c| < r < sqrt(D)
        while (static_cast<double>(r) < sD - 2 * ac) r += 2 * ac;
    }
    std::int64_t c2 = (r * r - D) / (4 * f.c);
    return QuadForm{f.c, r, c2};
}

QuadForm reduce(QuadForm f) {
    validate_discriminant(f.disc());
    for (int i = 0; i < 4096; ++i) {
        if (f.is_reduced()) return f;
        f = rho(f);
    }
    throw std::logic_error("reduction did not terminate");
}

std::vector<QuadForm> reduced_primitive_forms(std::int64_t D) {
    validate_discriminant(D);
    std::vector<QuadForm> out;
    double sD = std::sqrt(static_cast<double>(D));
    for (std::int64_t b = (D % 2 == 0) ? 2 : 1; static_cast<double>(b) < sD; b += 2) {
        std::int64_t m = (D - b * b) / 4;  // = -a*c > 0
        if ((D - b * b) % 4 != 0) continue;
        for (std::int64_t d = 1; d * d <= m; ++d) {
            if (m % d != 0) continue;
            for (std::int64_t aa : {d, m / d}) {
                double t = 2.0 * static_cast<double>(aa);
                if (!(sD - b < t && t < sD + b)) continue;
                for (std::int64_t sgn : {1, -1}) {
                    QuadForm f{sgn * aa, b, -m / (sgn * aa)};
                    if (f.is_primitive()) out.push_back(f);
                }
                if (aa == m / d) break;  // avoid the duplicate divisor pair
            }
            if (d == m / d) break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ReductionCycle> class_cycles(std::int64_t D) {
    auto forms = reduced_primitive_forms(D);
    std::map<QuadForm, bool> seen;
    for (const auto& f : forms) seen[f] = false;
    std::vector<ReductionCycle> cycles;
    for (const auto& start : forms) {
        if (seen[start]) continue;
        ReductionCycle cyc;
        QuadForm cur = start;
        do {
            auto it = seen.find(cur);
            if (it == seen.end())
                throw std::logic_error("rho left the reduced set");
            it->second = true;
            cyc.forms.push_back(cur);
            cur = rho(cur);
        } while (!(cur == start));
        // rotate so the minimal form leads: canonical representative
        auto mn = std::min_element(cyc.forms.begin(), cyc.forms.end());
        std::rotate(cyc.forms.begin(), mn, cyc.forms.end());
        cycles.push_back(std::move(cyc));
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const ReductionCycle& x, const ReductionCycle& y) {
                  return x.canonical() < y.canonical();
              });
    return cycles;
}

std::int64_t narrow_class_number(std::int64_t D) {
    return static_cast<std::int64_t>(class_cycles(D).size());
}

}  // namespace szeta
