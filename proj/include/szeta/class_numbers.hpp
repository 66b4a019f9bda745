// class_numbers.hpp -- SL2(Z) conjugacy classes of fixed trace, their
// multiplicities, and prime-geodesic counting diagnostics.
//
// Classes of trace n correspond to proper equivalence classes of integral
// forms of discriminant n^2-4 through M = [[p,q],[r,s]] <-> (r, s-p, -q).
// Splitting a form into content g times a primitive part gives
//     c(n) = sum over g^2 | n^2-4, (n^2-4)/g^2 = 0,1 mod 4 of h+((n^2-4)/g^2),
// the count of all classes of trace n.  A class is primitive (not a proper
// power) unless it arises as gamma^k of a primitive class of trace n0 with
// lucas_trace(n0,k) = n; subtracting those recursively yields p(n), and
//     m(n) = sum over (n0, j>=1), lucas_trace(n0,j) = n of p(n0)/j
// as an exact rational.  The k-th power map multiplies the associated form
// by U_k, which is how power classes are identified explicitly.
#ifndef SZETA_CLASS_NUMBERS_HPP
#define SZETA_CLASS_NUMBERS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "szeta/group.hpp"
#include "szeta/quadform.hpp"
#include "szeta/trace.hpp"

namespace szeta {

struct Mat2 {
    std::int64_t p = 1, q = 0, r = 0, s = 1;

    std::int64_t trace() const { return p + s; }
    std::int64_t det() const { return p * s - q * r; }
    Mat2 mul(const Mat2& o) const;
    Mat2 mod(std::int64_t N) const;
    QuadForm associated_form() const { return QuadForm{r, s - p, -q}; }
    auto operator<=>(const Mat2&) const = default;
};

struct ConjClassRep {
    Mat2 m;
    QuadForm source;
};

// M = [[(n-b)/2, -c], [a, (n+b)/2]]; requires disc(form) = n^2-4.
ConjClassRep representative_matrix(const QuadForm& form, TraceValue n);

// Conjugacy class of trace n, named by (content, canonical primitive form).
struct SL2Class {
    std::int64_t n = 0;
    std::int64_t content = 1;
    QuadForm prim_rep;  // canonical representative of the primitive cycle

    auto operator<=>(const SL2Class&) const = default;
    Mat2 matrix() const;
};

// c(n): number of all conjugacy classes with trace n.
std::int64_t total_class_count(TraceValue n);

// Memoizing enumerator for the class lists; the primitive lists feed the
// congruence covers, so they are cached per trace.
class ClassEnumerator {
  public:
    std::vector<SL2Class> all_classes(std::int64_t n);
    const std::vector<SL2Class>& primitive_classes(std::int64_t n);

  private:
    std::map<std::int64_t, std::vector<SL2Class>> memo_;
};

struct MultiplicityTable {
    GroupDescriptor group;
    std::int64_t n_max = 0;
    std::vector<std::int64_t> p;  // indexed by n, zero below 3
    std::vector<Rational> m;

    std::int64_t p_of(std::int64_t n) const;
    Rational m_of(std::int64_t n) const;
};

MultiplicityTable multiplicity_table_sl2z(std::int64_t n_max);

// pi_Gamma(x) = number of primitive classes with norm < x = sum p(n), n < X(x).
std::int64_t pi_gamma(double x, const MultiplicityTable& table);

// li(x) = integral from 2 to x of dt/log t, relative error < 1e-8.
double li(double x);

void write_table_csv(const MultiplicityTable& t, std::ostream& os);
MultiplicityTable read_table_csv(std::istream& is, GroupDescriptor group);

}  // namespace szeta

#endif
