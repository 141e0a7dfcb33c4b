#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qatlas {

// Powers of the two variables, x first.
using Exponents = std::array<unsigned, 2>;

struct Monomial {
  Exponents exponents{0, 0};
  mpz_class coefficient;

  unsigned degree() const { return exponents[0] + exponents[1]; }
  friend bool operator==(const Monomial &, const Monomial &) = default;
};

// Graded-lex comparison: higher total degree first, then higher power of x.
bool graded_lex_before(const Exponents &a, const Exponents &b);

// Exact integer polynomial in two variables.
//
// Terms are kept canonical at all times: sorted by graded_lex_before, one
// term per exponent pair, no zero coefficients. The zero polynomial is the
// empty term list.
class SparsePolynomial {
public:
  SparsePolynomial() = default;

  // Sorts, merges equal exponents and drops zeros.
  explicit SparsePolynomial(std::vector<Monomial> terms);

  static SparsePolynomial constant(const mpz_class &c);
  static SparsePolynomial term(unsigned a, unsigned b, const mpz_class &c);
  static SparsePolynomial x() { return term(1, 0, 1); }
  static SparsePolynomial y() { return term(0, 1, 1); }

  const std::vector<Monomial> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Maximum power of the given variable (0 for x, 1 for y); 0 for the zero
  // polynomial.
  unsigned max_exponent(int var) const;

  friend bool operator==(const SparsePolynomial &, const SparsePolynomial &) = default;

private:
  std::vector<Monomial> terms_;
};

SparsePolynomial add(const SparsePolynomial &p, const SparsePolynomial &q);
SparsePolynomial negate(const SparsePolynomial &p);
SparsePolynomial subtract(const SparsePolynomial &p, const SparsePolynomial &q);
SparsePolynomial mul(const SparsePolynomial &p, const SparsePolynomial &q);
SparsePolynomial pow(const SparsePolynomial &p, unsigned n);

inline SparsePolynomial operator+(const SparsePolynomial &p, const SparsePolynomial &q) { return add(p, q); }
inline SparsePolynomial operator-(const SparsePolynomial &p, const SparsePolynomial &q) { return subtract(p, q); }
inline SparsePolynomial operator-(const SparsePolynomial &p) { return negate(p); }
inline SparsePolynomial operator*(const SparsePolynomial &p, const SparsePolynomial &q) { return mul(p, q); }

// outer(sub1, sub2), expanded.
SparsePolynomial compose(const SparsePolynomial &outer, const SparsePolynomial &sub1,
                         const SparsePolynomial &sub2);

// Partial derivative with respect to variable 0 (x) or 1 (y).
SparsePolynomial derivative(const SparsePolynomial &p, int var);

mpq_class evaluate_exact(const SparsePolynomial &p, mpq_class u, mpq_class v);

struct FloatValue {
  double value = 0.0;
  bool finite = true;
};

// Terms are accumulated left to right in canonical order, each as
// coeff * u^a * v^b with powers built by repeated multiplication.
FloatValue evaluate_float(const SparsePolynomial &p, double u, double v);

struct PolyStats {
  // nullopt stands for the degree of the zero polynomial (minus infinity).
  std::optional<unsigned> total_degree;
  std::size_t monomial_count = 0;
};

PolyStats stats(const SparsePolynomial &p);

// Text form "c*x^a*y^b + ..." in canonical order; "0" for the zero polynomial.
std::string to_string(const SparsePolynomial &p);

// Accepts the text form written by to_string and the looser variants
// "3*x*y^2 - y + 7", "x^2*y", "-2". Throws std::invalid_argument.
SparsePolynomial parse_polynomial(std::string_view text);

struct PolyMap2 {
  SparsePolynomial component1;
  SparsePolynomial component2;

  const SparsePolynomial &operator[](int i) const { return i == 0 ? component1 : component2; }
  friend bool operator==(const PolyMap2 &, const PolyMap2 &) = default;
};

// (x^2, y^2)
PolyMap2 build_f1();
// ((xy^2 + x^2y - y - 1)^2 + x^3y^2, (x^3y + xy - x - 1)^2 + x^3y^2)
PolyMap2 build_f2();
// f2 o f1, built directly from its printed form.
PolyMap2 build_theorem_map();

// Componentwise compose(outer[i], inner.component1, inner.component2).
PolyMap2 compose(const PolyMap2 &outer, const PolyMap2 &inner);

} // namespace qatlas
