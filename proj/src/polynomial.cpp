#include "quadrant/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qatlas {

bool graded_lex_before(const Exponents &a, const Exponents &b) {
  const unsigned da = a[0] + a[1];
  const unsigned db = b[0] + b[1];
  if (da != db)
    return da > db;
  return a[0] > b[0];
}

SparsePolynomial::SparsePolynomial(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(), [](const Monomial &l, const Monomial &r) {
    return graded_lex_before(l.exponents, r.exponents);
  });
  terms_.reserve(terms.size());
  for (auto &t : terms) {
    if (!terms_.empty() && terms_.back().exponents == t.exponents) {
      terms_.back().coefficient += t.coefficient;
    } else {
      if (!terms_.empty() && terms_.back().coefficient == 0)
        terms_.pop_back();
      terms_.push_back(std::move(t));
    }
  }
  if (!terms_.empty() && terms_.back().coefficient == 0)
    terms_.pop_back();
}

SparsePolynomial SparsePolynomial::constant(const mpz_class &c) { return term(0, 0, c); }

SparsePolynomial SparsePolynomial::term(unsigned a, unsigned b, const mpz_class &c) {
  std::vector<Monomial> t;
  t.push_back(Monomial{{a, b}, c});
  return SparsePolynomial(std::move(t));
}

unsigned SparsePolynomial::max_exponent(int var) const {
  unsigned m = 0;
  for (const auto &t : terms_)
    m = std::max(m, t.exponents[var]);
  return m;
}

SparsePolynomial add(const SparsePolynomial &p, const SparsePolynomial &q) {
  // Merge of two sorted lists.
  std::vector<Monomial> out;
  out.reserve(p.size() + q.size());
  auto i = p.terms().begin(), ie = p.terms().end();
  auto j = q.terms().begin(), je = q.terms().end();
  while (i != ie && j != je) {
    if (i->exponents == j->exponents) {
      mpz_class c = i->coefficient + j->coefficient;
      if (c != 0)
        out.push_back(Monomial{i->exponents, std::move(c)});
      ++i;
      ++j;
    } else if (graded_lex_before(i->exponents, j->exponents)) {
      out.push_back(*i++);
    } else {
      out.push_back(*j++);
    }
  }
  out.insert(out.end(), i, ie);
  out.insert(out.end(), j, je);
  return SparsePolynomial(std::move(out));
}

SparsePolynomial negate(const SparsePolynomial &p) {
  std::vector<Monomial> out = p.terms();
  for (auto &t : out)
    t.coefficient = -t.coefficient;
  return SparsePolynomial(std::move(out));
}

SparsePolynomial subtract(const SparsePolynomial &p, const SparsePolynomial &q) { return add(p, negate(q)); }

SparsePolynomial mul(const SparsePolynomial &p, const SparsePolynomial &q) {
  std::vector<Monomial> out;
  out.reserve(p.size() * q.size());
  for (const auto &a : p.terms())
    for (const auto &b : q.terms())
      out.push_back(Monomial{{a.exponents[0] + b.exponents[0], a.exponents[1] + b.exponents[1]},
                             a.coefficient * b.coefficient});
  return SparsePolynomial(std::move(out));
}

SparsePolynomial pow(const SparsePolynomial &p, unsigned n) {
  SparsePolynomial result = SparsePolynomial::constant(1);
  for (unsigned k = 0; k < n; ++k)
    result = mul(result, p);
  return result;
}

namespace {

// powers[k] == base^k, grown on demand.
class PowerCache {
public:
  explicit PowerCache(const SparsePolynomial &base) : base_(base) { powers_.push_back(SparsePolynomial::constant(1)); }

  const SparsePolynomial &get(unsigned k) {
    while (powers_.size() <= k)
      powers_.push_back(mul(powers_.back(), base_));
    return powers_[k];
  }

private:
  const SparsePolynomial &base_;
  std::vector<SparsePolynomial> powers_;
};

} // namespace

SparsePolynomial compose(const SparsePolynomial &outer, const SparsePolynomial &sub1,
                         const SparsePolynomial &sub2) {
  PowerCache p1(sub1), p2(sub2);
  SparsePolynomial result;
  for (const auto &t : outer.terms()) {
    SparsePolynomial piece = mul(p1.get(t.exponents[0]), p2.get(t.exponents[1]));
    result = add(result, mul(SparsePolynomial::constant(t.coefficient), piece));
  }
  return result;
}

SparsePolynomial derivative(const SparsePolynomial &p, int var) {
  if (var != 0 && var != 1)
    throw std::invalid_argument("derivative: variable index must be 0 or 1");
  std::vector<Monomial> out;
  for (const auto &t : p.terms()) {
    const unsigned e = t.exponents[var];
    if (e == 0)
      continue;
    Monomial d = t;
    d.exponents[var] = e - 1;
    d.coefficient *= e;
    out.push_back(std::move(d));
  }
  return SparsePolynomial(std::move(out));
}

mpq_class evaluate_exact(const SparsePolynomial &p, mpq_class u, mpq_class v) {
  // GMP arithmetic requires canonical operands; mpq_class(num, den) is not.
  u.canonicalize();
  v.canonicalize();
  std::vector<mpq_class> pu{1}, pv{1};
  const unsigned mu = p.max_exponent(0), mv = p.max_exponent(1);
  for (unsigned k = 1; k <= mu; ++k)
    pu.push_back(pu.back() * u);
  for (unsigned k = 1; k <= mv; ++k)
    pv.push_back(pv.back() * v);
  mpq_class sum = 0;
  for (const auto &t : p.terms())
    sum += mpq_class(t.coefficient) * pu[t.exponents[0]] * pv[t.exponents[1]];
  sum.canonicalize();
  return sum;
}

FloatValue evaluate_float(const SparsePolynomial &p, double u, double v) {
  std::vector<double> pu{1.0}, pv{1.0};
  const unsigned mu = p.max_exponent(0), mv = p.max_exponent(1);
  for (unsigned k = 1; k <= mu; ++k)
    pu.push_back(pu.back() * u);
  for (unsigned k = 1; k <= mv; ++k)
    pv.push_back(pv.back() * v);
  double sum = 0.0;
  for (const auto &t : p.terms())
    sum += t.coefficient.get_d() * pu[t.exponents[0]] * pv[t.exponents[1]];
  return FloatValue{sum, std::isfinite(sum)};
}

PolyStats stats(const SparsePolynomial &p) {
  PolyStats s;
  s.monomial_count = p.size();
  if (!p.is_zero())
    s.total_degree = p.terms().front().degree(); // first term has the highest degree
  return s;
}

std::string to_string(const SparsePolynomial &p) {
  if (p.is_zero())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &t : p.terms()) {
    const bool negative = t.coefficient < 0;
    const mpz_class mag = abs(t.coefficient);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;

    std::vector<std::string> factors;
    if (mag != 1 || t.degree() == 0)
      factors.push_back(mag.get_str());
    const char names[2] = {'x', 'y'};
    for (int var = 0; var < 2; ++var) {
      const unsigned e = t.exponents[var];
      if (e == 0)
        continue;
      std::string f(1, names[var]);
      if (e > 1)
        f += "^" + std::to_string(e);
      factors.push_back(std::move(f));
    }
    for (std::size_t k = 0; k < factors.size(); ++k)
      os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

namespace {

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  SparsePolynomial parse() {
    std::vector<Monomial> terms;
    skip_ws();
    int sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = get() == '-' ? -1 : 1;
      skip_ws();
    }
    terms.push_back(parse_term(sign));
    for (;;) {
      skip_ws();
      if (at_end())
        break;
      const char op = get();
      if (op != '+' && op != '-')
        fail("expected '+' or '-'");
      skip_ws();
      terms.push_back(parse_term(op == '-' ? -1 : 1));
    }
    return SparsePolynomial(std::move(terms));
  }

private:
  Monomial parse_term(int sign) {
    Monomial m{{0, 0}, sign};
    bool any = false;
    for (;;) {
      skip_ws();
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        m.coefficient *= mpz_class(read_digits());
      } else if (c == 'x' || c == 'y') {
        get();
        unsigned e = 1;
        skip_ws();
        if (peek() == '^') {
          get();
          skip_ws();
          e = static_cast<unsigned>(std::stoul(read_digits()));
        }
        m.exponents[c == 'x' ? 0 : 1] += e;
      } else {
        fail("expected a coefficient or variable");
      }
      any = true;
      skip_ws();
      if (peek() != '*')
        break;
      get();
    }
    if (!any)
      fail("empty term");
    return m;
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return at_end() ? '\0' : s_[pos_++]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(const char *what) const {
    throw std::invalid_argument("parse_polynomial: " + std::string(what) + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace

SparsePolynomial parse_polynomial(std::string_view text) {
  Parser p(text);
  return p.parse();
}

PolyMap2 build_f1() {
  return {SparsePolynomial::term(2, 0, 1), SparsePolynomial::term(0, 2, 1)};
}

PolyMap2 build_f2() {
  using P = SparsePolynomial;
  const P one = P::constant(1);
  const P tail = P::term(3, 2, 1); // x^3 y^2
  const P inner1 = P::term(1, 2, 1) + P::term(2, 1, 1) - P::y() - one;
  const P inner2 = P::term(3, 1, 1) + P::term(1, 1, 1) - P::x() - one;
  return {pow(inner1, 2) + tail, pow(inner2, 2) + tail};
}

PolyMap2 build_theorem_map() {
  using P = SparsePolynomial;
  const P one = P::constant(1);
  const P tail = P::term(6, 4, 1); // x^6 y^4
  const P inner1 = P::term(2, 4, 1) + P::term(4, 2, 1) - P::term(0, 2, 1) - one;
  const P inner2 = P::term(6, 2, 1) + P::term(2, 2, 1) - P::term(2, 0, 1) - one;
  return {pow(inner1, 2) + tail, pow(inner2, 2) + tail};
}

PolyMap2 compose(const PolyMap2 &outer, const PolyMap2 &inner) {
  return {compose(outer.component1, inner.component1, inner.component2),
          compose(outer.component2, inner.component1, inner.component2)};
}

} // namespace qatlas
