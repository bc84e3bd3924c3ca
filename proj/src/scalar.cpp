#include "smoothkit/scalar.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <ostream>

namespace smoothkit {

int Scalar::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare a^2 with 2 b^2
  Rational lhs = a_ * a_;
  Rational rhs = 2 * b_ * b_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // unreachable for rationals, sqrt2 is irrational
  return c > 0 ? sa : sb;
}

double Scalar::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(2.0);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Rational na = a_ * o.a_ + 2 * b_ * o.b_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

Scalar Scalar::inverse() const {
  // 1/(a + b r2) = (a - b r2) / (a^2 - 2 b^2)
  Rational norm = a_ * a_ - 2 * b_ * b_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero");
  return Scalar(Rational(a_ / norm), Rational(-b_ / norm));
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(unsigned n) const {
  Scalar result(1);
  Scalar base = *this;
  while (n) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

std::string Scalar::str() const {
  if (sgn(b_) == 0) return a_.get_str();
  std::string irr;
  if (b_ == 1)
    irr = "sqrt2";
  else if (b_ == -1)
    irr = "-sqrt2";
  else
    irr = b_.get_str() + "*sqrt2";
  if (sgn(a_) == 0) return irr;
  if (irr.front() == '-') return a_.get_str() + irr;
  return a_.get_str() + "+" + irr;
}

namespace {

Rational parse_rational(std::string_view t) {
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(t);
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("bad rational literal '" + s + "'");
  if (s.front() == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

// "sqrt2", "-sqrt2", "q*sqrt2"
Rational parse_irrational(std::string_view t) {
  constexpr std::string_view tag = "sqrt2";
  if (t.size() < tag.size() || t.substr(t.size() - tag.size()) != tag)
    throw std::invalid_argument("bad sqrt2 term");
  std::string_view coef = t.substr(0, t.size() - tag.size());
  if (coef.empty() || coef == "+") return Rational(1);
  if (coef == "-") return Rational(-1);
  if (coef.back() != '*') throw std::invalid_argument("bad sqrt2 coefficient");
  return parse_rational(coef.substr(0, coef.size() - 1));
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty scalar literal");
  if (s.find("sqrt2") == std::string::npos) return Scalar(parse_rational(s));
  // split rational part from the sqrt2 term at the last top-level sign
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/' && s[i - 1] != '*') split = i;
  if (split == std::string::npos) return Scalar(Rational(0), parse_irrational(s));
  std::string_view head(s.data(), split);
  std::string_view tail(s.data() + split, s.size() - split);
  if (head.find("sqrt2") != std::string_view::npos)
    throw std::invalid_argument("bad scalar literal '" + s + "'");
  return Scalar(parse_rational(head), parse_irrational(tail));
}

std::size_t Scalar::hash() const {
  auto part = [](const Rational& q) {
    std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
    h ^= std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())) * 31u;
    return h ^ (mpz_size(q.get_num_mpz_t()) << 7);
  };
  return part(a_) * 1000003u ^ part(b_);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

bool in_integer_lattice(const Scalar& r, const Scalar& s) {
  if (s.is_rational()) throw std::invalid_argument("lattice slope must be irrational");
  Rational n = r.sqrt2_part() / s.sqrt2_part();
  Rational m = r.rational_part() - n * s.rational_part();
  n.canonicalize();
  m.canonicalize();
  return n.get_den() == 1 && m.get_den() == 1;
}

}  // namespace smoothkit
