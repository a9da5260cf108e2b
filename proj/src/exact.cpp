#include "osc/exact.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>

#include "osc/errors.hpp"

namespace osc {

namespace {

// π ∈ [kPiLow, kPiHigh], width 1e-35.
const Rational& pi_low() {
  static const Rational v("314159265358979323846264338327950288/100000000000000000000000000000000000");
  return v;
}
const Rational& pi_high() {
  static const Rational v("314159265358979323846264338327950289/100000000000000000000000000000000000");
  return v;
}

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : s_(text) {}

  ExactScalar parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    ExactScalar total = signed_term();
    while (true) {
      skip_ws();
      if (at_end()) break;
      char op = s_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      ExactScalar t = signed_term();
      if (op == '+') total += t;
      else total -= t;
    }
    return total;
  }

 private:
  ExactScalar signed_term() {
    skip_ws();
    int sign = 1;
    while (!at_end() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      if (s_[pos_] == '-') sign = -sign;
      ++pos_;
      skip_ws();
    }
    ExactScalar t = term();
    return sign < 0 ? -t : t;
  }

  ExactScalar term() {
    skip_ws();
    Rational coefficient = 1;
    bool has_number = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      coefficient = number();
      has_number = true;
      skip_ws();
      if (peek('/')) {
        ++pos_;
        skip_ws();
        Rational den = number();
        if (sgn(den) == 0) fail("zero denominator");
        coefficient /= den;
      }
    }
    skip_ws();
    if (!at_end() && s_[pos_] == '*') {
      ++pos_;
      skip_ws();
    }
    // "pi" or the two-byte UTF-8 "π"
    if (s_.substr(pos_, 2) == "pi" || s_.substr(pos_, 2) == "\xCF\x80") {
      pos_ += 2;
      skip_ws();
      if (peek('/')) {
        ++pos_;
        skip_ws();
        Rational den = number();
        if (sgn(den) == 0) fail("zero denominator");
        coefficient /= den;
      }
      return ExactScalar::pi_times(coefficient);
    }
    if (!has_number) fail("expected a number or 'pi'");
    return ExactScalar(coefficient);
  }

  Rational number() {
    size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (!at_end() && s_[pos_] == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return parse_rational(s_.substr(start, pos_ - start));
  }

  bool peek(char c) const { return !at_end() && s_[pos_] == c; }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse exact scalar '" + std::string(s_) + "': " + what);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t first = 0;
  while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
  s = s.substr(first);
  if (s.empty()) throw ParseError("empty rational literal");
  bool negative = false;
  std::string body = s;
  if (body[0] == '-' || body[0] == '+') {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational result;
  auto dot = body.find('.');
  try {
    if (dot != std::string::npos) {
      std::string whole = body.substr(0, dot);
      std::string frac = body.substr(dot + 1);
      if ((whole + frac).empty()) throw ParseError("bad decimal '" + s + "'");
      for (char c : whole + frac)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad decimal '" + s + "'");
      Integer num(whole.empty() ? std::string("0") : whole);
      Integer scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      num = num * scale + (frac.empty() ? Integer(0) : Integer(frac));
      result = Rational(num, scale);
    } else {
      for (char c : body)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/')
          throw ParseError("bad rational '" + s + "'");
      auto slash = body.find('/');
      if (slash != std::string::npos) {
        Integer num(body.substr(0, slash));
        Integer den(body.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
        result = Rational(num, den);
      } else {
        result = Rational(Integer(body));
      }
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + s + "'");
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer round_to_integer(const Rational& q) {
  Integer twice_num = 2 * q.get_num() + (sgn(q) >= 0 ? q.get_den() : Integer(-q.get_den()));
  Integer den2 = 2 * q.get_den();
  Integer out;
  mpz_tdiv_q(out.get_mpz_t(), twice_num.get_mpz_t(), den2.get_mpz_t());
  return out;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw NonFiniteState("rational_from_double: non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

ExactScalar::ExactScalar(Rational rational_part, Rational pi_part)
    : q1_(std::move(rational_part)), q2_(std::move(pi_part)) {
  q1_.canonicalize();
  q2_.canonicalize();
}

double ExactScalar::to_double() const { return q1_.get_d() + q2_.get_d() * std::numbers::pi; }

int ExactScalar::sign() const {
  int s1 = sgn(q1_);
  int s2 = sgn(q2_);
  if (s2 == 0) return s1;
  if (s1 == 0 || s1 == s2) return s2;
  // q1 + q2·π with opposite signs: compare π with −q1/q2 > 0.
  Rational threshold = -q1_ / q2_;
  int pi_vs_threshold;
  if (pi_high() < threshold) pi_vs_threshold = -1;
  else if (pi_low() > threshold) pi_vs_threshold = 1;
  else throw Error("ExactScalar::sign: value within 1e-35·|q2| of zero, enclosure of pi too coarse");
  // q2·(π − threshold) has the sign of q2·(π − threshold).
  return s2 * pi_vs_threshold;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  q1_ += o.q1_;
  q2_ += o.q2_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  q1_ -= o.q1_;
  q2_ -= o.q2_;
  return *this;
}

ExactScalar& ExactScalar::operator*=(const Rational& r) {
  q1_ *= r;
  q2_ *= r;
  return *this;
}

ExactScalar& ExactScalar::operator/=(const Rational& r) {
  if (sgn(r) == 0) throw Error("ExactScalar: division by zero");
  q1_ /= r;
  q2_ /= r;
  return *this;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_rational()) return b * a.rational_part();
  if (b.is_rational()) return a * b.rational_part();
  throw NonRepresentable("ExactScalar product " + to_string(a) + " * " + to_string(b) +
                         " needs a pi^2 term");
}

std::optional<Rational> ratio(const ExactScalar& x, const ExactScalar& step) {
  if (step.is_zero()) throw Error("ratio: zero step");
  if (x.is_zero()) return Rational(0);
  // x = r·step componentwise.
  std::optional<Rational> r;
  if (sgn(step.rational_part()) != 0) r = Rational(x.rational_part() / step.rational_part());
  else if (sgn(x.rational_part()) != 0) return std::nullopt;
  if (sgn(step.pi_part()) != 0) {
    Rational r2 = x.pi_part() / step.pi_part();
    if (r && *r != r2) return std::nullopt;
    r = r2;
  } else if (sgn(x.pi_part()) != 0) {
    return std::nullopt;
  }
  return r;
}

bool is_integer_multiple(const ExactScalar& x, const ExactScalar& step) {
  auto r = ratio(x, step);
  return r && is_integer(*r);
}

ExactScalar parse_exact_scalar(std::string_view text) { return ScalarParser(text).parse(); }

std::string to_string(const ExactScalar& x) {
  if (x.is_rational()) return to_string(x.rational_part());
  std::string pi_term = to_string(x.pi_part()) + " pi";
  if (x.is_pure_pi()) return pi_term;
  return to_string(x.rational_part()) + " + " + pi_term;
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << to_string(x); }

}  // namespace osc
