#include "osc/group.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "osc/errors.hpp"

namespace osc {

namespace {

void check_dim(std::size_t v_size, const FrequencyList& freqs, const char* op) {
  if (v_size != 2 * freqs.n())
    throw DimensionMismatch(std::string(op) + ": element has v of size " + std::to_string(v_size) +
                            ", frequencies need " + std::to_string(2 * freqs.n()));
}

int mod4(long k) { return static_cast<int>(((k % 4) + 4) % 4); }

}  // namespace

Eigen::VectorXd Element::coords() const {
  Eigen::VectorXd c(v.size() + 2);
  c(0) = z;
  c.segment(1, v.size()) = v;
  c(v.size() + 1) = t;
  return c;
}

Element Element::from_coords(const Eigen::VectorXd& c) {
  if (c.size() < 2 || c.size() % 2 != 0) throw DimensionMismatch("Element: coordinate count must be even");
  return {c(0), c.segment(1, c.size() - 2), c(c.size() - 1)};
}

bool ExactElement::is_identity() const {
  if (!z.is_zero() || !t.is_zero()) return false;
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Element to_float(const ExactElement& g) {
  Element out{g.z.to_double(), Eigen::VectorXd(static_cast<Eigen::Index>(g.v.size())), g.t.to_double()};
  for (std::size_t i = 0; i < g.v.size(); ++i) out.v(static_cast<Eigen::Index>(i)) = g.v[i].get_d();
  return out;
}

std::string to_string(const ExactElement& g) {
  std::ostringstream os;
  os << "(" << to_string(g.z) << "; [";
  for (std::size_t i = 0; i < g.v.size(); ++i) os << (i ? ", " : "") << to_string(g.v[i]);
  os << "]; " << to_string(g.t) << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExactElement& g) { return os << to_string(g); }

std::vector<Rational> ExactRotation::apply(const std::vector<Rational>& v) const {
  if (v.size() != 2 * quarters.size()) throw DimensionMismatch("ExactRotation::apply: size mismatch");
  std::vector<Rational> out(v.size());
  for (std::size_t i = 0; i < quarters.size(); ++i) {
    const Rational& x = v[2 * i];
    const Rational& y = v[2 * i + 1];
    switch (mod4(quarters[i])) {
      case 0: out[2 * i] = x; out[2 * i + 1] = y; break;
      case 1: out[2 * i] = -y; out[2 * i + 1] = x; break;
      case 2: out[2 * i] = -x; out[2 * i + 1] = -y; break;
      default: out[2 * i] = y; out[2 * i + 1] = -x; break;
    }
  }
  return out;
}

Eigen::MatrixXi ExactRotation::matrix() const {
  const auto d = static_cast<Eigen::Index>(2 * quarters.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(d, d);
  static constexpr int kCos[4] = {1, 0, -1, 0};
  static constexpr int kSin[4] = {0, 1, 0, -1};
  for (std::size_t i = 0; i < quarters.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(2 * i);
    const int q = mod4(quarters[i]);
    m(r, r) = kCos[q];
    m(r, r + 1) = -kSin[q];
    m(r + 1, r) = kSin[q];
    m(r + 1, r + 1) = kCos[q];
  }
  return m;
}

bool ExactRotation::is_identity() const {
  for (int q : quarters)
    if (mod4(q) != 0) return false;
  return true;
}

bool has_exact_rotation(const ExactScalar& t, const FrequencyList& freqs) {
  if (t.is_zero()) return true;
  if (!t.is_pure_pi()) return false;
  for (std::size_t i = 0; i < freqs.n(); ++i)
    if (!is_integer(Rational(2 * freqs[i] * t.pi_part()))) return false;
  return true;
}

ExactRotation exact_rotation(const ExactScalar& t, const FrequencyList& freqs) {
  if (!has_exact_rotation(t, freqs))
    throw ExactModeUnsupportedAngle("R(t) for t = " + to_string(t) +
                                    " has a block angle outside (pi/2)Z; use float mode");
  ExactRotation r;
  r.quarters.reserve(freqs.n());
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const Rational k = 2 * freqs[i] * t.pi_part();
    Integer rem = k.get_num() % 4;
    r.quarters.push_back(static_cast<int>(rem.get_si()));
  }
  return r;
}

Eigen::MatrixXd rotation(double t, const FrequencyList& freqs) {
  const auto d = static_cast<Eigen::Index>(2 * freqs.n());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const auto r = static_cast<Eigen::Index>(2 * i);
    const double angle = freqs.as_double(i) * t;
    const double c = std::cos(angle), s = std::sin(angle);
    m(r, r) = c;
    m(r, r + 1) = -s;
    m(r + 1, r) = s;
    m(r + 1, r + 1) = c;
  }
  return m;
}

Eigen::VectorXd rotate(double t, const Eigen::VectorXd& v, const FrequencyList& freqs) {
  check_dim(static_cast<std::size_t>(v.size()), freqs, "rotate");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const auto r = static_cast<Eigen::Index>(2 * i);
    const double angle = freqs.as_double(i) * t;
    const double c = std::cos(angle), s = std::sin(angle);
    out(r) = c * v(r) - s * v(r + 1);
    out(r + 1) = s * v(r) + c * v(r + 1);
  }
  return out;
}

double symplectic(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < u.size(); i += 2) sum += u(i) * w(i + 1) - u(i + 1) * w(i);
  return sum;
}

Rational symplectic(const std::vector<Rational>& u, const std::vector<Rational>& w) {
  Rational sum = 0;
  for (std::size_t i = 0; i + 1 < u.size(); i += 2) sum += u[i] * w[i + 1] - u[i + 1] * w[i];
  return sum;
}

Element multiply(const Element& g1, const Element& g2, const FrequencyList& freqs) {
  check_dim(static_cast<std::size_t>(g1.v.size()), freqs, "multiply");
  check_dim(static_cast<std::size_t>(g2.v.size()), freqs, "multiply");
  const Eigen::VectorXd rv = rotate(g1.t, g2.v, freqs);
  return {g1.z + g2.z + 0.5 * symplectic(g1.v, rv), g1.v + rv, g1.t + g2.t};
}

Element invert(const Element& g, const FrequencyList& freqs) {
  check_dim(static_cast<std::size_t>(g.v.size()), freqs, "invert");
  return {-g.z, -rotate(-g.t, g.v, freqs), -g.t};
}

Element conjugate(const Element& h, const Element& g, const FrequencyList& freqs) {
  return multiply(multiply(h, g, freqs), invert(h, freqs), freqs);
}

ExactElement multiply(const ExactElement& g1, const ExactElement& g2, const FrequencyList& freqs) {
  check_dim(g1.v.size(), freqs, "multiply");
  check_dim(g2.v.size(), freqs, "multiply");
  const auto rv = exact_rotation(g1.t, freqs).apply(g2.v);
  ExactElement out;
  out.z = g1.z + g2.z + ExactScalar(Rational(symplectic(g1.v, rv) / 2));
  out.v.resize(rv.size());
  for (std::size_t i = 0; i < rv.size(); ++i) out.v[i] = g1.v[i] + rv[i];
  out.t = g1.t + g2.t;
  return out;
}

ExactElement invert(const ExactElement& g, const FrequencyList& freqs) {
  check_dim(g.v.size(), freqs, "invert");
  auto rv = exact_rotation(-g.t, freqs).apply(g.v);
  for (auto& x : rv) x = -x;
  return {-g.z, std::move(rv), -g.t};
}

ExactElement conjugate(const ExactElement& h, const ExactElement& g, const FrequencyList& freqs) {
  return multiply(multiply(h, g, freqs), invert(h, freqs), freqs);
}

ExactElement power(const ExactElement& g, long k, const FrequencyList& freqs) {
  ExactElement base = k < 0 ? invert(g, freqs) : g;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1 : static_cast<unsigned long>(k);
  ExactElement acc = ExactElement::identity(freqs.n());
  while (e) {
    if (e & 1) acc = multiply(acc, base, freqs);
    e >>= 1;
    if (e) base = multiply(base, base, freqs);
  }
  return acc;
}

double distance(const Element& a, const Element& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

}  // namespace osc
