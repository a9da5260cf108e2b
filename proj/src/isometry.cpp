#include "osc/isometry.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>
#include <sstream>

#include "osc/algebra.hpp"
#include "osc/errors.hpp"
#include "osc/geodesic.hpp"

namespace osc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

AlgebraVector column(const MatrixXd& a, Index j) {
  std::vector<double> c(a.rows());
  for (Index i = 0; i < a.rows(); ++i) c[i] = a(i, j);
  return AlgebraVector::from_coords(c);
}

VectorXd as_vector(const AlgebraVector& x) {
  const auto c = x.coords();
  return Eigen::Map<const VectorXd>(c.data(), idx(c.size()));
}

bool is_orthogonal(const MatrixXd& b, double tol) {
  return b.rows() == b.cols() && max_abs(b.transpose() * b - MatrixXd::Identity(b.rows(), b.cols())) <= tol;
}

Element nudge(const Element& g, Index coord, double h) {
  VectorXd c = g.coords();
  c(coord) += h;
  return Element::from_coords(c);
}

template <class F>
MatrixXd jacobian(const F& f, const Element& g, double h) {
  const Index d = g.coords().size();
  MatrixXd j(d, d);
  for (Index k = 0; k < d; ++k) j.col(k) = (f(nudge(g, k, h)).coords() - f(nudge(g, k, -h)).coords()) / (2 * h);
  return j;
}

Element random_point(std::mt19937_64& rng, std::size_t n, double bound) {
  std::uniform_real_distribution<double> u(-bound, bound);
  Element g = Element::identity(n);
  g.z = u(rng);
  g.t = u(rng);
  for (Index i = 0; i < g.v.size(); ++i) g.v(i) = u(rng);
  return g;
}

}  // namespace

IsotropyElement IsotropyElement::identity(const FrequencyList& freqs) {
  IsotropyElement el;
  for (const auto& run : freqs.runs()) {
    el.blocks.push_back(MatrixXd::Identity(idx(2 * run.size), idx(2 * run.size)));
    el.c.push_back(VectorXd::Zero(idx(2 * run.size)));
  }
  return el;
}

void validate(const IsotropyElement& el, const FrequencyList& freqs) {
  const auto runs = freqs.runs();
  if (el.eps != 1 && el.eps != -1) throw ShapeMismatch("isotropy element: eps must be +1 or -1");
  if (el.blocks.size() != runs.size() || el.c.size() != runs.size())
    throw ShapeMismatch("isotropy element: expected " + std::to_string(runs.size()) + " blocks (one per frequency run)");
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Index m = idx(2 * runs[r].size);
    if (el.blocks[r].rows() != m || el.blocks[r].cols() != m || el.c[r].size() != m)
      throw ShapeMismatch("isotropy element: block " + std::to_string(r) + " must be " + std::to_string(m) + "x" +
                          std::to_string(m));
    if (!is_orthogonal(el.blocks[r], 1e-12))
      throw ShapeMismatch("isotropy element: block " + std::to_string(r) + " is not orthogonal");
  }
  if (el.inner && el.inner->first.size() != idx(2 * freqs.n()))
    throw ShapeMismatch("isotropy element: inner v has the wrong size");
}

MatrixXd block_diagonal(const std::vector<MatrixXd>& blocks) {
  Index d = 0;
  for (const auto& b : blocks) d += b.rows();
  MatrixXd out = MatrixXd::Zero(d, d);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

MatrixXd symplectic_form(std::size_t n) {
  MatrixXd j = MatrixXd::Zero(idx(2 * n), idx(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    j(idx(2 * i), idx(2 * i + 1)) = 1;
    j(idx(2 * i + 1), idx(2 * i)) = -1;
  }
  return j;
}

namespace {

MatrixXd render(const IsotropyElement& el, const FrequencyList& freqs) {
  const auto runs = freqs.runs();
  const Index d = idx(freqs.dim());
  MatrixXd a = MatrixXd::Identity(d, d);
  double corner = 0.0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Index at = idx(1 + 2 * runs[r].first), m = el.blocks[r].rows();
    const double rho = runs[r].rho.get_d();
    a.block(0, at, 1, m) = el.c[r].transpose();
    a.block(at, at, m, m) = el.blocks[r];
    a.block(at, d - 1, m, 1) = -rho * el.blocks[r] * el.c[r];
    corner += rho * el.c[r].squaredNorm();
  }
  a(0, d - 1) = -0.5 * corner;
  return el.eps * a;
}

}  // namespace

MatrixXd isotropy_matrix(const IsotropyElement& el, const FrequencyList& freqs) {
  validate(el, freqs);
  return render(el, freqs);
}

bool check_local_isometry(const MatrixXd& a, const FrequencyList& freqs, double tol) {
  const Index d = idx(freqs.dim());
  if (a.rows() != d || a.cols() != d) return false;
  const MatrixXd g = gram_matrix(freqs);
  if (max_abs(a.transpose() * g * a - g) > tol) return false;
  std::vector<AlgebraVector> images;
  for (Index j = 0; j < d; ++j) images.push_back(column(a, j));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) {
        const auto e = [&](Index q) { return AlgebraVector::basis(freqs.n(), static_cast<std::size_t>(q)); };
        const VectorXd lhs = a * as_vector(bracket(e(i), bracket(e(j), e(k), freqs), freqs));
        const VectorXd rhs = as_vector(bracket(images[i], bracket(images[j], images[k], freqs), freqs));
        if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) return false;
      }
  return true;
}

IsotropyElement psi_decompose(const MatrixXd& a, const FrequencyList& freqs, double tol) {
  const Index d = idx(freqs.dim());
  if (a.rows() != d || a.cols() != d) throw ShapeMismatch("psi_decompose: matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  IsotropyElement el;
  if (std::abs(a(0, 0) - 1) <= tol) el.eps = 1;
  else if (std::abs(a(0, 0) + 1) <= tol) el.eps = -1;
  else throw ShapeMismatch("psi_decompose: top-left entry is not +-1");
  const MatrixXd s = el.eps * a;
  for (const auto& run : freqs.runs()) {
    const Index at = idx(1 + 2 * run.first), m = idx(2 * run.size);
    el.blocks.push_back(s.block(at, at, m, m));
    el.c.push_back(s.block(0, at, 1, m).transpose());
    if (!is_orthogonal(el.blocks.back(), tol)) throw ShapeMismatch("psi_decompose: diagonal block is not orthogonal");
  }
  if (max_abs(render(el, freqs) - a) > tol) throw ShapeMismatch("psi_decompose: matrix is not of isotropy shape");
  return el;
}

SemidirectElement to_semidirect(const IsotropyElement& el) {
  SemidirectElement s{el.eps, el.blocks, {}};
  Index d = 0;
  for (const auto& c : el.c) d += c.size();
  s.shift.resize(d);
  Index at = 0;
  for (std::size_t r = 0; r < el.blocks.size(); ++r) {
    s.shift.segment(at, el.c[r].size()) = el.blocks[r] * el.c[r];
    at += el.c[r].size();
  }
  return s;
}

SemidirectElement semidirect_multiply(const SemidirectElement& a, const SemidirectElement& b) {
  if (a.blocks.size() != b.blocks.size()) throw ShapeMismatch("semidirect_multiply: block counts differ");
  SemidirectElement out{a.eps * b.eps, {}, a.shift + block_diagonal(a.blocks) * b.shift};
  for (std::size_t r = 0; r < a.blocks.size(); ++r) out.blocks.push_back(a.blocks[r] * b.blocks[r]);
  return out;
}

double semidirect_distance(const SemidirectElement& a, const SemidirectElement& b) {
  if (a.eps != b.eps || a.blocks.size() != b.blocks.size()) return INFINITY;
  double d = max_abs(a.shift - b.shift);
  for (std::size_t r = 0; r < a.blocks.size(); ++r) d = std::max(d, max_abs(a.blocks[r] - b.blocks[r]));
  return d;
}

std::string to_string(ThetaVariant v) { return v == ThetaVariant::Printed ? "printed" : "normalized"; }

ThetaVariant parse_theta_variant(std::string_view text) {
  if (text == "printed") return ThetaVariant::Printed;
  if (text == "normalized") return ThetaVariant::Normalized;
  throw ParseError("theta variant must be 'printed' or 'normalized', got '" + std::string(text) + "'");
}

MatrixXd theta_p(double t, const FrequencyList& freqs, ThetaVariant variant) {
  MatrixXd p = MatrixXd::Identity(idx(2 * freqs.n()), idx(2 * freqs.n()));
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const double theta = freqs.as_double(i) * t;
    if (std::abs(std::remainder(theta, 2 * M_PI)) <= 1e-12) continue;
    const double s = std::sin(theta), c = std::cos(theta);
    const double scale = variant == ThetaVariant::Normalized ? 1.0 / std::sqrt(2 - 2 * c) : 1.0;
    const Index k = idx(2 * i);
    p(k, k) = s * scale;
    p(k, k + 1) = (1 - c) * scale;
    p(k + 1, k) = (c - 1) * scale;
    p(k + 1, k + 1) = s * scale;
  }
  return p;
}

MatrixXd theta_matrix(const std::vector<MatrixXd>& blocks, double t, const FrequencyList& freqs, ThetaVariant variant) {
  const MatrixXd b = block_diagonal(blocks);
  if (b.rows() != idx(2 * freqs.n())) throw ShapeMismatch("theta: blocks do not cover the frequencies");
  const MatrixXd p = theta_p(t, freqs, variant);
  return p.transpose() * b * p;
}

Element theta_B(const std::vector<MatrixXd>& blocks, const Element& g, const FrequencyList& freqs, ThetaVariant variant) {
  return {g.z, theta_matrix(blocks, g.t, freqs, variant) * g.v, g.t};
}

Element theta_B_inverse(const std::vector<MatrixXd>& blocks, const Element& g, const FrequencyList& freqs,
                        ThetaVariant variant) {
  const auto lu = theta_matrix(blocks, g.t, freqs, variant).fullPivLu();
  if (!lu.isInvertible()) throw NonRepresentable("theta: P(t)^T B P(t) is singular at t = " + std::to_string(g.t));
  return {g.z, lu.solve(g.v), g.t};
}

ThetaValidation validate_theta(const std::vector<MatrixXd>& blocks, const FrequencyList& freqs, ThetaVariant variant,
                               int samples, unsigned long seed) {
  constexpr double kStep = 1e-5, kTol = 1e-6;
  const auto map = [&](const Element& g) { return theta_B(blocks, g, freqs, variant); };
  ThetaValidation out;
  const Index d = idx(freqs.dim());
  MatrixXd expected = MatrixXd::Identity(d, d);
  expected.block(1, 1, d - 2, d - 2) = block_diagonal(blocks);
  out.differential_error = max_abs(jacobian(map, Element::identity(freqs.n()), kStep) - expected);
  out.differential_ok = out.differential_error <= kTol;

  std::mt19937_64 rng(seed);
  out.worst_point = Element::identity(freqs.n());
  for (int k = 0; k < samples; ++k) {
    const Element g = random_point(rng, freqs.n(), 2.0);
    const MatrixXd j = jacobian(map, g, kStep);
    const double err = max_abs(j.transpose() * metric_matrix(map(g), freqs) * j - metric_matrix(g, freqs));
    if (err > out.isometry_error) {
      out.isometry_error = err;
      out.worst_point = g;
    }
  }
  out.isometry_ok = out.isometry_error <= kTol;
  return out;
}

Element inner_automorphism(const VectorXd& v, double t, const Element& g, const FrequencyList& freqs) {
  return conjugate(Element{0.0, v, t}, g, freqs);
}

bool StructureRelationsReport::all_hold() const {
  for (const auto& r : relations)
    if (!r.holds) return false;
  return true;
}

StructureRelationsReport structure_relations_check(const std::vector<MatrixXd>& blocks, const VectorXd& v, double t,
                                                   const FrequencyList& freqs, ThetaVariant variant, int points,
                                                   unsigned long seed) {
  const MatrixXd j = symplectic_form(freqs.n());
  const VectorXd w = j * block_diagonal(blocks) * j.transpose() * v;
  const auto theta = [&](const Element& g) { return theta_B(blocks, g, freqs, variant); };
  const auto theta_inv = [&](const Element& g) { return theta_B_inverse(blocks, g, freqs, variant); };
  const auto inner = [&](const VectorXd& u, const Element& g) { return inner_automorphism(u, t, g, freqs); };
  const auto inv = [&](const Element& g) { return invert(g, freqs); };

  StructureRelationsReport report;
  for (const char* name : {"theta-conjugates-inner", "inversion-commutes-with-inner", "inversion-commutes-with-theta"}) {
    report.relations.emplace_back();
    report.relations.back().name = name;
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < points; ++k) {
    const Element g = random_point(rng, freqs.n(), 2.0);
    const Element lhs[3] = {theta(inner(v, theta_inv(g))), inv(inner(v, inv(g))), inv(theta(inv(g)))};
    const Element rhs[3] = {inner(w, g), inner(v, g), theta(g)};
    for (int r = 0; r < 3; ++r) {
      const double err = distance(lhs[r], rhs[r]) / std::max(1.0, rhs[r].coords().cwiseAbs().maxCoeff());
      auto& out = report.relations[r];
      if (err > out.max_error) out.max_error = err;
      if (err > kGroupMapTolerance && out.holds) {
        out.holds = false;
        out.witness = g;
      }
    }
  }
  return report;
}

bool aut_intersection_check(const IsotropyElement& el, double tol) {
  for (const auto& b : el.blocks) {
    MatrixXd m = b;
    if (el.invert)
      for (Index r = 1; r < m.rows(); r += 2) m.row(r) *= -1;
    const MatrixXd j = symplectic_form(static_cast<std::size_t>(m.rows() / 2));
    if (!is_orthogonal(m, tol) || max_abs(m.transpose() * j * m - j) > tol) return false;
  }
  return true;
}

IsometryDescriptor IsometryDescriptor::left_translation(ExactElement h) {
  IsometryDescriptor f;
  f.kind = Kind::LeftTranslation;
  f.h = to_float(h);
  f.h_exact = std::move(h);
  return f;
}

IsometryDescriptor IsometryDescriptor::left_translation(Element h) {
  IsometryDescriptor f;
  f.kind = Kind::LeftTranslation;
  f.h = std::move(h);
  return f;
}

IsometryDescriptor IsometryDescriptor::inversion() { return {}; }

IsometryDescriptor IsometryDescriptor::theta(std::vector<MatrixXd> blocks, ThetaVariant variant) {
  IsometryDescriptor f;
  f.kind = Kind::Theta;
  f.blocks = std::move(blocks);
  f.variant = variant;
  return f;
}

IsometryDescriptor IsometryDescriptor::inner_by(ExactElement h) {
  auto f = left_translation(std::move(h));
  f.kind = Kind::Inner;
  return f;
}

IsometryDescriptor IsometryDescriptor::inner_by(Element h) {
  auto f = left_translation(std::move(h));
  f.kind = Kind::Inner;
  return f;
}

IsometryDescriptor IsometryDescriptor::composite(std::vector<IsometryDescriptor> parts) {
  IsometryDescriptor f;
  f.kind = Kind::Composite;
  f.parts = std::move(parts);
  return f;
}

std::string describe(const IsometryDescriptor& f) {
  std::ostringstream os;
  const auto elem = [&] {
    if (f.h_exact) return to_string(*f.h_exact);
    std::ostringstream e;
    e << "(" << f.h.z << ", (" << f.h.v.transpose() << "), " << f.h.t << ")";
    return e.str();
  };
  switch (f.kind) {
    case IsometryDescriptor::Kind::LeftTranslation: os << "left-translation" << elem(); break;
    case IsometryDescriptor::Kind::Inversion: os << "inversion"; break;
    case IsometryDescriptor::Kind::Theta: os << "theta[" << to_string(f.variant) << "]"; break;
    case IsometryDescriptor::Kind::Inner: os << "inner" << elem(); break;
    case IsometryDescriptor::Kind::Composite:
      for (std::size_t i = 0; i < f.parts.size(); ++i) os << (i ? " o " : "") << describe(f.parts[i]);
      break;
  }
  return os.str();
}

IsometryDescriptor as_descriptor(const IsotropyElement& el) {
  std::vector<IsometryDescriptor> parts;
  if (el.invert) parts.push_back(IsometryDescriptor::inversion());
  parts.push_back(IsometryDescriptor::theta(el.blocks, ThetaVariant::Normalized));
  if (el.inner) parts.push_back(IsometryDescriptor::inner_by(Element{0.0, el.inner->first, el.inner->second}));
  return IsometryDescriptor::composite(std::move(parts));
}

Element apply(const IsometryDescriptor& f, const Element& g, const FrequencyList& freqs) {
  switch (f.kind) {
    case IsometryDescriptor::Kind::LeftTranslation: return multiply(f.h, g, freqs);
    case IsometryDescriptor::Kind::Inversion: return invert(g, freqs);
    case IsometryDescriptor::Kind::Theta: return theta_B(f.blocks, g, freqs, f.variant);
    case IsometryDescriptor::Kind::Inner: return conjugate(f.h, g, freqs);
    case IsometryDescriptor::Kind::Composite: {
      Element out = g;
      for (auto it = f.parts.rbegin(); it != f.parts.rend(); ++it) out = apply(*it, out, freqs);
      return out;
    }
  }
  return g;
}

std::optional<ExactElement> apply_exact(const IsometryDescriptor& f, const ExactElement& g, const FrequencyList& freqs) {
  try {
    switch (f.kind) {
      case IsometryDescriptor::Kind::LeftTranslation:
        if (!f.h_exact) return std::nullopt;
        return multiply(*f.h_exact, g, freqs);
      case IsometryDescriptor::Kind::Inversion: return invert(g, freqs);
      case IsometryDescriptor::Kind::Theta: return std::nullopt;
      case IsometryDescriptor::Kind::Inner:
        if (!f.h_exact) return std::nullopt;
        return conjugate(*f.h_exact, g, freqs);
      case IsometryDescriptor::Kind::Composite: {
        std::optional<ExactElement> out = g;
        for (auto it = f.parts.rbegin(); it != f.parts.rend() && out; ++it) out = apply_exact(*it, *out, freqs);
        return out;
      }
    }
  } catch (const ExactModeUnsupportedAngle&) {
  }
  return std::nullopt;
}

MatrixXd differential_at_identity(const IsometryDescriptor& f, const FrequencyList& freqs, double h) {
  return jacobian([&](const Element& g) { return apply(f, g, freqs); }, Element::identity(freqs.n()), h);
}

}  // namespace osc
