#include "hillgreen/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hillgreen/errors.hpp"

namespace hillgreen {

namespace {

// Fritsch-Carlson limited slopes; keeps the interpolant monotone on every
// interval where the data are monotone.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);

  std::vector<double> m(n);
  if (n == 2) {
    m[0] = m[1] = delta[0];
    return m;
  }
  m.front() = delta.front();
  m.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double w0 = 2.0 * h1 + h0;
      const double w1 = h1 + 2.0 * h0;
      m[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double alpha = m[i] / delta[i];
    const double beta = m[i + 1] / delta[i];
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[i] = tau * alpha * delta[i];
      m[i + 1] = tau * beta * delta[i];
    }
  }
  return m;
}

bool same_constant(const Segment& a, const Segment& b) {
  const auto* ca = std::get_if<ConstantPiece>(&a.piece);
  const auto* cb = std::get_if<ConstantPiece>(&b.piece);
  return ca != nullptr && cb != nullptr && ca->value == cb->value;
}

void validate(const std::vector<Segment>& segments) {
  if (segments.empty()) throw DomainError("potential has no segments");
  if (segments.front().from != 0.0) throw DomainError("first breakpoint must be 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!(s.to > s.from)) {
      throw DomainError("breakpoints must be strictly increasing (segment " + std::to_string(i) + ")");
    }
    if (i + 1 < segments.size() && segments[i + 1].from != s.to) {
      throw DomainError("segments must be contiguous (gap after segment " + std::to_string(i) + ")");
    }
    if (s.direction != 1.0 && s.direction != -1.0) throw DomainError("segment direction must be +1 or -1");
    if (const auto* table = std::get_if<TablePiece>(&s.piece)) {
      const double x0 = std::min(s.argument(s.from), s.argument(s.to));
      const double x1 = std::max(s.argument(s.from), s.argument(s.to));
      const double slack = 1e-12 * std::max(1.0, std::abs(x1));
      if (x0 < table->nodes().front() - slack || x1 > table->nodes().back() + slack) {
        throw DomainError("table nodes do not cover segment " + std::to_string(i));
      }
    }
  }
}

}  // namespace

TablePiece::TablePiece(std::vector<double> nodes, std::vector<double> values, int order)
    : nodes_(std::move(nodes)), values_(std::move(values)), order_(order) {
  if (nodes_.size() != values_.size() || nodes_.size() < 2) {
    throw DomainError("table needs at least two nodes with matching values");
  }
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] > nodes_[i])) throw DomainError("table nodes must be strictly increasing");
  }
  if (order_ != 1 && order_ != 3) throw DomainError("table interpolation order must be 1 or 3");
  if (order_ == 3) slopes_ = monotone_slopes(nodes_, values_);
}

double TablePiece::operator()(double x) const {
  const double xc = std::clamp(x, nodes_.front(), nodes_.back());
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xc);
  std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, nodes_.size() - 1) - 1;

  const double h = nodes_[i + 1] - nodes_[i];
  const double u = (xc - nodes_[i]) / h;
  if (order_ == 1) return values_[i] + u * (values_[i + 1] - values_[i]);

  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double evaluate_piece(const Piece& piece, double x) {
  struct Visitor {
    double x;
    double operator()(const ConstantPiece& c) const { return c.value; }
    double operator()(const CosinePiece& c) const { return c.c0 + c.c1 * std::cos(c.omega * x + c.phase); }
    double operator()(const PolynomialPiece& p) const {
      return ((p.coeffs[3] * x + p.coeffs[2]) * x + p.coeffs[1]) * x + p.coeffs[0];
    }
    double operator()(const TablePiece& t) const { return t(x); }
  };
  return std::visit(Visitor{x}, piece);
}

Potential::Potential(std::vector<Segment> segments, double shift) : shift_(shift) {
  validate(segments);
  segments_.reserve(segments.size());
  for (auto& s : segments) {
    if (!segments_.empty() && same_constant(segments_.back(), s)) {
      segments_.back().to = s.to;
    } else {
      segments_.push_back(std::move(s));
    }
  }
}

Potential Potential::constant(double value, double length) {
  return Potential({Segment{0.0, length, ConstantPiece{value}}});
}

Potential Potential::cosine(double c0, double c1, double omega, double phase, double length) {
  return Potential({Segment{0.0, length, CosinePiece{c0, c1, omega, phase}}});
}

std::size_t Potential::segment_index(double t) const {
  if (!(t >= 0.0 && t <= length())) {
    throw DomainError("t = " + std::to_string(t) + " outside [0, " + std::to_string(length()) + "]");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& s) { return v < s.from; });
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

double Potential::operator()(double t) const { return segments_[segment_index(t)](t) + shift_; }

std::vector<double> Potential::breakpoints() const {
  std::vector<double> b;
  b.reserve(segments_.size() + 1);
  for (const auto& s : segments_) b.push_back(s.from);
  b.push_back(length());
  return b;
}

Potential Potential::shifted(double delta) const {
  Potential out = *this;
  out.shift_ += delta;
  if (half_) out.half_ = std::make_shared<const Potential>(half_->shifted(delta));
  return out;
}

double Potential::sup_abs() const {
  double m = 0.0;
  for (const auto& s : segments_) {
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = s.from + (s.to - s.from) * k / kSamples;
      m = std::max(m, std::abs(s(t) + shift_));
    }
  }
  return m;
}

double Potential::sup() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) {
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = s.from + (s.to - s.from) * k / kSamples;
      m = std::max(m, s(t) + shift_);
    }
  }
  return m;
}

double eval(const Potential& p, double t) { return p(t); }

namespace {

// Mirror image of segment s under t -> c - t.
Segment mirrored(const Segment& s, double c) {
  Segment m = s;
  m.from = c - s.to;
  m.to = c - s.from;
  m.origin = s.origin + s.direction * c;
  m.direction = -s.direction;
  return m;
}

}  // namespace

Potential even_extension(const Potential& p) {
  const double length = p.length();
  const double doubled = 2.0 * length;
  std::vector<Segment> segments(p.segments().begin(), p.segments().end());
  const auto original = p.segments();
  for (auto it = original.rbegin(); it != original.rend(); ++it) {
    Segment m = mirrored(*it, doubled);
    if (it == original.rbegin()) m.from = length;
    if (it + 1 == original.rend()) m.to = doubled;
    segments.push_back(std::move(m));
  }
  Potential out(std::move(segments), p.shift());
  out.half_ = std::make_shared<const Potential>(p);
  return out;
}

Potential reflect(const Potential& p) {
  const double length = p.length();
  std::vector<Segment> segments;
  const auto original = p.segments();
  segments.reserve(original.size());
  for (auto it = original.rbegin(); it != original.rend(); ++it) {
    Segment m = mirrored(*it, length);
    if (it == original.rbegin()) m.from = 0.0;
    if (it + 1 == original.rend()) m.to = length;
    segments.push_back(std::move(m));
  }
  return Potential(std::move(segments), p.shift());
}

Potential truncated(const Potential& p, double length) {
  if (!(length > 0.0 && length <= p.length())) throw DomainError("truncation length outside (0, L]");
  if (length == p.length()) return p;
  std::vector<Segment> segments;
  for (const auto& s : p.segments()) {
    if (s.from >= length) break;
    segments.push_back(s);
    segments.back().to = std::min(s.to, length);
  }
  return Potential(std::move(segments), p.shift());
}

}  // namespace hillgreen
