#ifndef HILLGREEN_POTENTIAL_HPP_
#define HILLGREEN_POTENTIAL_HPP_

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace hillgreen {

struct ConstantPiece {
  double value = 0.0;
};

/// c0 + c1 * cos(omega * x + phase)
struct CosinePiece {
  double c0 = 0.0;
  double c1 = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

/// c[0] + c[1] x + c[2] x^2 + c[3] x^3
struct PolynomialPiece {
  std::array<double, 4> coeffs{};
};

/// Tabulated samples, linear (order 1) or monotone piecewise-cubic (order 3).
class TablePiece {
 public:
  TablePiece(std::vector<double> nodes, std::vector<double> values, int order = 3);

  double operator()(double x) const;

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  int order() const noexcept { return order_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  int order_;
};

using Piece = std::variant<ConstantPiece, CosinePiece, PolynomialPiece, TablePiece>;

double evaluate_piece(const Piece& piece, double x);

/// One analytic piece on [from, to]. The piece is evaluated at the affine
/// argument x = origin + direction * t, which lets mirrored copies share the
/// original piece without resampling.
struct Segment {
  double from = 0.0;
  double to = 0.0;
  Piece piece = ConstantPiece{};
  double origin = 0.0;
  double direction = 1.0;

  double argument(double t) const noexcept { return origin + direction * t; }
  double operator()(double t) const { return evaluate_piece(piece, argument(t)); }
};

/// Piecewise-analytic potential a(t) + shift on [0, L].
///
/// Breakpoints are exact: even extensions and reflections mirror them
/// arithmetically. Adjacent constant segments with equal value are merged.
/// Immutable after construction.
class Potential {
 public:
  explicit Potential(std::vector<Segment> segments, double shift = 0.0);

  static Potential constant(double value, double length);
  static Potential cosine(double c0, double c1, double omega, double phase, double length);

  /// a(t) + shift, right limit at breakpoints. Throws DomainError outside [0, L].
  double operator()(double t) const;

  double length() const noexcept { return segments_.back().to; }
  double shift() const noexcept { return shift_; }
  std::span<const Segment> segments() const noexcept { return segments_; }
  std::vector<double> breakpoints() const;

  /// Index of the segment used by operator() at t.
  std::size_t segment_index(double t) const;

  Potential shifted(double delta) const;

  /// Upper bound for sup |a + shift| sampled on every segment.
  double sup_abs() const;
  double sup() const;

  /// When this potential was produced by even_extension, the half it mirrors.
  const Potential* mirrored_half() const noexcept { return half_.get(); }

  friend Potential even_extension(const Potential& p);

 private:
  std::vector<Segment> segments_;
  double shift_;
  std::shared_ptr<const Potential> half_;
};

/// a(t) + shift; same as p(t).
double eval(const Potential& p, double t);

/// Even extension about t = L onto [0, 2L].
Potential even_extension(const Potential& p);

/// b(t) = a(L - t).
Potential reflect(const Potential& p);

/// Restriction of p to [0, length], 0 < length <= L.
Potential truncated(const Potential& p, double length);

}  // namespace hillgreen

#endif  // HILLGREEN_POTENTIAL_HPP_
