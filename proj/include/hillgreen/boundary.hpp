#ifndef HILLGREEN_BOUNDARY_HPP_
#define HILLGREEN_BOUNDARY_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace hillgreen {

/// Two-point conditions on [0, L]. Mixed1: u'(0) = u(L) = 0. Mixed2: u(0) = u'(L) = 0.
enum class BoundaryCondition { Periodic, AntiPeriodic, Neumann, Dirichlet, Mixed1, Mixed2 };

inline constexpr std::array<BoundaryCondition, 6> kAllBoundaryConditions = {
    BoundaryCondition::Periodic, BoundaryCondition::AntiPeriodic, BoundaryCondition::Neumann,
    BoundaryCondition::Dirichlet, BoundaryCondition::Mixed1,       BoundaryCondition::Mixed2};

inline constexpr std::array<BoundaryCondition, 4> kSeparatedConditions = {
    BoundaryCondition::Neumann, BoundaryCondition::Dirichlet, BoundaryCondition::Mixed1,
    BoundaryCondition::Mixed2};

constexpr bool is_separated(BoundaryCondition bc) noexcept {
  return bc != BoundaryCondition::Periodic && bc != BoundaryCondition::AntiPeriodic;
}

/// Short tag: P, A, N, D, M1, M2.
constexpr std::string_view tag(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::Periodic: return "P";
    case BoundaryCondition::AntiPeriodic: return "A";
    case BoundaryCondition::Neumann: return "N";
    case BoundaryCondition::Dirichlet: return "D";
    case BoundaryCondition::Mixed1: return "M1";
    case BoundaryCondition::Mixed2: return "M2";
  }
  return "?";
}

/// Accepts the short tags and the lowercase names ("periodic", "mixed1", ...).
inline std::optional<BoundaryCondition> parse_boundary_condition(std::string_view s) {
  for (BoundaryCondition bc : kAllBoundaryConditions) {
    if (s == tag(bc)) return bc;
  }
  if (s == "periodic") return BoundaryCondition::Periodic;
  if (s == "antiperiodic" || s == "anti-periodic") return BoundaryCondition::AntiPeriodic;
  if (s == "neumann") return BoundaryCondition::Neumann;
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  if (s == "mixed1") return BoundaryCondition::Mixed1;
  if (s == "mixed2") return BoundaryCondition::Mixed2;
  return std::nullopt;
}

}  // namespace hillgreen

#endif  // HILLGREEN_BOUNDARY_HPP_
