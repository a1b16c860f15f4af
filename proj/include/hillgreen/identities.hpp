#ifndef HILLGREEN_IDENTITIES_HPP_
#define HILLGREEN_IDENTITIES_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hillgreen/greens.hpp"

namespace hillgreen {

/// One entry of the decomposition catalog.
///
/// Notation: a on [0, T], e = even extension on [0, 2T], ee = double extension
/// on [0, 4T], b(t) = a(T - t). All identities hold on [0, T]^2 except REFL,
/// which lives on [0, 2T]^2.
struct IdentityInfo {
  std::string_view id;
  std::string_view statement;
};

inline constexpr std::array<IdentityInfo, 20> kIdentityCatalog = {{
    {"NP", "G_N[a,T](t,s) = G_P[e,2T](t,s) + G_P[e,2T](t,2T-s)"},
    {"NP2", "G_N[a,T](t,s) = G_P[e,2T](t,s) + G_P[e,2T](2T-t,s)"},
    {"NN", "G_N[a,T](t,s) = G_N[e,2T](t,s) + G_N[e,2T](2T-t,s)"},
    {"DP", "G_D[a,T](t,s) = G_P[e,2T](t,s) - G_P[e,2T](2T-t,s)"},
    {"DD", "G_D[a,T](t,s) = G_D[e,2T](t,s) - G_D[e,2T](2T-t,s)"},
    {"SUM", "G_N[a,T] + G_D[a,T] = 2 G_P[e,2T](t,s)"},
    {"DIF", "G_N[a,T] - G_D[a,T] = 2 G_P[e,2T](2T-t,s)"},
    {"M1A", "G_M1[a,T](t,s) = G_A[e,2T](t,s) - G_A[e,2T](2T-t,s)"},
    {"M1N", "G_M1[a,T](t,s) = G_N[e,2T](t,s) - G_N[e,2T](2T-t,s)"},
    {"M2A", "G_M2[a,T](t,s) = G_A[e,2T](t,s) + G_A[e,2T](2T-t,s)"},
    {"M2D", "G_M2[a,T](t,s) = G_D[e,2T](t,s) + G_D[e,2T](2T-t,s)"},
    {"MSUM", "G_M2[a,T] + G_M1[a,T] = 2 G_A[e,2T](t,s)"},
    {"MDIF", "G_M2[a,T] - G_M1[a,T] = 2 G_A[e,2T](2T-t,s)"},
    {"NM1", "G_N[a,T] + G_M1[a,T] = 2 G_N[e,2T](t,s)"},
    {"NM1D", "G_N[a,T] - G_M1[a,T] = 2 G_N[e,2T](2T-t,s)"},
    {"M2DD", "G_M2[a,T] + G_D[a,T] = 2 G_D[e,2T](t,s)"},
    {"M2DDD", "G_M2[a,T] - G_D[a,T] = 2 G_D[e,2T](2T-t,s)"},
    {"ALL4", "G_N + G_D + G_M1 + G_M2 = 4 G_P[ee,4T](t,s)"},
    {"REFL", "G_P[e,2T](t,s) = G_P[e,2T](2T-t,2T-s) on [0,2T]^2"},
    {"MREFL", "G_M1[a,T](T-t,T-s) = G_M2[b,T](t,s)"},
}};

inline constexpr double kIdentityTolerance = 1e-6;

struct IdentityReport {
  std::string id;
  int n = 0;
  double residual = 0.0;   ///< sup |LHS - RHS| over the grid
  double lhs_scale = 0.0;  ///< sup |LHS|
  bool pass = false;       ///< residual <= tol * max(1, lhs_scale)
  bool skipped = false;
  std::string reason;      ///< why the entry was skipped
};

bool is_identity(std::string_view id);

/// Evaluates both sides of one catalog identity on the common grid
/// t_i = s_i = T i / n. Kernels on [0, 2T] and [0, 4T] are sampled with 2n and
/// 4n intervals so reflected arguments fall on nodes.
///
/// p is restricted to [0, T]. Throws ResonanceError naming the first resonant
/// constituent and DomainError for an unknown id.
IdentityReport verify_identity(std::string_view id, const Potential& p, double T, double lambda,
                               int n = kDefaultGrid, double tol = kIdentityTolerance);

/// Runs the whole catalog. Entries with a resonant constituent are returned
/// with skipped = true and the resonant problem in `reason`.
std::vector<IdentityReport> verify_all(const Potential& p, double T, double lambda, int n = kDefaultGrid,
                                       double tol = kIdentityTolerance);

nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const std::vector<IdentityReport>& reports);

}  // namespace hillgreen

#endif  // HILLGREEN_IDENTITIES_HPP_
