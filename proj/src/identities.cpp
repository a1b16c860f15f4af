#include "hillgreen/identities.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "hillgreen/io.hpp"
#include "hillgreen/parallel.hpp"

namespace hillgreen {

namespace {

// Which potential and interval a constituent kernel lives on.
enum class Domain { Half, Extended, DoubleExtended, Reflected };

struct KernelKey {
  Domain domain;
  BoundaryCondition bc;
  auto operator<=>(const KernelKey&) const = default;
};

class KernelSet {
 public:
  KernelSet(const Potential& a, double T, double lambda, int n, double tol)
      : a_(truncated(a, T)),
        e_(even_extension(a_)),
        ee_(even_extension(e_)),
        b_(reflect(a_)),
        T_(T),
        lambda_(lambda),
        n_(n),
        tol_(tol) {}

  // Builds the requested kernels concurrently; resonant ones are recorded.
  void prepare(const std::vector<KernelKey>& keys) {
    std::vector<KernelKey> todo;
    for (const auto& k : keys) {
      if (!kernels_.count(k) && !failures_.count(k) && std::find(todo.begin(), todo.end(), k) == todo.end()) {
        todo.push_back(k);
      }
    }
    std::vector<std::optional<GreensFunction>> built(todo.size());
    std::vector<std::pair<std::string, double>> failed(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) {
      try {
        built[i] = build(todo[i]);
      } catch (const ResonanceError& e) {
        failed[i] = {e.problem(), e.determinant()};
      }
    });
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (built[i]) {
        kernels_.emplace(todo[i], std::move(*built[i]));
      } else {
        failures_.emplace(todo[i], failed[i]);
      }
    }
  }

  // First resonant constituent among keys, if any.
  std::optional<std::pair<std::string, double>> failure(const std::vector<KernelKey>& keys) const {
    for (const auto& k : keys) {
      if (auto it = failures_.find(k); it != failures_.end()) return it->second;
    }
    return std::nullopt;
  }

  const GreensFunction& get(Domain d, BoundaryCondition bc) const { return kernels_.at({d, bc}); }

  double T() const noexcept { return T_; }
  int n() const noexcept { return n_; }

 private:
  GreensFunction build(const KernelKey& k) const {
    switch (k.domain) {
      case Domain::Half: return build_green(a_, lambda_, T_, k.bc, n_, tol_);
      case Domain::Extended: return build_green(e_, lambda_, 2 * T_, k.bc, 2 * n_, tol_);
      case Domain::DoubleExtended: return build_green(ee_, lambda_, 4 * T_, k.bc, 4 * n_, tol_);
      case Domain::Reflected: return build_green(b_, lambda_, T_, k.bc, n_, tol_);
    }
    throw DomainError("unknown kernel domain");
  }

  Potential a_, e_, ee_, b_;
  double T_, lambda_;
  int n_;
  double tol_;
  std::map<KernelKey, GreensFunction> kernels_;
  std::map<KernelKey, std::pair<std::string, double>> failures_;
};

using BC = BoundaryCondition;

struct Definition {
  std::vector<KernelKey> kernels;
  // (lhs, rhs) at grid node (i, j).
  std::function<std::pair<double, double>(const KernelSet&, int, int)> sides;
  bool doubled_grid = false;  // REFL runs over [0, 2T]^2
};

Definition definition(std::string_view id) {
  using D = Domain;
  const KernelKey N{D::Half, BC::Neumann}, Dh{D::Half, BC::Dirichlet}, M1{D::Half, BC::Mixed1},
      M2{D::Half, BC::Mixed2};
  const KernelKey P2{D::Extended, BC::Periodic}, A2{D::Extended, BC::AntiPeriodic}, N2{D::Extended, BC::Neumann},
      D2{D::Extended, BC::Dirichlet};
  const KernelKey P4{D::DoubleExtended, BC::Periodic}, M2b{D::Reflected, BC::Mixed2};

  // Half-interval kernels use the n grid; extended ones the 2n grid, where
  // node 2n - i is the reflection 2T - t_i.
  auto half = [](const KernelSet& k, BC bc, int i, int j) { return k.get(D::Half, bc).at(i, j); };
  auto ext = [](const KernelSet& k, BC bc, int i, int j) { return k.get(D::Extended, bc).at(i, j); };
  auto ext_mirror = [](const KernelSet& k, BC bc, int i, int j) {
    return k.get(D::Extended, bc).at(2 * k.n() - i, j);
  };

  // LHS = lhs(t, s); RHS = x(t, s) + sign * x(2T - t, s).
  auto extension_pair = [=](KernelKey lhs, KernelKey rhs, double sign) {
    return Definition{{lhs, rhs}, [=](const KernelSet& k, int i, int j) {
                        return std::pair{half(k, lhs.bc, i, j),
                                         ext(k, rhs.bc, i, j) + sign * ext_mirror(k, rhs.bc, i, j)};
                      }};
  };
  // LHS = g1 + sign * g2; RHS = 2 x(t, s) or 2 x(2T - t, s).
  auto combined = [=](KernelKey g1, KernelKey g2, double sign, KernelKey rhs, bool mirrored) {
    return Definition{{g1, g2, rhs}, [=](const KernelSet& k, int i, int j) {
                        const double right = mirrored ? ext_mirror(k, rhs.bc, i, j) : ext(k, rhs.bc, i, j);
                        return std::pair{half(k, g1.bc, i, j) + sign * half(k, g2.bc, i, j), 2 * right};
                      }};
  };

  if (id == "NP") {
    return {{N, P2}, [=](const KernelSet& k, int i, int j) {
              const int m = 2 * k.n();
              const auto& g = k.get(D::Extended, BC::Periodic);
              return std::pair{half(k, BC::Neumann, i, j), g.at(i, j) + g.at(i, m - j)};
            }};
  }
  if (id == "NP2") return extension_pair(N, P2, 1.0);
  if (id == "NN") return extension_pair(N, N2, 1.0);
  if (id == "DP") return extension_pair(Dh, P2, -1.0);
  if (id == "DD") return extension_pair(Dh, D2, -1.0);
  if (id == "SUM") return combined(N, Dh, 1.0, P2, false);
  if (id == "DIF") return combined(N, Dh, -1.0, P2, true);
  if (id == "M1A") return extension_pair(M1, A2, -1.0);
  if (id == "M1N") return extension_pair(M1, N2, -1.0);
  if (id == "M2A") return extension_pair(M2, A2, 1.0);
  if (id == "M2D") return extension_pair(M2, D2, 1.0);
  if (id == "MSUM") return combined(M2, M1, 1.0, A2, false);
  if (id == "MDIF") return combined(M2, M1, -1.0, A2, true);
  if (id == "NM1") return combined(N, M1, 1.0, N2, false);
  if (id == "NM1D") return combined(N, M1, -1.0, N2, true);
  if (id == "M2DD") return combined(M2, Dh, 1.0, D2, false);
  if (id == "M2DDD") return combined(M2, Dh, -1.0, D2, true);
  if (id == "ALL4") {
    return {{N, Dh, M1, M2, P4}, [=](const KernelSet& k, int i, int j) {
              const double lhs = half(k, BC::Neumann, i, j) + half(k, BC::Dirichlet, i, j) +
                                 half(k, BC::Mixed1, i, j) + half(k, BC::Mixed2, i, j);
              return std::pair{lhs, 4 * k.get(D::DoubleExtended, BC::Periodic).at(i, j)};
            }};
  }
  if (id == "REFL") {
    return {{P2},
            [=](const KernelSet& k, int i, int j) {
              const int m = 2 * k.n();
              const auto& g = k.get(D::Extended, BC::Periodic);
              return std::pair{g.at(i, j), g.at(m - i, m - j)};
            },
            true};
  }
  if (id == "MREFL") {
    return {{M1, M2b}, [=](const KernelSet& k, int i, int j) {
              const int n = k.n();
              return std::pair{half(k, BC::Mixed1, n - i, n - j), k.get(D::Reflected, BC::Mixed2).at(i, j)};
            }};
  }
  throw DomainError("unknown identity '" + std::string(id) + "'");
}

IdentityReport evaluate(std::string_view id, const Definition& def, const KernelSet& kernels, double tol) {
  IdentityReport r;
  r.id = std::string(id);
  r.n = kernels.n();
  const int extent = def.doubled_grid ? 2 * kernels.n() : kernels.n();
  for (int i = 0; i <= extent; ++i) {
    for (int j = 0; j <= extent; ++j) {
      const auto [lhs, rhs] = def.sides(kernels, i, j);
      r.residual = std::max(r.residual, std::abs(lhs - rhs));
      r.lhs_scale = std::max(r.lhs_scale, std::abs(lhs));
    }
  }
  r.pass = r.residual <= tol * std::max(1.0, r.lhs_scale);
  return r;
}

void check_inputs(const Potential& p, double T, int n, double tol) {
  if (!(T > 0.0 && T <= p.length())) throw DomainError("T must lie in (0, L]");
  if (n < 1) throw DomainError("grid size must be at least 1");
  if (!(tol > 0.0)) throw DomainError("identity tolerance must be positive");
}

}  // namespace

bool is_identity(std::string_view id) {
  return std::any_of(kIdentityCatalog.begin(), kIdentityCatalog.end(),
                     [id](const IdentityInfo& info) { return info.id == id; });
}

IdentityReport verify_identity(std::string_view id, const Potential& p, double T, double lambda, int n,
                               double tol) {
  check_inputs(p, T, n, tol);
  const Definition def = definition(id);
  KernelSet kernels(p, T, lambda, n, kDefaultTolerance);
  kernels.prepare(def.kernels);
  if (auto failed = kernels.failure(def.kernels)) {
    throw ResonanceError(failed->first, failed->second);
  }
  return evaluate(id, def, kernels, tol);
}

std::vector<IdentityReport> verify_all(const Potential& p, double T, double lambda, int n, double tol) {
  check_inputs(p, T, n, tol);
  KernelSet kernels(p, T, lambda, n, kDefaultTolerance);
  std::vector<Definition> defs;
  std::vector<KernelKey> keys;
  for (const auto& info : kIdentityCatalog) {
    defs.push_back(definition(info.id));
    keys.insert(keys.end(), defs.back().kernels.begin(), defs.back().kernels.end());
  }
  kernels.prepare(keys);
  std::vector<IdentityReport> reports;
  for (std::size_t k = 0; k < kIdentityCatalog.size(); ++k) {
    const auto id = kIdentityCatalog[k].id;
    if (auto failed = kernels.failure(defs[k].kernels)) {
      IdentityReport r;
      r.id = std::string(id);
      r.n = n;
      r.skipped = true;
      r.reason = "resonant " + failed->first;
      reports.push_back(std::move(r));
      continue;
    }
    reports.push_back(evaluate(id, defs[k], kernels, tol));
  }
  return reports;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j{{"id", r.id},           {"n", r.n},         {"residual", r.residual},
                   {"lhs_scale", r.lhs_scale}, {"pass", r.pass}, {"skipped", r.skipped}};
  if (r.skipped) j["reason"] = r.reason;
  return j;
}

nlohmann::json to_json(const std::vector<IdentityReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

}  // namespace hillgreen
