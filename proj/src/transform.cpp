#include "biofilm/transform.hpp"

#include <algorithm>
#include <cmath>

#include "biofilm/error.hpp"

namespace biofilm {

Grid::Grid(std::size_t n) {
  if (n < 3) throw DomainError("grid needs at least 3 nodes");
  x_.resize(n);
  h_ = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x_[i] = static_cast<double>(i) * h_;
  x_.back() = 1.0;
}

double FieldState::L() const { return std::exp(y); }

FieldState FieldState::zeros(Model m, const Grid& g) {
  FieldState s;
  s.model = m;
  s.grid = g;
  const std::size_t nx = m == Model::WG ? 3 : 5;
  const std::size_t nc = m == Model::WG ? 3 : 6;
  s.X.assign(nx, std::vector<double>(g.n(), 0.0));
  s.C.assign(nc, std::vector<double>(g.n(), 0.0));
  s.Phi.assign(nc, 0.0);
  return s;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
  return acc * h;
}

double growth_integrand(const FieldState& s, std::size_t i, const KineticsWG& p) {
  const std::array<double, 3> X{s.X[0][i], s.X[1][i], s.X[2][i]};
  const std::array<double, 3> S{std::max(s.C[0][i], 0.0), std::max(s.C[1][i], 0.0),
                                std::max(s.C[2][i], 0.0)};
  return std::exp(2.0 * s.y) * growth_rate_wg(X, S, p);
}

double growth_integrand(const FieldState& s, std::size_t i, const KineticsSRB& p) {
  std::array<double, 5> X{};
  std::array<double, 6> S{};
  for (int k = 0; k < 5; ++k) X[k] = std::max(s.X[k][i], 0.0);
  for (int k = 0; k < 6; ++k) S[k] = std::max(s.C[k][i], 0.0);
  const auto F = biomass_rhs_srb(X, S, p);
  double g = 0.0;
  for (int k = 0; k < 5; ++k) g += F[k] / p.rho[k];
  return g;
}

VelocityProfile velocity_profile_from_integrand(const Grid& g, std::span<const double> integrand) {
  const std::size_t n = g.n();
  if (integrand.size() != n) throw DomainError("integrand size does not match grid");
  VelocityProfile prof;
  prof.V.assign(n, 0.0);
  const double h = g.h();
  for (std::size_t i = 1; i < n; ++i)
    prof.V[i] = prof.V[i - 1] + 0.5 * h * (integrand[i - 1] + integrand[i]);
  prof.ydot = prof.V.back();
  prof.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.v[i] = prof.V[i] - g.x(i) * prof.ydot;
  prof.v.front() = 0.0;
  prof.v.back() = 0.0;
  return prof;
}

template <class P>
static VelocityProfile velocity_profile_impl(const FieldState& s, const P& p) {
  std::vector<double> g(s.grid.n());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = growth_integrand(s, i, p);
  return velocity_profile_from_integrand(s.grid, g);
}

VelocityProfile velocity_profile(const FieldState& s, const KineticsWG& p) {
  return velocity_profile_impl(s, p);
}
VelocityProfile velocity_profile(const FieldState& s, const KineticsSRB& p) {
  return velocity_profile_impl(s, p);
}

double map_coordinates(double value, double L, Direction dir) {
  if (!(L > 0.0)) throw DomainError("map_coordinates: L must be positive");
  return dir == Direction::ToFraction ? value / L : value * L;
}

double thickness_rate(const FieldState& s, const VelocityProfile& prof,
                      std::optional<double> detach_lambda) {
  if (!detach_lambda) return prof.ydot;
  const double lam = *detach_lambda;
  if (!(lam >= 0.0)) throw ConfigError("detachment rate lambda must be >= 0");
  // dL/dt = u(L) - lam L^2; the rescaled clock contributes two more powers of L
  const double power = s.model == Model::WG ? 3.0 : 1.0;
  return prof.ydot - lam * std::exp(power * s.y);
}

double ydot_bound(const FieldState& s, const KineticsWG& p) {
  std::vector<double> active(s.grid.n());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = s.X[0][i] + s.X[1][i];
  return std::exp(2.0 * s.y) * std::max(p.mu1, p.mu2) * trapezoid(active, s.grid.h());
}

}  // namespace biofilm
