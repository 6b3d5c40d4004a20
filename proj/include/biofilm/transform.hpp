#pragma once
#include <optional>
#include <span>
#include <vector>

#include "biofilm/kinetics.hpp"

namespace biofilm {

class Grid {
 public:
  explicit Grid(std::size_t n = 201);
  std::size_t n() const { return x_.size(); }
  double h() const { return h_; }
  double x(std::size_t i) const { return x_[i]; }
  const std::vector<double>& nodes() const { return x_; }
  bool operator==(const Grid& o) const { return x_.size() == o.x_.size(); }

 private:
  std::vector<double> x_;
  double h_;
};

enum class Model { WG, SRB };

struct FieldState {
  Model model = Model::WG;
  Grid grid;
  double t = 0.0;
  double y = 0.0;  // log L
  std::vector<std::vector<double>> X;
  std::vector<std::vector<double>> C;
  std::vector<double> Phi;

  double L() const;
  static FieldState zeros(Model m, const Grid& g);
};

struct VelocityProfile {
  std::vector<double> V;
  std::vector<double> v;
  double ydot = 0.0;
};

double growth_integrand(const FieldState& s, std::size_t i, const KineticsWG& p);
double growth_integrand(const FieldState& s, std::size_t i, const KineticsSRB& p);

VelocityProfile velocity_profile_from_integrand(const Grid& g, std::span<const double> integrand);
VelocityProfile velocity_profile(const FieldState& s, const KineticsWG& p);
VelocityProfile velocity_profile(const FieldState& s, const KineticsSRB& p);

enum class Direction { ToFraction, ToLength };
double map_coordinates(double value, double L, Direction dir);

// WG runs on the rescaled clock t* = t/L^2, SRB on physical time
double thickness_rate(const FieldState& s, const VelocityProfile& prof,
                      std::optional<double> detach_lambda);

// trapezoid rule on a uniform grid
double trapezoid(std::span<const double> f, double h);

// |ydot| <= e^{2y} max(mu1,mu2) int (X1+X2)
double ydot_bound(const FieldState& s, const KineticsWG& p);

}  // namespace biofilm
