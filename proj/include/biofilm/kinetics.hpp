#pragma once
#include <array>
#include <span>

namespace biofilm {

double monod(double s, double K);

struct KineticsWG {
  double mu1 = 1.0, mu2 = 0.3;
  double K11 = 0.1, K13 = 0.5, K22 = 0.1, K23 = 0.5;
  double b1 = 0.5, b2 = 1.0;
  double k1 = 0.0, k2 = 0.0;
  double D1 = 1.0, D2 = 1.0, D3 = 1.0;
  double Y1 = 0.5, Y2 = 0.5;
  double alpha1 = 0.25, alpha2 = 0.6;
  bool beta5_with_D3 = false;

  double beta1() const { return -D1 * mu1 / Y1; }
  double beta2() const { return -D2 * mu2 / Y2; }
  double beta3() const { return D3 * mu1 * (alpha1 - Y1) / Y1; }
  double beta4() const { return D3 * b1; }
  double beta5() const { return (beta5_with_D3 ? D3 : 1.0) * mu2 * (alpha2 - Y2) / Y2; }
  double beta6() const { return D3 * b2; }
  std::array<double, 6> betas() const {
    return {beta1(), beta2(), beta3(), beta4(), beta5(), beta6()};
  }

  void validate() const;
  bool operator==(const KineticsWG&) const = default;
};

struct RateCoeffs {
  double A, A1, B, A2;
};

RateCoeffs rate_coeffs_wg(double S1, double S2, double S3, const KineticsWG& p);
std::array<double, 3> biomass_rhs_wg(const std::array<double, 3>& X,
                                     const std::array<double, 3>& S,
                                     const KineticsWG& p);
std::array<double, 3> substrate_rhs_wg(double X1, double X2, const std::array<double, 3>& S,
                                       const KineticsWG& p);
// A*X1 + B*X2, the volume production rate
double growth_rate_wg(const std::array<double, 3>& X, const std::array<double, 3>& S,
                      const KineticsWG& p);

// lambda_j = beta_j / K of the rescaled system, gamma = K23/K13
struct RescaledWG {
  std::array<double, 6> lambda;
  double gamma;
};
RescaledWG rescaled_wg(const KineticsWG& p);

enum SrbBiomass : int { kE = 0, kA = 1, kI = 2, kPr = 3, kPo = 4 };
enum SrbSubstrate : int { sE = 0, sA = 1, sO = 2, sC = 3, sAn = 4, sCat = 5 };

struct KineticsSRB {
  double muE = 1.2, muA = 0.8;
  double KE = 0.6, KA = 0.5, KO = 4.0, KI = 2.0, KPr = 0.5;
  double kE = 0.05, kA = 0.04;
  double YE = 0.4, YA = 0.3, YAC = 0.35;
  double k = 0.1, Ksp = 0.5, alpha = 0.2;
  std::array<double, 6> D0 = {1.0, 0.9, 0.8, 1.1, 0.7, 0.75};
  double XPo_bar = 0.4;
  std::array<double, 5> rho = {1.0, 1.0, 1.0, 1.0, 1.0};
  bool a3_consistent = false;

  void validate() const;
  bool operator==(const KineticsSRB&) const = default;
};

double saturation_index(double S_An, double S_Cat, double Ksp);
double diffusion_coeff(double f_Po, double D0);
std::array<double, 5> biomass_rhs_srb(std::span<const double, 5> X, std::span<const double, 6> S,
                                      const KineticsSRB& p);
std::array<double, 6> substrate_rhs_srb(std::span<const double, 5> X, std::span<const double, 6> S,
                                        const KineticsSRB& p);

}  // namespace biofilm
