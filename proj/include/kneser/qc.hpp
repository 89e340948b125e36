#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kneser/correspondence.hpp"
#include "kneser/poisson.hpp"

namespace kneser {

struct BoundaryNorms {
  double sup_fprime = 0.0;   // max |F'| on the grid
  double sup_hfprime = 0.0;  // max |H(F')|
  double l_f = 0.0;          // min (|w_z| - |w_zbar|) at r = 1, negative if w reverses orientation
  double argmin_l = 0.0;
  double max_mu = 0.0;       // max |w_zbar / w_z| at r = 1
  std::size_t n = 0;
};

// Boundary w_z, w_zbar from (w_tau, w_r) = (F', H(F')) at r = 1.
cplx boundary_wz(double tau, cplx fprime, cplx hfprime);
cplx boundary_wzbar(double tau, cplx fprime, cplx hfprime);

// Grid extrema at n nodes.
BoundaryNorms boundary_norms(const BoundaryMap& map, std::size_t n);

struct RefinementStep {
  std::size_t n = 0;
  double sup_fprime = 0.0;
  double sup_hfprime = 0.0;
  double l_f = 0.0;
};

struct RefinedNorms {
  BoundaryNorms norms;
  std::vector<RefinementStep> trail;
  bool converged = false;
  // sup |H(F')| keeps growing by comparable steps under doubling
  bool hilbert_unbounded = false;
  bool fprime_unbounded = false;
};

// Doubles n from n0 until every extremum moves by less than tol, at most up to n_max.
RefinedNorms refine_boundary_norms(const BoundaryMap& map, std::size_t n0, double tol = 1e-4,
                                   std::size_t n_max = 32768);

// Throws DegenerateBoundary when l_F <= threshold.
void require_nondegenerate(const BoundaryNorms& norms, double threshold = 1e-8);

// S = (|F'|^2 + |H(F')|^2) / (2 l^2)
double composite_s(double sup_fprime, double sup_hfprime, double l_f);
// K = sqrt(|F'|^2 + |H(F')|^2 - l^2) / l. Throws ZeroLowerBound for l <= 0.
double qc_constant(double sup_fprime, double sup_hfprime, double l_f);
// (S - 1) / (S + sqrt(2S - 1)). Throws SBelowOne for S < 1.
double mu_bound(double s);

struct PolarGrid {
  std::size_t radial = 64;
  std::size_t angular = 256;
  // Radii i / radial for i < radial; angles 2pi j / angular.
  double radius(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(radial); }
  double angle(std::size_t j) const;
};

struct DilatationField {
  PolarGrid grid;
  std::vector<double> mu;  // row-major, radius outer
  double max = 0.0;
  cplx argmax;
};

// mu(z) = |w_zbar / w_z| on the grid. Throws VanishingDerivative when w_z
// is numerically zero.
DilatationField dilatation_field(const HarmonicExtension& w, const PolarGrid& grid);

enum class QcVerdict { Qc, NotQc, Inconclusive };

std::string to_string(QcVerdict verdict);

struct QcTolerances {
  double not_qc = 1e-8;
  double inconclusive = 1e-4;
  double refine = 1e-4;
  double mu_slack = 1e-6;
};

struct QcReport {
  double sup_fprime = 0.0;
  double sup_hfprime = 0.0;
  double l_f = 0.0;
  std::optional<double> s;
  std::optional<double> k_estimate;
  std::optional<double> k_from_s;  // sqrt(2S - 1)
  std::optional<double> mu_bound;
  double mu_max_boundary = 0.0;
  double mu_max_interior = 0.0;
  QcVerdict verdict = QcVerdict::Inconclusive;
  std::size_t n = 0;
  PolarGrid grid;
  std::vector<RefinementStep> trail;
  bool refinement_converged = false;
  bool c2_declared = true;
  double alpha = 1.0;
  std::vector<std::string> notes;
  // Non-empty when a consistency guard tripped (interior mu above the bound).
  std::vector<std::string> guards;
};

QcReport qc_verdict(const BoundaryMap& map, std::size_t n, const PolarGrid& grid, const QcTolerances& tol = {});

}  // namespace kneser
