#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "kneser/boundary.hpp"
#include "kneser/poisson.hpp"
#include "kneser/qc.hpp"

namespace kneser {

// Image of the polar grid under w. Vertex 0 is the centre; ring i >= 1,
// angle j is vertex 1 + (i - 1) * angular + j. Ring `radial` lies on the
// unit circle and carries the boundary values F.
struct MappedGrid {
  PolarGrid grid;
  std::vector<cplx> vertices;
  // Cells list their vertices counter-clockwise in the domain; the inner
  // ring holds triangles, stored with the centre repeated.
  std::vector<std::array<std::size_t, 4>> cells;
  std::vector<double> jacobian;  // at interior vertices, same numbering
};

MappedGrid map_grid(const HarmonicExtension& w, const BoundaryMap& map, const PolarGrid& grid);

// Sign of the orientation of (a, b, c), exact: a floating-point filter
// with a rational fallback.
int orientation(cplx a, cplx b, cplx c);
// Segments [a, b] and [c, d] cross at a single interior point of both.
bool segments_cross(cplx a, cplx b, cplx c, cplx d);
// p lies in the open region bounded by the closed polygon.
bool strictly_inside(cplx p, const std::vector<cplx>& polygon);
// Two polygons overlap in a set with interior: a proper edge crossing or a
// vertex strictly inside the other polygon.
bool polygons_overlap(const std::vector<cplx>& a, const std::vector<cplx>& b);

struct CollisionPair {
  std::size_t first = 0;
  std::size_t second = 0;
  std::vector<cplx> first_polygon;
  std::vector<cplx> second_polygon;
};

struct InjectivityResult {
  bool pass = true;
  std::size_t collisions = 0;
  std::vector<CollisionPair> witnesses;
};

// Overlap test of every pair of cells sharing no vertex, with a uniform
// spatial hash over the cells' bounding boxes.
InjectivityResult check_injectivity(const MappedGrid& mapped, std::size_t max_witnesses = 8);

enum class Verdict { Diffeomorphism, FoldDetected, Inconclusive };

std::string to_string(Verdict verdict);

struct DiffeoVerdict {
  double t_min = 0.0;
  double t_argmin = 0.0;
  double t_sup = 0.0;  // max |T|
  double t_tolerance = 0.0;
  double t_cross_error = 0.0;
  bool boundary_ok = false;
  double interior_jacobian_min = 0.0;
  cplx interior_jacobian_argmin;
  InjectivityResult injectivity;
  Verdict verdict = Verdict::Inconclusive;
  std::size_t n = 0;
  PolarGrid grid;
};

// t_rel_tol sets the inconclusive band |t_min| <= t_rel_tol * max |T|.
DiffeoVerdict verify_diffeomorphism(const BoundaryMap& map, std::size_t n, const PolarGrid& grid,
                                    double t_rel_tol = 1e-6);

}  // namespace kneser
