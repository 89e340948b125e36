#include "kneser/verify.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kneser/error.hpp"

namespace kneser {

namespace {

using boost::multiprecision::cpp_rational;

// Shewchuk's first-stage orient2d error bound, doubled for margin.
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;

int exact_orientation(cplx a, cplx b, cplx c) {
  const cpp_rational ax(a.real()), ay(a.imag()), bx(b.real()), by(b.imag()), cx(c.real()), cy(c.imag());
  const cpp_rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

struct Box {
  double x0, y0, x1, y1;
  bool meets(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
};

std::vector<cplx> polygon_of(const MappedGrid& m, std::size_t cell) {
  std::vector<cplx> poly;
  const auto& ids = m.cells[cell];
  for (std::size_t k = 0; k < 4; ++k) {
    if (k > 0 && ids[k] == ids[k - 1]) continue;
    if (k == 3 && ids[k] == ids[0]) continue;
    poly.push_back(m.vertices[ids[k]]);
  }
  return poly;
}

bool share_vertex(const std::array<std::size_t, 4>& a, const std::array<std::size_t, 4>& b) {
  for (std::size_t x : a) {
    for (std::size_t y : b) {
      if (x == y) return true;
    }
  }
  return false;
}

}  // namespace

int orientation(cplx a, cplx b, cplx c) {
  const double left = (a.real() - c.real()) * (b.imag() - c.imag());
  const double right = (a.imag() - c.imag()) * (b.real() - c.real());
  const double det = left - right;
  const double bound = kOrientBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orientation(a, b, c);
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  if (o1 * o2 >= 0) return false;
  const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  return o3 * o4 < 0;
}

bool strictly_inside(cplx p, const std::vector<cplx>& polygon) {
  int winding = 0;
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = polygon[k], b = polygon[(k + 1) % n];
    const int o = orientation(a, b, p);
    if (o == 0 && p.real() >= std::min(a.real(), b.real()) && p.real() <= std::max(a.real(), b.real()) &&
        p.imag() >= std::min(a.imag(), b.imag()) && p.imag() <= std::max(a.imag(), b.imag())) {
      return false;  // on the boundary
    }
    if (a.imag() <= p.imag()) {
      if (b.imag() > p.imag() && o > 0) ++winding;
    } else if (b.imag() <= p.imag() && o < 0) {
      --winding;
    }
  }
  return winding != 0;
}

bool polygons_overlap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
    }
  }
  for (cplx p : a) {
    if (strictly_inside(p, b)) return true;
  }
  for (cplx p : b) {
    if (strictly_inside(p, a)) return true;
  }
  return false;
}

MappedGrid map_grid(const HarmonicExtension& w, const BoundaryMap& map, const PolarGrid& grid) {
  if (grid.radial < 2 || grid.angular < 3) throw Error(ErrorCode::InvalidSpec, "grid must be at least 2x3");
  MappedGrid m;
  m.grid = grid;
  const std::size_t rings = grid.radial, na = grid.angular;
  m.vertices.reserve(1 + rings * na);
  m.jacobian.reserve(1 + (rings - 1) * na);

  const Derivatives d0 = w.derivatives(0.0);
  m.vertices.push_back(w.value(0.0));
  m.jacobian.push_back(std::norm(d0.w_z) - std::norm(d0.w_zbar));
  for (std::size_t i = 1; i < rings; ++i) {
    const auto ring = w.ring(grid.radius(i), na);
    for (std::size_t j = 0; j < na; ++j) {
      m.vertices.push_back(ring.value[j]);
      m.jacobian.push_back(std::norm(ring.w_z[j]) - std::norm(ring.w_zbar[j]));
    }
  }
  for (std::size_t j = 0; j < na; ++j) m.vertices.push_back(map.value(grid.angle(j)));

  const auto vid = [na](std::size_t i, std::size_t j) { return i == 0 ? std::size_t{0} : 1 + (i - 1) * na + j % na; };
  for (std::size_t i = 0; i < rings; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return m;
}

InjectivityResult check_injectivity(const MappedGrid& m, std::size_t max_witnesses) {
  const std::size_t nc = m.cells.size();
  std::vector<Box> box(nc);
  Box all{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < nc; ++c) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t v : m.cells[c]) {
      const cplx p = m.vertices[v];
      b.x0 = std::min(b.x0, p.real());
      b.y0 = std::min(b.y0, p.imag());
      b.x1 = std::max(b.x1, p.real());
      b.y1 = std::max(b.y1, p.imag());
    }
    box[c] = b;
    all.x0 = std::min(all.x0, b.x0);
    all.y0 = std::min(all.y0, b.y0);
    all.x1 = std::max(all.x1, b.x1);
    all.y1 = std::max(all.y1, b.y1);
  }
  if (!std::isfinite(all.x0 + all.x1 + all.y0 + all.y1)) {
    throw Error(ErrorCode::NumericalGuard, "non-finite mapped grid");
  }

  const std::size_t g = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(nc)))));
  const double wx = std::max(all.x1 - all.x0, 1e-300) / static_cast<double>(g);
  const double wy = std::max(all.y1 - all.y0, 1e-300) / static_cast<double>(g);
  const auto cx = [&](double x) {
    return std::min(g - 1, static_cast<std::size_t>(std::max(0.0, std::floor((x - all.x0) / wx))));
  };
  const auto cy = [&](double y) {
    return std::min(g - 1, static_cast<std::size_t>(std::max(0.0, std::floor((y - all.y0) / wy))));
  };
  std::vector<std::vector<std::uint32_t>> bucket(g * g);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t ix = cx(box[c].x0); ix <= cx(box[c].x1); ++ix) {
      for (std::size_t iy = cy(box[c].y0); iy <= cy(box[c].y1); ++iy) {
        bucket[ix * g + iy].push_back(static_cast<std::uint32_t>(c));
      }
    }
  }

  InjectivityResult out;
  for (std::size_t b = 0; b < bucket.size(); ++b) {
    const auto& list = bucket[b];
    for (std::size_t p = 0; p < list.size(); ++p) {
      for (std::size_t q = p + 1; q < list.size(); ++q) {
        const std::size_t u = list[p], v = list[q];
        if (!box[u].meets(box[v])) continue;
        // Each pair is tested only in the bucket holding the lower corner
        // of its box intersection.
        const std::size_t owner = cx(std::max(box[u].x0, box[v].x0)) * g + cy(std::max(box[u].y0, box[v].y0));
        if (owner != b) continue;
        if (share_vertex(m.cells[u], m.cells[v])) continue;
        const auto pu = polygon_of(m, u), pv = polygon_of(m, v);
        if (!polygons_overlap(pu, pv)) continue;
        ++out.collisions;
        if (out.witnesses.size() < max_witnesses) {
          out.witnesses.push_back({std::min(u, v), std::max(u, v), u < v ? pu : pv, u < v ? pv : pu});
        }
      }
    }
  }
  out.pass = out.collisions == 0;
  return out;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Diffeomorphism:
      return "diffeomorphism";
    case Verdict::FoldDetected:
      return "fold-detected";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DiffeoVerdict verify_diffeomorphism(const BoundaryMap& map, std::size_t n, const PolarGrid& grid, double t_rel_tol) {
  DiffeoVerdict out;
  out.n = n;
  out.grid = grid;
  const TOperatorResult t = t_field(map, n, true);
  out.t_min = t.min;
  out.t_argmin = t.argmin;
  out.t_sup = std::max(std::abs(t.min), std::abs(t.max));
  out.t_tolerance = t_rel_tol * out.t_sup;
  out.t_cross_error = t.estimated_error;
  out.boundary_ok = t.min > out.t_tolerance;

  const HarmonicExtension w = HarmonicExtension::from_map(map, n);
  const MappedGrid mapped = map_grid(w, map, grid);
  double jmax = 0.0;
  out.interior_jacobian_min = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < mapped.jacobian.size(); ++v) {
    const double j = mapped.jacobian[v];
    jmax = std::max(jmax, std::abs(j));
    if (j < out.interior_jacobian_min) {
      out.interior_jacobian_min = j;
      out.interior_jacobian_argmin =
          v == 0 ? cplx(0.0) : std::polar(grid.radius(1 + (v - 1) / grid.angular), grid.angle((v - 1) % grid.angular));
    }
  }
  out.injectivity = check_injectivity(mapped);

  const bool negative_j = out.interior_jacobian_min < -1e-12 * jmax;
  if (!out.injectivity.pass || negative_j) {
    out.verdict = Verdict::FoldDetected;
  } else if (out.boundary_ok && out.interior_jacobian_min > 0.0) {
    out.verdict = Verdict::Diffeomorphism;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

}  // namespace kneser
