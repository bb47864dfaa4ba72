#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "csl/error.hpp"
#include <Eigen/Geometry>

#include "csl/mesh.hpp"

namespace csl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Triangulates the band between two closed rings of vertices. Both rings list
/// angles increasing from a start value in [0, 2*pi / n).
void stitch_rings(const std::vector<int>& inner, const std::vector<double>& inner_angle,
                  const std::vector<int>& outer, const std::vector<double>& outer_angle,
                  std::vector<Triangle>& out) {
  const std::size_t ni = inner.size();
  const std::size_t no = outer.size();
  auto next_angle = [](const std::vector<double>& a, std::size_t i) {
    return i + 1 < a.size() ? a[i + 1] : a[0] + kTwoPi;
  };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ni || j < no) {
    bool advance_outer;
    if (i == ni) {
      advance_outer = true;
    } else if (j == no) {
      advance_outer = false;
    } else {
      advance_outer = next_angle(outer_angle, j) <= next_angle(inner_angle, i);
    }
    int a = inner[i % ni];
    int b = outer[j % no];
    if (advance_outer) {
      out.push_back({a, b, outer[(j + 1) % no]});
      ++j;
    } else {
      out.push_back({a, b, inner[(i + 1) % ni]});
      ++i;
    }
  }
}

/// Flips planar triangles to counter-clockwise order.
void orient_ccw(const Eigen::MatrixXd& v, std::vector<Triangle>& tris) {
  for (auto& t : tris) {
    double ux = v(t[1], 0) - v(t[0], 0);
    double uy = v(t[1], 1) - v(t[0], 1);
    double wx = v(t[2], 0) - v(t[0], 0);
    double wy = v(t[2], 1) - v(t[0], 1);
    if (ux * wy - uy * wx < 0.0) std::swap(t[1], t[2]);
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

}  // namespace

Mesh generate_disk(double radius, int resolution) {
  require(radius > 0.0 && std::isfinite(radius), "disk radius must be positive");
  require(resolution >= 1, "disk resolution must be >= 1");

  const int n = resolution;
  const int num_vertices = 1 + 3 * n * (n + 1) / 2;
  Eigen::MatrixXd v(num_vertices, 2);
  v.row(0) << 0.0, 0.0;

  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(3 * n * n));

  std::vector<int> prev_ids{0};
  std::vector<double> prev_angles{0.0};
  int next = 1;
  for (int ring = 1; ring <= n; ++ring) {
    const int count = 3 * ring;
    const double r = radius * ring / n;
    std::vector<int> ids(count);
    std::vector<double> angles(count);
    for (int k = 0; k < count; ++k) {
      double theta = kTwoPi * k / count;
      ids[k] = next;
      angles[k] = theta;
      v.row(next) << r * std::cos(theta), r * std::sin(theta);
      ++next;
    }
    if (ring == 1) {
      for (int k = 0; k < count; ++k) tris.push_back({0, ids[k], ids[(k + 1) % count]});
    } else {
      stitch_rings(prev_ids, prev_angles, ids, angles, tris);
    }
    prev_ids = std::move(ids);
    prev_angles = std::move(angles);
  }
  orient_ccw(v, tris);
  return Mesh(std::move(v), std::move(tris), "disk", 1);
}

Mesh generate_annulus(double r_in, double r_out, int resolution) {
  require(r_in > 0.0 && r_in < r_out && std::isfinite(r_out), "annulus needs 0 < r_in < r_out");
  require(resolution >= 1, "annulus resolution must be >= 1");

  const int segments = 3 * resolution;
  const int layers = std::max(1, static_cast<int>(std::lround(resolution * (r_out - r_in) / r_out)));
  const int rings = layers + 1;
  Eigen::MatrixXd v(rings * segments, 2);
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * layers * segments));

  std::vector<int> prev_ids;
  std::vector<double> prev_angles;
  for (int ring = 0; ring < rings; ++ring) {
    const double r = r_in + (r_out - r_in) * ring / layers;
    // Interior rings are staggered by half a segment; boundary rings are not.
    const bool stagger = (ring % 2 == 1) && ring != layers;
    const double offset = stagger ? 0.5 * kTwoPi / segments : 0.0;
    std::vector<int> ids(segments);
    std::vector<double> angles(segments);
    for (int k = 0; k < segments; ++k) {
      const int id = ring * segments + k;
      const double theta = offset + kTwoPi * k / segments;
      ids[k] = id;
      angles[k] = theta;
      v.row(id) << r * std::cos(theta), r * std::sin(theta);
    }
    if (ring > 0) stitch_rings(prev_ids, prev_angles, ids, angles, tris);
    prev_ids = std::move(ids);
    prev_angles = std::move(angles);
  }
  orient_ccw(v, tris);
  return Mesh(std::move(v), std::move(tris), "annulus", 0);
}

Mesh generate_graded_disk(double radius, int resolution, double tip_radius) {
  require(radius > 0.0 && std::isfinite(radius), "disk radius must be positive");
  require(resolution >= 4, "graded disk resolution must be >= 4");
  require(tip_radius > 0.0 && tip_radius < radius, "tip radius must lie in (0, radius)");

  // w = exp(s + i t) ranges over the upper half-plane; x = -2 R w / (i + w)
  // maps it onto the disk |x + R| < R with w = 0 at the tip x = 0 and w = inf
  // at the antipode x = -2R. Near the tip |x| ~ 2R|w|.
  using cd = std::complex<double>;
  const int n = resolution;
  const double step = std::numbers::pi / n;
  const double s_lo = std::log(tip_radius / (2.0 * radius)) - 2.0 * step;
  const double s_hi = 4.0;
  const int rings = static_cast<int>(std::ceil((s_hi - s_lo) / step)) + 1;

  const int num_vertices = 2 + rings * (n + 1);
  Eigen::MatrixXd v(num_vertices, 2);
  v.row(0) << 0.0, 0.0;
  v.row(1) << -2.0 * radius, 0.0;
  auto grid = [n](int j, int k) { return 2 + j * (n + 1) + k; };

  for (int j = 0; j < rings; ++j) {
    const double s = s_lo + j * step;
    for (int k = 0; k <= n; ++k) {
      const double t = step * k;
      const cd w = std::exp(cd(s, t));
      const cd x = -2.0 * radius * w / (cd(0.0, 1.0) + w);
      double y = x.imag();
      // Grid lines t = 0 and t = pi lie on the circle; keep them exact.
      if (k == 0 || k == n) {
        const double rx = x.real() + radius;
        const double ry = y;
        const double scale = radius / std::hypot(rx, ry);
        v.row(grid(j, k)) << rx * scale - radius, ry * scale;
      } else {
        v.row(grid(j, k)) << x.real(), y;
      }
    }
  }

  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * n * rings));
  for (int k = 0; k < n; ++k) tris.push_back({0, grid(0, k), grid(0, k + 1)});
  for (int j = 0; j + 1 < rings; ++j) {
    for (int k = 0; k < n; ++k) {
      const int a = grid(j, k), b = grid(j, k + 1), c = grid(j + 1, k), d = grid(j + 1, k + 1);
      if ((j + k) % 2 == 0) {
        tris.push_back({a, c, d});
        tris.push_back({a, d, b});
      } else {
        tris.push_back({a, c, b});
        tris.push_back({b, c, d});
      }
    }
  }
  for (int k = 0; k < n; ++k) tris.push_back({1, grid(rings - 1, k + 1), grid(rings - 1, k)});
  orient_ccw(v, tris);
  return Mesh(std::move(v), std::move(tris), "graded-disk", 1);
}

Mesh generate_spherical_cap(double max_angle, int resolution) {
  require(max_angle > 0.0 && max_angle < std::numbers::pi, "cap angle must lie in (0, pi)");
  Mesh flat = generate_disk(1.0, resolution);
  Eigen::MatrixXd v(flat.num_vertices(), 3);
  for (int i = 0; i < flat.num_vertices(); ++i) {
    const double x = flat.vertices()(i, 0);
    const double y = flat.vertices()(i, 1);
    const double rho = std::hypot(x, y);
    const double theta = std::atan2(y, x);
    const double alpha = rho * max_angle;
    v.row(i) << std::sin(alpha) * std::cos(theta), std::sin(alpha) * std::sin(theta), -std::cos(alpha);
  }
  std::vector<Triangle> tris = flat.triangles();
  return Mesh(std::move(v), std::move(tris), "spherical-cap", 1);
}

std::vector<Eigen::Vector3d> circle_skeleton(double radius, int samples) {
  require(radius > 0.0, "skeleton radius must be positive");
  require(samples >= 3, "skeleton needs >= 3 samples");
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    out.emplace_back(radius * std::cos(t), radius * std::sin(t), 0.0);
  }
  return out;
}

double min_curvature_radius(const std::vector<Eigen::Vector3d>& skeleton, bool closed) {
  const std::size_t n = skeleton.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!closed && (i == 0 || i + 1 == n)) continue;
    const Eigen::Vector3d& p = skeleton[(i + n - 1) % n];
    const Eigen::Vector3d& q = skeleton[i];
    const Eigen::Vector3d& r = skeleton[(i + 1) % n];
    const double a = (q - r).norm();
    const double b = (r - p).norm();
    const double c = (p - q).norm();
    const double twice_area = (q - p).cross(r - p).norm();
    if (twice_area <= 1e-14 * std::max({a, b, c}) * std::max({a, b, c})) continue;
    best = std::min(best, a * b * c / (2.0 * twice_area));
  }
  return best;
}

namespace {

std::vector<Eigen::Vector3d> resample(const std::vector<Eigen::Vector3d>& pts, bool closed, int count,
                                      std::vector<double>& arclength, double& total) {
  const std::size_t n = pts.size();
  const std::size_t segs = closed ? n : n - 1;
  std::vector<double> cum(segs + 1, 0.0);
  for (std::size_t i = 0; i < segs; ++i) cum[i + 1] = cum[i] + (pts[(i + 1) % n] - pts[i]).norm();
  total = cum.back();
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidParameter, "skeleton has zero length");

  std::vector<Eigen::Vector3d> out;
  arclength.clear();
  std::size_t seg = 0;
  for (int k = 0; k < count; ++k) {
    const double s = closed ? total * k / count : total * k / (count - 1);
    while (seg + 1 < segs && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back((1.0 - f) * pts[seg] + f * pts[(seg + 1) % n]);
    arclength.push_back(s);
  }
  return out;
}

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d& t) {
  Eigen::Vector3d axis = std::abs(t.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return (axis - axis.dot(t) * t).normalized();
}

/// Double-reflection step of a rotation-minimizing frame.
Eigen::Vector3d transport(const Eigen::Vector3d& x0, const Eigen::Vector3d& x1, const Eigen::Vector3d& t0,
                          const Eigen::Vector3d& t1, const Eigen::Vector3d& r0) {
  const Eigen::Vector3d v1 = x1 - x0;
  const double c1 = v1.squaredNorm();
  if (c1 == 0.0) return r0;
  const Eigen::Vector3d rl = r0 - (2.0 / c1) * v1.dot(r0) * v1;
  const Eigen::Vector3d tl = t0 - (2.0 / c1) * v1.dot(t0) * v1;
  const Eigen::Vector3d v2 = t1 - tl;
  const double c2 = v2.squaredNorm();
  Eigen::Vector3d r1 = c2 > 1e-30 ? Eigen::Vector3d(rl - (2.0 / c2) * v2.dot(rl) * v2) : rl;
  r1 -= r1.dot(t1) * t1;
  return r1.normalized();
}

}  // namespace

Mesh generate_ribbon(const RibbonSpec& spec) {
  require(spec.width > 0.0 && std::isfinite(spec.width), "ribbon width must be positive");
  require(spec.samples_along >= 3 && spec.samples_across >= 3, "ribbon resolution must be >= 3 in each direction");
  require(spec.skeleton.size() >= (spec.closed ? 3u : 2u), "ribbon skeleton too short");

  const double min_radius = min_curvature_radius(spec.skeleton, spec.closed);
  if (!(spec.width < min_radius))
    throw Error(ErrorCode::ConstraintViolation,
                "ribbon width " + std::to_string(spec.width) +
                    " is not below the minimal curvature radius " + std::to_string(min_radius));

  const int na = spec.samples_along;
  const int nc = spec.samples_across;
  std::vector<double> s;
  double total = 0.0;
  const auto x = resample(spec.skeleton, spec.closed, na, s, total);

  std::vector<Eigen::Vector3d> tangent(na);
  for (int i = 0; i < na; ++i) {
    Eigen::Vector3d d;
    if (spec.closed) {
      d = x[(i + 1) % na] - x[(i + na - 1) % na];
    } else if (i == 0) {
      d = x[1] - x[0];
    } else if (i == na - 1) {
      d = x[na - 1] - x[na - 2];
    } else {
      d = x[i + 1] - x[i - 1];
    }
    tangent[i] = d.normalized();
  }

  // Initial normal: principal normal where the skeleton bends.
  Eigen::Vector3d bend = spec.closed ? Eigen::Vector3d(tangent[1] - tangent[na - 1])
                                     : Eigen::Vector3d(tangent[std::min(2, na - 1)] - tangent[0]);
  bend -= bend.dot(tangent[0]) * tangent[0];
  std::vector<Eigen::Vector3d> normal(na);
  normal[0] = bend.norm() > 1e-10 ? Eigen::Vector3d(bend.normalized()) : any_perpendicular(tangent[0]);
  for (int i = 0; i + 1 < na; ++i)
    normal[i + 1] = transport(x[i], x[i + 1], tangent[i], tangent[i + 1], normal[i]);

  const double twist = std::numbers::pi * spec.half_twists;
  double holonomy = 0.0;
  if (spec.closed) {
    const Eigen::Vector3d back = transport(x[na - 1], x[0], tangent[na - 1], tangent[0], normal[na - 1]);
    holonomy = std::atan2(normal[0].cross(back).dot(tangent[0]), normal[0].dot(back));
  }

  Eigen::MatrixXd v(na * nc, 3);
  for (int i = 0; i < na; ++i) {
    const double frac = s[i] / total;
    const double angle = (twist - holonomy) * frac;
    const Eigen::Vector3d binormal = tangent[i].cross(normal[i]);
    const Eigen::Vector3d dir = std::cos(angle) * normal[i] + std::sin(angle) * binormal;
    for (int j = 0; j < nc; ++j) {
      const double u = (static_cast<double>(j) / (nc - 1) - 0.5) * spec.width;
      v.row(i * nc + j) = (x[i] + u * dir).transpose();
    }
  }

  const bool flip_seam = spec.closed && (std::abs(spec.half_twists) % 2 == 1);
  const int rows = spec.closed ? na : na - 1;
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * rows * (nc - 1)));
  for (int i = 0; i < rows; ++i) {
    const int i2 = (i + 1) % na;
    const bool seam = spec.closed && i2 == 0;
    auto across = [&](int j) { return (seam && flip_seam) ? nc - 1 - j : j; };
    for (int j = 0; j + 1 < nc; ++j) {
      const int a = i * nc + j;
      const int b = i * nc + j + 1;
      const int c = i2 * nc + across(j);
      const int d = i2 * nc + across(j + 1);
      tris.push_back({a, c, d});
      tris.push_back({a, d, b});
    }
  }

  Mesh mesh(std::move(v), std::move(tris), "ribbon", spec.closed ? 0 : 1);
  if (has_self_intersection(mesh))
    throw Error(ErrorCode::EmbeddingFailure, "ribbon surface self-intersects; reduce the width");
  return mesh;
}

Mesh merge_meshes(const std::vector<Mesh>& parts, double weld_tolerance, std::optional<int> declared_euler) {
  require(!parts.empty(), "nothing to merge");
  require(weld_tolerance >= 0.0, "weld tolerance must be non-negative");
  const int dim = parts.front().dim();
  int total = 0;
  for (const auto& p : parts) {
    require(p.dim() == dim, "merged meshes must share the ambient dimension");
    total += p.num_vertices();
  }

  Eigen::MatrixXd all(total, dim);
  std::vector<Triangle> tris;
  int offset = 0;
  for (const auto& p : parts) {
    all.middleRows(offset, p.num_vertices()) = p.vertices();
    for (const auto& t : p.triangles()) tris.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
    offset += p.num_vertices();
  }

  // Weld through a hash grid with cell size = tolerance.
  std::vector<int> remap(total, -1);
  std::vector<int> kept;
  const double cell = weld_tolerance > 0.0 ? weld_tolerance : 1.0;
  struct KeyHash {
    std::size_t operator()(const std::array<long long, 3>& k) const {
      return std::hash<long long>()(k[0] * 73856093LL ^ k[1] * 19349663LL ^ k[2] * 83492791LL);
    }
  };
  std::unordered_map<std::array<long long, 3>, std::vector<int>, KeyHash> buckets;
  auto key_of = [&](int i) {
    std::array<long long, 3> k{0, 0, 0};
    for (int d = 0; d < std::min(dim, 3); ++d) k[d] = static_cast<long long>(std::floor(all(i, d) / cell));
    return k;
  };
  for (int i = 0; i < total; ++i) {
    int match = -1;
    if (weld_tolerance > 0.0) {
      const auto k = key_of(i);
      for (long long dx = -1; dx <= 1 && match < 0; ++dx)
        for (long long dy = -1; dy <= 1 && match < 0; ++dy)
          for (long long dz = (dim >= 3 ? -1 : 0); dz <= (dim >= 3 ? 1 : 0) && match < 0; ++dz) {
            auto it = buckets.find({k[0] + dx, k[1] + dy, k[2] + dz});
            if (it == buckets.end()) continue;
            for (int cand : it->second) {
              if ((all.row(kept[cand]) - all.row(i)).norm() <= weld_tolerance) {
                match = cand;
                break;
              }
            }
          }
      if (match < 0) buckets[k].push_back(static_cast<int>(kept.size()));
    }
    if (match < 0) {
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(i);
    } else {
      remap[i] = match;
    }
  }

  Eigen::MatrixXd v(static_cast<int>(kept.size()), dim);
  for (std::size_t i = 0; i < kept.size(); ++i) v.row(static_cast<int>(i)) = all.row(kept[i]);
  std::vector<Triangle> out;
  for (const auto& t : tris) {
    Triangle r{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) continue;
    out.push_back(r);
  }
  return Mesh(std::move(v), std::move(out), "merged", declared_euler);
}

}  // namespace csl
