#include "winfty/mesh.hpp"

#include "winfty/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace winfty {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kIdentityTol = 1e-14;

bool on_square_boundary(const Vec2& p, double tol = kBoundaryTol) {
  return std::abs(std::abs(p.x()) - kDomainHalf) <= tol ||
         std::abs(std::abs(p.y()) - kDomainHalf) <= tol;
}

std::array<Vec2, 3> p1_gradients(const Vec2& a, const Vec2& b, const Vec2& c, double area) {
  const double inv = 1.0 / (2.0 * area);
  return {Vec2{(b.y() - c.y()) * inv, (c.x() - b.x()) * inv},
          Vec2{(c.y() - a.y()) * inv, (a.x() - c.x()) * inv},
          Vec2{(a.y() - b.y()) * inv, (b.x() - a.x()) * inv}};
}

std::uint64_t edge_key(int a, int b, int n) {
  if (a > b) std::swap(a, b);
  return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(b);
}

}  // namespace

void ReferenceMesh::finalize() {
  const int nv = num_vertices();
  const int nc = num_cells();
  on_boundary.assign(static_cast<std::size_t>(nv), 0);
  for (int v : boundary_vertices) on_boundary[static_cast<std::size_t>(v)] = 1;
  std::sort(boundary_vertices.begin(), boundary_vertices.end());

  touches_omega.assign(static_cast<std::size_t>(nv), 0);
  touches_nonomega.assign(static_cast<std::size_t>(nv), 0);
  ref_area.assign(static_cast<std::size_t>(nc), 0.0);
  ref_grad.assign(static_cast<std::size_t>(nc), {});
  double hmax = 0.0;
  for (int t = 0; t < nc; ++t) {
    const auto& tri = triangles[static_cast<std::size_t>(t)];
    const Vec2& a = vertices[static_cast<std::size_t>(tri[0])];
    const Vec2& b = vertices[static_cast<std::size_t>(tri[1])];
    const Vec2& c = vertices[static_cast<std::size_t>(tri[2])];
    const double area = signed_area(a, b, c);
    ref_area[static_cast<std::size_t>(t)] = area;
    if (area > 0.0) ref_grad[static_cast<std::size_t>(t)] = p1_gradients(a, b, c, area);
    auto& flag = is_omega(t) ? touches_omega : touches_nonomega;
    for (int k = 0; k < 3; ++k) flag[static_cast<std::size_t>(tri[k])] = 1;
    if (is_omega(t)) {
      hmax = std::max({hmax, (a - b).norm(), (b - c).norm(), (c - a).norm()});
    }
  }
  h = hmax;
}

DeformationMap identity_map(const ReferenceMesh& mesh) {
  return DeformationMap{mesh.vertices};
}

void validate_mesh(const ReferenceMesh& mesh) {
  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();
  if (nv < 3 || nc < 1) throw std::runtime_error("mesh: empty");
  bool any_omega = false;
  for (int t = 0; t < nc; ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv)
        throw std::runtime_error("mesh: triangle " + std::to_string(t) + " index out of range");
    }
    if (mesh.ref_area[static_cast<std::size_t>(t)] <= 0.0)
      throw std::runtime_error("mesh: triangle " + std::to_string(t) + " has non-positive area");
    any_omega = any_omega || mesh.is_omega(t);
  }
  if (!any_omega) throw std::runtime_error("mesh: no omega cells");

  // Every edge is shared by exactly 2 triangles or lies on the boundary of D.
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(static_cast<std::size_t>(3 * nc));
  for (int t = 0; t < nc; ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) ++edge_count[edge_key(tri[k], tri[(k + 1) % 3], nv)];
  }
  for (const auto& [key, count] : edge_count) {
    const int a = static_cast<int>(key / static_cast<std::uint64_t>(nv));
    const int b = static_cast<int>(key % static_cast<std::uint64_t>(nv));
    if (count > 2)
      throw std::runtime_error("mesh: edge shared by more than 2 triangles");
    if (count == 1) {
      const Vec2& pa = mesh.vertices[static_cast<std::size_t>(a)];
      const Vec2& pb = mesh.vertices[static_cast<std::size_t>(b)];
      if (!on_square_boundary(pa) || !on_square_boundary(pb) ||
          !on_square_boundary(0.5 * (pa + pb)))
        throw std::runtime_error("mesh: open edge not on the boundary of D");
    }
  }

  for (int v : mesh.boundary_vertices) {
    if (v < 0 || v >= nv) throw std::runtime_error("mesh: boundary vertex out of range");
    if (!on_square_boundary(mesh.vertices[static_cast<std::size_t>(v)], 1e-12))
      throw std::runtime_error("mesh: boundary vertex not on the boundary of D");
  }
  for (int v = 0; v < nv; ++v) {
    if (on_square_boundary(mesh.vertices[static_cast<std::size_t>(v)]) &&
        !mesh.is_boundary_vertex(v))
      throw std::runtime_error("mesh: vertex on the boundary of D not marked as such");
  }

  // The omega region stays strictly inside D.
  for (int t = 0; t < nc; ++t) {
    if (!mesh.is_omega(t)) continue;
    for (int k = 0; k < 3; ++k) {
      if (mesh.is_boundary_vertex(mesh.triangles[static_cast<std::size_t>(t)][k]))
        throw std::runtime_error("mesh: omega cell touches the boundary of D");
    }
  }
}

ReferenceMesh generate_square_in_square(int n) {
  if (n < 4 || n % 4 != 0)
    throw std::invalid_argument("generate_square_in_square: n must be >= 4 and divisible by 4 "
                                "so cell boundaries align with (-1,1)^2");
  ReferenceMesh mesh;
  const double side = 2.0 * kDomainHalf / n;
  auto grid_index = [n](int i, int j) { return j * (n + 1) + i; };
  const int centers_offset = (n + 1) * (n + 1);
  auto center_index = [n, centers_offset](int i, int j) { return centers_offset + j * n + i; };

  mesh.vertices.reserve(static_cast<std::size_t>(centers_offset + n * n));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(-kDomainHalf + i * side, -kDomainHalf + j * side);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.vertices.emplace_back(-kDomainHalf + (i + 0.5) * side, -kDomainHalf + (j + 0.5) * side);

  const int lo = n / 4, hi = 3 * n / 4;  // squares covering (-1,1)^2
  mesh.triangles.reserve(static_cast<std::size_t>(4 * n * n));
  mesh.omega_cells.reserve(static_cast<std::size_t>(4 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c = center_index(i, j);
      const int v00 = grid_index(i, j), v10 = grid_index(i + 1, j);
      const int v11 = grid_index(i + 1, j + 1), v01 = grid_index(i, j + 1);
      const std::uint8_t omega = (i >= lo && i < hi && j >= lo && j < hi) ? 1 : 0;
      mesh.triangles.push_back({v00, v10, c});
      mesh.triangles.push_back({v10, v11, c});
      mesh.triangles.push_back({v11, v01, c});
      mesh.triangles.push_back({v01, v00, c});
      for (int k = 0; k < 4; ++k) mesh.omega_cells.push_back(omega);
    }
  }
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      if (i == 0 || i == n || j == 0 || j == n) mesh.boundary_vertices.push_back(grid_index(i, j));
  mesh.finalize();
  return mesh;
}

namespace {

// Shared machinery for the radial generators: a fan around the origin,
// concentric polygon rings, and a stitched transition band to the square.
struct BoundaryPoint {
  double angle;
  Vec2 pos;
};

Vec2 square_point(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  if (std::abs(std::abs(c) - std::abs(s)) < 1e-12) {
    return {c > 0 ? kDomainHalf : -kDomainHalf, s > 0 ? kDomainHalf : -kDomainHalf};
  }
  if (std::abs(c) > std::abs(s)) {
    const double x = c > 0 ? kDomainHalf : -kDomainHalf;
    return {x, kDomainHalf * s / std::abs(c)};
  }
  const double y = s > 0 ? kDomainHalf : -kDomainHalf;
  return {kDomainHalf * c / std::abs(s), y};
}

ReferenceMesh build_radial_mesh(int n_angular, const std::vector<double>& radii,
                                double omega_lo, double omega_hi) {
  ReferenceMesh mesh;
  const int rings = static_cast<int>(radii.size());
  mesh.vertices.emplace_back(0.0, 0.0);
  for (int k = 0; k < rings; ++k) {
    for (int j = 0; j < n_angular; ++j) {
      const double a = 2.0 * M_PI * j / n_angular;
      mesh.vertices.emplace_back(radii[static_cast<std::size_t>(k)] * std::cos(a),
                                 radii[static_cast<std::size_t>(k)] * std::sin(a));
    }
  }
  auto ring_index = [n_angular](int k, int j) { return 1 + k * n_angular + (j % n_angular); };

  auto add_band = [&](double r_lo, double r_hi, auto&& emit) {
    const double mid = 0.5 * (r_lo + r_hi);
    const std::uint8_t omega = (mid > omega_lo && mid < omega_hi) ? 1 : 0;
    emit(omega);
  };

  // Fan around the origin.
  add_band(0.0, radii[0], [&](std::uint8_t omega) {
    for (int j = 0; j < n_angular; ++j) {
      mesh.triangles.push_back({0, ring_index(0, j), ring_index(0, j + 1)});
      mesh.omega_cells.push_back(omega);
    }
  });
  // Rings between consecutive polygons.
  for (int k = 0; k + 1 < rings; ++k) {
    add_band(radii[static_cast<std::size_t>(k)], radii[static_cast<std::size_t>(k + 1)],
             [&](std::uint8_t omega) {
               for (int j = 0; j < n_angular; ++j) {
                 const int a = ring_index(k, j), b = ring_index(k, j + 1);
                 const int c = ring_index(k + 1, j + 1), d = ring_index(k + 1, j);
                 mesh.triangles.push_back({a, d, c});
                 mesh.triangles.push_back({a, c, b});
                 mesh.omega_cells.push_back(omega);
                 mesh.omega_cells.push_back(omega);
               }
             });
  }

  // Boundary loop: projections of the ring angles onto the square plus its corners.
  std::vector<BoundaryPoint> loop;
  for (int j = 0; j < n_angular; ++j) {
    const double a = 2.0 * M_PI * j / n_angular;
    loop.push_back({a, square_point(a)});
  }
  for (int c = 0; c < 4; ++c) {
    const double a = M_PI * (0.25 + 0.5 * c);
    bool present = false;
    for (const auto& bp : loop) present = present || std::abs(bp.angle - a) < 1e-9;
    if (!present) loop.push_back({a, square_point(a)});
  }
  std::sort(loop.begin(), loop.end(),
            [](const BoundaryPoint& lhs, const BoundaryPoint& rhs) { return lhs.angle < rhs.angle; });

  const int boundary_offset = static_cast<int>(mesh.vertices.size());
  for (const auto& bp : loop) mesh.vertices.push_back(bp.pos);
  const int nb = static_cast<int>(loop.size());
  for (int j = 0; j < nb; ++j) mesh.boundary_vertices.push_back(boundary_offset + j);

  // Stitch the outermost polygon ring to the boundary loop by marching both
  // loops in angle order.
  const int inner_ring = rings - 1;
  auto inner_angle = [&](int i) { return 2.0 * M_PI * i / n_angular; };
  auto outer_angle = [&](int o) {
    return o < nb ? loop[static_cast<std::size_t>(o)].angle
                  : loop[static_cast<std::size_t>(o - nb)].angle + 2.0 * M_PI;
  };
  int i = 0, o = 0;
  while (i < n_angular || o < nb) {
    const bool advance_inner =
        i < n_angular && (o >= nb || inner_angle(i + 1) <= outer_angle(o + 1));
    if (advance_inner) {
      mesh.triangles.push_back({ring_index(inner_ring, i), boundary_offset + (o % nb),
                                ring_index(inner_ring, i + 1)});
      ++i;
    } else {
      mesh.triangles.push_back({ring_index(inner_ring, i % n_angular), boundary_offset + (o % nb),
                                boundary_offset + ((o + 1) % nb)});
      ++o;
    }
    mesh.omega_cells.push_back(0);
  }

  mesh.finalize();
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (mesh.ref_area[static_cast<std::size_t>(t)] <= 0.0)
      throw std::runtime_error("radial mesh generation: degenerate transition cell; "
                               "increase the angular resolution");
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace

ReferenceMesh generate_annulus_in_square(int n_angular, int n_radial, double r_inner,
                                         double r_outer) {
  if (!(r_inner > 0.0 && r_inner < r_outer && r_outer < kDomainHalf))
    throw std::invalid_argument("generate_annulus_in_square: need 0 < r_inner < r_outer < 2");
  if (n_angular < 8 || n_radial < 1)
    throw std::invalid_argument("generate_annulus_in_square: need n_angular >= 8, n_radial >= 1");

  const double band = (r_outer - r_inner) / n_radial;
  std::vector<double> radii;
  const int hole = std::max(1, static_cast<int>(std::lround(r_inner / band)));
  for (int k = 1; k <= hole; ++k) radii.push_back(r_inner * k / hole);
  for (int k = 1; k <= n_radial; ++k) radii.push_back(r_inner + band * k);
  for (double r = r_outer + band; r <= kDomainHalf - 0.5 * band; r += band) radii.push_back(r);
  return build_radial_mesh(n_angular, radii, r_inner, r_outer);
}

ReferenceMesh generate_disk_in_square(int n_angular, int n_rings, double radius) {
  if (!(radius > 0.0 && radius < kDomainHalf))
    throw std::invalid_argument("generate_disk_in_square: need 0 < radius < 2");
  if (n_angular < 8 || n_rings < 1)
    throw std::invalid_argument("generate_disk_in_square: need n_angular >= 8, n_rings >= 1");

  const double band = radius / n_rings;
  std::vector<double> radii;
  for (int k = 1; k <= n_rings; ++k) radii.push_back(radius * k / n_rings);
  for (double r = radius + band; r <= kDomainHalf - 0.5 * band; r += band) radii.push_back(r);
  return build_radial_mesh(n_angular, radii, 0.0, radius);
}

std::pair<ReferenceMesh, DeformationMap> refine_congruent(const ReferenceMesh& mesh,
                                                          const DeformationMap& phi) {
  if (static_cast<int>(phi.values.size()) != mesh.num_vertices())
    throw std::invalid_argument("refine_congruent: deformation size mismatch");
  const int nv = mesh.num_vertices();
  ReferenceMesh fine;
  fine.vertices = mesh.vertices;
  DeformationMap fine_phi;
  fine_phi.values = phi.values;

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(static_cast<std::size_t>(3 * mesh.num_cells() / 2));
  auto midpoint_of = [&](int a, int b) {
    const auto key = edge_key(a, b, nv);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                   mesh.vertices[static_cast<std::size_t>(b)]));
    fine_phi.values.push_back(0.5 * (phi.values[static_cast<std::size_t>(a)] +
                                     phi.values[static_cast<std::size_t>(b)]));
    midpoint.emplace(key, idx);
    return idx;
  };

  fine.triangles.reserve(static_cast<std::size_t>(4 * mesh.num_cells()));
  fine.omega_cells.reserve(static_cast<std::size_t>(4 * mesh.num_cells()));
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const auto [v0, v1, v2] = mesh.triangles[static_cast<std::size_t>(t)];
    const int m01 = midpoint_of(v0, v1);
    const int m12 = midpoint_of(v1, v2);
    const int m20 = midpoint_of(v2, v0);
    fine.triangles.push_back({v0, m01, m20});
    fine.triangles.push_back({m01, v1, m12});
    fine.triangles.push_back({m20, m12, v2});
    fine.triangles.push_back({m01, m12, m20});
    const std::uint8_t omega = mesh.omega_cells[static_cast<std::size_t>(t)];
    for (int k = 0; k < 4; ++k) fine.omega_cells.push_back(omega);
  }

  fine.boundary_vertices = mesh.boundary_vertices;
  for (const auto& [key, idx] : midpoint) {
    const int a = static_cast<int>(key / static_cast<std::uint64_t>(nv));
    const int b = static_cast<int>(key % static_cast<std::uint64_t>(nv));
    if (mesh.is_boundary_vertex(a) && mesh.is_boundary_vertex(b) &&
        on_square_boundary(fine.vertices[static_cast<std::size_t>(idx)]))
      fine.boundary_vertices.push_back(idx);
  }
  fine.finalize();
  return {std::move(fine), std::move(fine_phi)};
}

double radius_ratio(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const double a = (p1 - p2).norm();
  const double b = (p2 - p0).norm();
  const double c = (p0 - p1).norm();
  const double area = std::abs(signed_area(p0, p1, p2));
  const double longest = std::max({a, b, c});
  if (area <= 1e-14 * longest * longest)
    throw std::invalid_argument("radius_ratio: degenerate (collinear) triangle");
  const double circum = a * b * c / (4.0 * area);
  const double inradius = 2.0 * area / (a + b + c);
  return circum / (2.0 * inradius);
}

AdmissibilityReport check_admissible(const ReferenceMesh& mesh, const DeformationMap& phi) {
  AdmissibilityReport report;
  const int nc = mesh.num_cells();
  report.cell_det.resize(static_cast<std::size_t>(nc));
  report.boundary_identity = true;
  if (static_cast<int>(phi.values.size()) != mesh.num_vertices()) {
    report.admissible = false;
    report.boundary_identity = false;
    return report;
  }
  for (int v : mesh.boundary_vertices) {
    const Vec2 d = phi.values[static_cast<std::size_t>(v)] - mesh.vertices[static_cast<std::size_t>(v)];
    if (d.lpNorm<Eigen::Infinity>() > kIdentityTol) {
      report.boundary_identity = false;
      break;
    }
  }
  for (int t = 0; t < nc; ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const double deformed = signed_area(phi.values[static_cast<std::size_t>(tri[0])],
                                        phi.values[static_cast<std::size_t>(tri[1])],
                                        phi.values[static_cast<std::size_t>(tri[2])]);
    const double ref = mesh.ref_area[static_cast<std::size_t>(t)];
    const double det = deformed / ref;
    report.cell_det[static_cast<std::size_t>(t)] = det;
    if (det < 1e-10 * ref) report.bad_cells.push_back(t);
  }
  report.admissible = report.boundary_identity && report.bad_cells.empty();
  return report;
}

CellGeometry cell_geometry(const ReferenceMesh& mesh, const DeformationMap& phi, int cell) {
  if (cell < 0 || cell >= mesh.num_cells())
    throw std::invalid_argument("cell_geometry: cell index out of range");
  const auto& tri = mesh.triangles[static_cast<std::size_t>(cell)];
  const Vec2& y0 = phi.values[static_cast<std::size_t>(tri[0])];
  const Vec2& y1 = phi.values[static_cast<std::size_t>(tri[1])];
  const Vec2& y2 = phi.values[static_cast<std::size_t>(tri[2])];
  CellGeometry geom;
  geom.area = signed_area(y0, y1, y2);
  if (geom.area <= 0.0)
    throw std::runtime_error("cell_geometry: non-positive deformed area on cell " +
                             std::to_string(cell));
  geom.basis_gradients = p1_gradients(y0, y1, y2, geom.area);
  const auto& gh = mesh.ref_grad[static_cast<std::size_t>(cell)];
  geom.jacobian = y0 * gh[0].transpose() + y1 * gh[1].transpose() + y2 * gh[2].transpose();
  return geom;
}

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) tokens.push_back({word, lineno});
  }
  return tokens;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

ReferenceMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  const auto tokens = tokenize(in);
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const Token& {
    if (pos >= tokens.size()) {
      const int line = tokens.empty() ? 0 : tokens.back().line;
      parse_fail(path, line, std::string("unexpected end of file, expected ") + what);
    }
    return tokens[pos++];
  };
  auto expect_keyword = [&](const char* kw) {
    const Token& t = next(kw);
    if (t.text != kw) parse_fail(path, t.line, std::string("expected '") + kw + "', got '" + t.text + "'");
  };
  auto next_int = [&](const char* what) {
    const Token& t = next(what);
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(t.text, &used);
    } catch (const std::exception&) {
      parse_fail(path, t.line, std::string("expected integer ") + what + ", got '" + t.text + "'");
    }
    if (used != t.text.size())
      parse_fail(path, t.line, std::string("expected integer ") + what + ", got '" + t.text + "'");
    return std::pair<long, int>{value, t.line};
  };
  auto next_double = [&](const char* what) {
    const Token& t = next(what);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(t.text, &used);
    } catch (const std::exception&) {
      parse_fail(path, t.line, std::string("expected number ") + what + ", got '" + t.text + "'");
    }
    if (used != t.text.size())
      parse_fail(path, t.line, std::string("expected number ") + what + ", got '" + t.text + "'");
    return value;
  };

  ReferenceMesh mesh;
  expect_keyword("vertices");
  const auto [nv, nv_line] = next_int("vertex count");
  if (nv < 3) parse_fail(path, nv_line, "vertex count must be >= 3");
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    const double x = next_double("vertex x");
    const double y = next_double("vertex y");
    mesh.vertices.emplace_back(x, y);
  }
  expect_keyword("triangles");
  const auto [nc, nc_line] = next_int("triangle count");
  if (nc < 1) parse_fail(path, nc_line, "triangle count must be >= 1");
  for (long t = 0; t < nc; ++t) {
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const auto [idx, line] = next_int("triangle index");
      if (idx < 0 || idx >= nv)
        parse_fail(path, line, "triangle index " + std::to_string(idx) + " out of range");
      tri[k] = static_cast<int>(idx);
    }
    const auto [flag, flag_line] = next_int("omega flag");
    if (flag != 0 && flag != 1) parse_fail(path, flag_line, "omega flag must be 0 or 1");
    mesh.triangles.push_back(tri);
    mesh.omega_cells.push_back(static_cast<std::uint8_t>(flag));
  }
  if (pos != tokens.size())
    parse_fail(path, tokens[pos].line, "trailing content after triangle list");

  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (on_square_boundary(mesh.vertices[static_cast<std::size_t>(v)]))
      mesh.boundary_vertices.push_back(v);
  mesh.finalize();
  validate_mesh(mesh);
  return mesh;
}

void write_mesh(const ReferenceMesh& mesh, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(32 * (mesh.num_vertices() + mesh.num_cells())));
  char buf[96];
  std::snprintf(buf, sizeof buf, "vertices %d\n", mesh.num_vertices());
  out += buf;
  for (const Vec2& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "triangles %d\n", mesh.num_cells());
  out += buf;
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    std::snprintf(buf, sizeof buf, "%d %d %d %d\n", tri[0], tri[1], tri[2],
                  mesh.is_omega(t) ? 1 : 0);
    out += buf;
  }
  atomic_write_file(path, out);
}

}  // namespace winfty
