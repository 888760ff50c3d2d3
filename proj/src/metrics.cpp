#include "winfty/metrics.hpp"

#include "winfty/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace winfty {

double discrete_hcd(const ReferenceMesh& mesh, const DeformationMap& phi,
                    const TargetShape& target) {
  std::vector<Vec2> boundary;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_omega_boundary_vertex(v)) boundary.push_back(phi.values[static_cast<std::size_t>(v)]);

  const int nv = mesh.num_vertices();
  const int grain = 1024;
  const int chunks = (nv + grain - 1) / grain;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  parallel_for_chunks(nv, [&](int lo, int hi) {
    double local = 0.0;
    for (int v = lo; v < hi; ++v) {
      const Vec2& x = phi.values[static_cast<std::size_t>(v)];
      double dh = 0.0;
      if (mesh.is_omega_interior_vertex(v) && !boundary.empty()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec2& y : boundary) best = std::min(best, (x - y).norm());
        dh = best;
      }
      local = std::max(local, std::abs(target_distance(target, x) - dh));
    }
    partial[static_cast<std::size_t>(lo / grain)] = local;
  }, grain);
  double result = 0.0;
  for (double v : partial) result = std::max(result, v);
  return result;
}

std::pair<double, double> deformation_norms(const ReferenceMesh& mesh,
                                            const DeformationMap& phi) {
  double norm = 0.0, inv_norm = 0.0;
  for (int t = 0; t < mesh.num_cells(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const auto& gh = mesh.ref_grad[static_cast<std::size_t>(t)];
    Mat2 jac = Mat2::Zero();
    for (int k = 0; k < 3; ++k)
      jac += phi.values[static_cast<std::size_t>(tri[k])] * gh[k].transpose();
    if (jac.determinant() <= 0.0)
      throw std::runtime_error("deformation_norms: singular deformation gradient on cell " +
                               std::to_string(t));
    norm = std::max(norm, spectral_norm(jac));
    inv_norm = std::max(inv_norm, 1.0 / smallest_singular_value(jac));
  }
  return {norm, inv_norm};
}

std::vector<double> eoc(std::span<const double> values, std::span<const double> hs) {
  if (values.size() != hs.size())
    throw std::invalid_argument("eoc: values and mesh sizes must have equal length");
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    if (!(hs[i + 1] < hs[i])) throw std::invalid_argument("eoc: mesh sizes must strictly decrease");
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i] > 0.0) || !(values[i + 1] > 0.0))
      throw std::invalid_argument("eoc: undefined for non-positive values");
    rates.push_back((std::log(values[i]) - std::log(values[i + 1])) /
                    (std::log(hs[i]) - std::log(hs[i + 1])));
  }
  return rates;
}

std::string ConvergenceTable::to_csv() const {
  std::string out = "h,mu,energy,eoc_energy,hcd,eoc_hcd\n";
  char buf[64];
  auto cell = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const ConvergenceRow& row : rows) {
    out += cell(row.h) + ',';
    out += (row.mu ? cell(*row.mu) : std::string()) + ',';
    out += cell(row.energy) + ',';
    out += (row.eoc_energy ? cell(*row.eoc_energy) : std::string()) + ',';
    out += cell(row.hcd) + ',';
    out += (row.eoc_hcd ? cell(*row.eoc_hcd) : std::string()) + '\n';
  }
  return out;
}

}  // namespace winfty
