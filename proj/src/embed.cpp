#include "simspar/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace simspar {

ProbeVector ProbeVector::from_values(Vector values, std::uint64_t seed, std::size_t index) {
  remove_mean(values);
  const double scale = values.lpNorm<Eigen::Infinity>();
  if (!(scale > 1e-12) || !std::isfinite(scale)) {
    throw DegenerateProbeError("probe vector is constant (lies in the Laplacian kernel)");
  }
  return ProbeVector(std::move(values), seed, index);
}

std::size_t default_probe_count(std::size_t n) {
  const std::size_t bits = n <= 1 ? 0 : std::bit_width(n - 1);  // ceil(log2 n)
  return std::clamp<std::size_t>(bits, 4, 32);
}

std::vector<ProbeVector> make_probes(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (n < 2) throw ValidationError("make_probes: need at least 2 vertices");
  if (r < 1) throw ValidationError("make_probes: need at least one probe");
  std::mt19937_64 engine(seed);
  std::vector<ProbeVector> out;
  out.reserve(r);
  Vector v(static_cast<Eigen::Index>(n));
  while (out.size() < r) {
    std::uint64_t word = 0;
    bool mixed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = engine();
      v[static_cast<Eigen::Index>(i)] = (word & 1U) ? 1.0 : -1.0;
      word >>= 1;
      mixed = mixed || v[static_cast<Eigen::Index>(i)] != v[0];
    }
    if (!mixed) continue;  // all one sign: nothing left after mean subtraction
    out.push_back(ProbeVector::from_values(v, seed, out.size()));
  }
  return out;
}

ProbeVector make_start_vector(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("make_start_vector: need at least 2 vertices");
  std::mt19937_64 engine(seed);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0;  // uniform in [-1, 1)
  }
  return ProbeVector::from_values(std::move(v), seed, 0);
}

Vector generalized_power_iterate(const LaplacianOperator& LG, const LaplacianSolver& P, const ProbeVector& h0,
                                 int t) {
  if (h0.size() != LG.size() || P.size() != LG.size()) throw DimensionError("power iteration: dimension mismatch");
  if (t < 0) throw ValidationError("power iteration: t must be nonnegative");
  Vector h = h0.values();
  Vector y;
  for (int k = 0; k < t; ++k) {
    LG.apply(h, y);
    h = P.solve(y);
    remove_mean(h);
    const double norm = h.norm();
    if (!(norm > 1e-200) || !std::isfinite(norm)) {
      throw DegenerateProbeError("power iterate vanished; re-seed the probe");
    }
  }
  return h;
}

std::vector<Vector> iterate_probes(const LaplacianOperator& LG, const LaplacianSolver& P,
                                   std::span<const ProbeVector> probes, int t) {
  std::vector<Vector> out(probes.size());
  const auto count = static_cast<std::int64_t>(probes.size());
  std::exception_ptr failure;
#ifdef SIMSPAR_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t j = 0; j < count; ++j) {
    try {
      out[static_cast<std::size_t>(j)] = generalized_power_iterate(LG, P, probes[static_cast<std::size_t>(j)], t);
    } catch (...) {
#ifdef SIMSPAR_HAVE_OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<EdgeHeat> edge_joule_heat(const Graph& g, std::span<const char> in_sparsifier,
                                      std::span<const Vector> probes_t) {
  if (in_sparsifier.size() != g.num_edges()) throw DimensionError("edge_joule_heat: mask size mismatch");
  for (const Vector& h : probes_t) {
    if (static_cast<std::size_t>(h.size()) != g.num_vertices()) throw DimensionError("edge_joule_heat: probe size mismatch");
  }
  std::vector<EdgeHeat> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in_sparsifier[e]) continue;
    const Edge& ed = g.edge(e);
    double heat = 0.0;
    for (const Vector& h : probes_t) {
      const double d = h[ed.p] - h[ed.q];
      heat += ed.w * d * d;
    }
    out.push_back({e, heat, 0.0, 0});
  }
  std::sort(out.begin(), out.end(), [](const EdgeHeat& a, const EdgeHeat& b) {
    return a.heat != b.heat ? a.heat > b.heat : a.edge < b.edge;
  });
  const double top = out.empty() ? 0.0 : out.front().heat;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].rank = i;
    out[i].normalized = top > 0.0 ? out[i].heat / top : 0.0;
  }
  if (!out.empty() && top > 0.0) out.front().normalized = 1.0;
  return out;
}

}  // namespace simspar
