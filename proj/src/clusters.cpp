#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinodal/errors.hpp"
#include "spinodal/micro.hpp"

namespace spinodal {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  std::vector<int> rank;

  int make() {
    parent.push_back(int(parent.size()));
    rank.push_back(0);
    return parent.back();
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }
};

// Hoshen-Kopelman raster scan over an occupancy predicate.
template <class Occupied>
ClusterLabeling label(const GridSpec& spec, Occupied&& occupied) {
  const int nx = spec.nx, ny = spec.ny;
  ClusterLabeling out;
  out.spec = spec;
  out.id.assign(std::size_t(nx) * ny, -1);
  DisjointSet ds;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = std::size_t(j) * nx + i;
      if (!occupied(k)) continue;
      const int left = i > 0 ? out.id[k - 1] : -1;
      const int below = j > 0 ? out.id[k - nx] : -1;
      if (left < 0 && below < 0) {
        out.id[k] = ds.make();
      } else if (left >= 0 && below >= 0) {
        ds.unite(left, below);
        out.id[k] = left;
      } else {
        out.id[k] = std::max(left, below);
      }
    }
  // Compact root labels to 0..n-1 in order of first appearance.
  std::vector<int> compact(ds.parent.size(), -1);
  for (int& v : out.id) {
    if (v < 0) continue;
    const int root = ds.find(v);
    if (compact[root] < 0) {
      compact[root] = int(out.sizes.size());
      out.sizes.push_back(0);
    }
    v = compact[root];
    ++out.sizes[v];
  }
  return out;
}

bool spans_x(const ClusterLabeling& c) {
  const int nx = c.spec.nx, ny = c.spec.ny;
  std::vector<char> on_left(c.count(), 0);
  for (int j = 0; j < ny; ++j) {
    const int v = c.id[std::size_t(j) * nx];
    if (v >= 0) on_left[v] = 1;
  }
  for (int j = 0; j < ny; ++j) {
    const int v = c.id[std::size_t(j) * nx + nx - 1];
    if (v >= 0 && on_left[v]) return true;
  }
  return false;
}

bool spans_y(const ClusterLabeling& c) {
  const int nx = c.spec.nx, ny = c.spec.ny;
  std::vector<char> on_bottom(c.count(), 0);
  for (int i = 0; i < nx; ++i) {
    const int v = c.id[i];
    if (v >= 0) on_bottom[v] = 1;
  }
  for (int i = 0; i < nx; ++i) {
    const int v = c.id[std::size_t(ny - 1) * nx + i];
    if (v >= 0 && on_bottom[v]) return true;
  }
  return false;
}

std::vector<double> site_uniforms(int L, std::uint64_t seed) {
  std::vector<double> u(std::size_t(L) * L);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = counter_uniform(seed, k);
  return u;
}

}  // namespace

PhaseMap threshold_phases(const ScalarField2D& f, double threshold) {
  PhaseMap map;
  map.spec = f.spec();
  map.threshold = threshold;
  map.labels.reserve(std::size_t(f.spec().cells()));
  for (double x : f.data()) map.labels.push_back(x >= threshold ? Phase::TiRich : Phase::AlRich);
  return map;
}

std::int64_t ClusterLabeling::largest() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

ClusterLabeling label_clusters(const PhaseMap& map, Phase phase) {
  if (map.labels.size() != std::size_t(map.spec.cells()))
    throw DataError("phase map size does not match its grid");
  return label(map.spec, [&](std::size_t k) { return map.labels[k] == phase; });
}

bool spans(const ClusterLabeling& labeling, Axis axis) {
  return axis == Axis::X ? spans_x(labeling) : spans_y(labeling);
}

double spanning_probability(int L, double p, int trials, std::uint64_t seed) {
  const GridSpec spec{L, L, 1.0};
  spec.validate();
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const auto u = site_uniforms(L, seed + std::uint64_t(t));
    hits += spans_x(label(spec, [&](std::size_t k) { return u[k] < p; }));
  }
  return double(hits) / double(trials);
}

PercolationEstimate percolation_threshold_mc(int L, int trials, std::uint64_t seed, int threads) {
  if (L < 32) throw DataError("percolation lattice must be at least 32 wide");
  if (trials < 50) throw DataError("percolation estimate needs at least 50 trials");
  const GridSpec spec{L, L, 1.0};

  PercolationEstimate est;
  est.per_trial.assign(trials, 0.0);
  parallel_rows(trials, threads, [&](int t0, int t1) {
    for (int t = t0; t < t1; ++t) {
      const auto u = site_uniforms(L, seed + std::uint64_t(t));
      std::vector<double> sorted = u;
      std::sort(sorted.begin(), sorted.end());
      // Occupying the m smallest sites is monotone in m; bisect for the
      // first m that spans. Sites are occupied when u <= sorted[m - 1].
      std::size_t lo = 0, hi = sorted.size();
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const double cut = sorted[mid - 1];
        const bool ok = spans_x(label(spec, [&](std::size_t k) { return u[k] <= cut; }));
        (ok ? hi : lo) = mid;
      }
      est.per_trial[t] = double(hi) / double(sorted.size());
    }
  });

  const double n = double(trials);
  const double mean = std::accumulate(est.per_trial.begin(), est.per_trial.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : est.per_trial) ss += (v - mean) * (v - mean);
  est.p_c = mean;
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  return est;
}

}  // namespace spinodal
