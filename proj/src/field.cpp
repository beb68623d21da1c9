#include "spinodal/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinodal/errors.hpp"

namespace spinodal {

void GridSpec::validate() const {
  if (nx < 4 || ny < 4)
    throw DataError("grid must be at least 4x4, got " + std::to_string(nx) + "x" +
                    std::to_string(ny));
  if (!(h > 0.0) || !std::isfinite(h)) throw DataError("grid spacing h must be positive");
}

bool GridSpec::power_of_two() const {
  auto pow2 = [](int n) { return n > 0 && (n & (n - 1)) == 0; };
  return pow2(nx) && pow2(ny);
}

ScalarField2D::ScalarField2D(const GridSpec& spec, double fill) : spec_(spec) {
  spec_.validate();
  values_.setConstant(spec_.ny, spec_.nx, fill);
}

ScalarField2D::ScalarField2D(const GridSpec& spec, FieldArray values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.rows() != spec_.ny || values_.cols() != spec_.nx)
    throw DataError("field values do not match grid " + std::to_string(spec_.nx) + "x" +
                    std::to_string(spec_.ny));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter * 2 + 1));
  return double(bits >> 11) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t counter) {
  // Box-Muller on two independent streams keyed by the same counter.
  const double u1 = 1.0 - counter_uniform(seed, 2 * counter);  // (0, 1]
  const double u2 = counter_uniform(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ScalarField2D gaussian_field(const GridSpec& spec, double mean, double variance,
                             std::uint64_t seed, int threads) {
  spec.validate();
  if (!(variance >= 0.0) || !std::isfinite(variance))
    throw DataError("variance must be non-negative");
  if (!(mean >= 0.0 && mean <= 1.0)) throw DataError("mean fraction must lie in [0, 1]");
  ScalarField2D f(spec);
  const double sd = std::sqrt(variance);
  double* out = f.data().data();
  const int nx = spec.nx;
  parallel_rows(spec.ny, threads, [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::uint64_t idx = std::uint64_t(j) * nx + i;
        out[idx] = sd == 0.0 ? mean : mean + sd * counter_normal(seed, idx);
      }
  });
  return f;
}

void laplacian_periodic(std::span<const double> in, std::span<double> out, const GridSpec& spec,
                        int threads) {
  const int nx = spec.nx;
  const int ny = spec.ny;
  const double inv_h2 = 1.0 / (spec.h * spec.h);
  parallel_rows(ny, threads, [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      const double* c = in.data() + std::size_t(j) * nx;
      const double* up = in.data() + std::size_t(j == ny - 1 ? 0 : j + 1) * nx;
      const double* dn = in.data() + std::size_t(j == 0 ? ny - 1 : j - 1) * nx;
      double* o = out.data() + std::size_t(j) * nx;
      o[0] = (c[1] + c[nx - 1] + up[0] + dn[0] - 4.0 * c[0]) * inv_h2;
      for (int i = 1; i < nx - 1; ++i)
        o[i] = (c[i + 1] + c[i - 1] + up[i] + dn[i] - 4.0 * c[i]) * inv_h2;
      o[nx - 1] = (c[0] + c[nx - 2] + up[nx - 1] + dn[nx - 1] - 4.0 * c[nx - 1]) * inv_h2;
    }
  });
}

ScalarField2D laplacian_periodic(const ScalarField2D& f, int threads) {
  ScalarField2D out(f.spec());
  laplacian_periodic(f.data(), out.data(), f.spec(), threads);
  return out;
}

FieldStats field_stats(const ScalarField2D& f) {
  const auto v = f.data();
  FieldStats s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.variance = ss / double(v.size());
  return s;
}

ScalarField2D shift_periodic(const ScalarField2D& f, int di, int dj) {
  ScalarField2D out(f.spec());
  const int nx = f.nx(), ny = f.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out(((i + di) % nx + nx) % nx, ((j + dj) % ny + ny) % ny) = f(i, j);
  return out;
}

}  // namespace spinodal
