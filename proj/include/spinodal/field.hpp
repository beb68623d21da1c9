#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace spinodal {

/// Uniform periodic 2D grid: nx columns (x index i), ny rows (y index j).
struct GridSpec {
  int nx = 256;
  int ny = 256;
  double h = 1.0;

  /// Throws DataError unless nx, ny >= 4 and h > 0.
  void validate() const;
  std::int64_t cells() const { return std::int64_t(nx) * ny; }
  bool power_of_two() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major storage: row j holds the nx values x(i, j) for i = 0..nx-1.
using FieldArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class ScalarField2D {
public:
  ScalarField2D() = default;
  explicit ScalarField2D(const GridSpec& spec, double fill = 0.0);
  ScalarField2D(const GridSpec& spec, FieldArray values);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  double h() const { return spec_.h; }

  double& operator()(int i, int j) { return values_(j, i); }
  double operator()(int i, int j) const { return values_(j, i); }

  const FieldArray& values() const { return values_; }
  FieldArray& values() { return values_; }

  std::span<const double> data() const { return {values_.data(), std::size_t(values_.size())}; }
  std::span<double> data() { return {values_.data(), std::size_t(values_.size())}; }

  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const ScalarField2D& a, const ScalarField2D& b) {
    return a.spec_ == b.spec_ && (a.values_ == b.values_).all();
  }

private:
  GridSpec spec_;
  FieldArray values_;
};

struct FieldStats {
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// i.i.d. N(mean, variance) per cell. Each value is a pure function of
/// (seed, cell index), so the result does not depend on `threads`.
ScalarField2D gaussian_field(const GridSpec& spec, double mean, double variance,
                             std::uint64_t seed, int threads = 1);

/// Five-point Laplacian with periodic wraparound.
ScalarField2D laplacian_periodic(const ScalarField2D& f, int threads = 1);

/// Raw kernel behind laplacian_periodic; `out` must not alias `in`.
void laplacian_periodic(std::span<const double> in, std::span<double> out,
                        const GridSpec& spec, int threads = 1);

/// Population statistics; summation is serial so results are reproducible.
FieldStats field_stats(const ScalarField2D& f);

/// Cyclic shift by (di, dj) cells.
ScalarField2D shift_periodic(const ScalarField2D& f, int di, int dj);

/// Runs fn(row_begin, row_end) over [0, rows) split into contiguous blocks.
/// Falls back to a plain call when threads <= 1.
template <class Fn>
void parallel_rows(int rows, int threads, Fn&& fn);

/// 64-bit mixing function used as a counter-based generator.
std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal deviate that depends only on (seed, counter).
double counter_normal(std::uint64_t seed, std::uint64_t counter);

/// Uniform deviate in [0, 1) that depends only on (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

}  // namespace spinodal

#include "spinodal/parallel.inl"
