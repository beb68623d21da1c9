#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "spinodal/field.hpp"

namespace spinodal {

// ---------------------------------------------------------------- spectra

/// In-place radix-2 complex FFT. Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false);

/// Row-column 2D FFT of a real field (power-of-two sides).
std::vector<std::complex<double>> fft2(const ScalarField2D& f);

/// Coarsening length L = 2 pi sum S(k) / sum |k| S(k) over k != 0, where
/// S is the power spectrum of x - mean(x). Throws DataError for
/// non-power-of-two grids or a constant field.
double characteristic_length(const ScalarField2D& f);

// ---------------------------------------------------------------- phases

enum class Phase : std::uint8_t { AlRich = 0, TiRich = 1 };

struct PhaseMap {
  GridSpec spec;
  std::vector<Phase> labels;  ///< row-major, same layout as ScalarField2D
  double threshold = 0.5;

  Phase at(int i, int j) const { return labels[std::size_t(j) * spec.nx + i]; }
};

/// TiRich where x >= threshold.
PhaseMap threshold_phases(const ScalarField2D& f, double threshold = 0.5);

struct ClusterLabeling {
  GridSpec spec;
  std::vector<int> id;       ///< -1 for cells not in the chosen phase
  std::vector<std::int64_t> sizes;  ///< indexed by cluster id

  std::size_t count() const { return sizes.size(); }
  std::int64_t largest() const;
};

/// 4-connected components of `phase`, non-periodic boundaries.
ClusterLabeling label_clusters(const PhaseMap& map, Phase phase);

enum class Axis { X, Y };

/// True iff one cluster touches both opposite edges along `axis`.
bool spans(const ClusterLabeling& labeling, Axis axis);

struct PercolationEstimate {
  double p_c;
  double std_error;
  std::vector<double> per_trial;
};

/// Site-percolation spanning threshold on an L x L square lattice. Each
/// trial draws one uniform value per site (seed + trial index), then
/// bisects over occupation level for the smallest p at which an
/// x-spanning cluster exists.
PercolationEstimate percolation_threshold_mc(int L, int trials, std::uint64_t seed,
                                             int threads = 1);

/// Fraction of `trials` random L x L maps at occupation p that span along x.
double spanning_probability(int L, double p, int trials, std::uint64_t seed);

// ------------------------------------------------------------- conduction

/// Per-cell conductivity, all entries strictly positive.
struct ConductivityMap {
  GridSpec spec;
  std::vector<double> sigma;  ///< row-major

  double at(int i, int j) const { return sigma[std::size_t(j) * spec.nx + i]; }
  void validate() const;
};

/// sigma = sigma_ti on TiRich cells, sigma_ti * contrast on AlRich cells.
ConductivityMap two_phase_conductivity(const PhaseMap& map, double sigma_ti = 1.0,
                                       double contrast = 1e-4);

struct SheetResistance {
  double r_square;   ///< R_eff * width / length
  double current;    ///< total current at unit bias
  int iterations;
  double residual;   ///< final relative residual
};

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  ///< 0 picks 10 * cells
};

/// Kirchhoff network over cell centers with unit bias between the two edges
/// normal to `axis`, insulating lateral edges. Bonds use the series
/// conductance of two half cells (harmonic mean); each electrode couples
/// to its edge row through a half cell. Solved by Jacobi-preconditioned
/// conjugate gradients; throws NumericalError with the residual when CG
/// does not converge.
SheetResistance effective_sheet_resistance(const ConductivityMap& c, Axis axis,
                                           const CgOptions& opts = {});

/// Same network solved by a dense LU factorization. Limited to 32x32.
double effective_sheet_resistance_dense(const ConductivityMap& c, Axis axis);

}  // namespace spinodal
