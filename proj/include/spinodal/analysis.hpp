#pragma once

#include <filesystem>
#include <vector>

#include "spinodal/micro.hpp"

namespace spinodal {

/// One row of the per-snapshot microstructure report.
struct AnalysisRow {
  double time;
  double char_length;
  double ti_fraction;  ///< share of TiRich cells
  std::size_t n_clusters;
  std::int64_t largest_cluster;
  bool spans_x;
  bool spans_y;
  double r_eff_x;
  double r_eff_y;
};

/// Threshold at `threshold`, label TiRich clusters, and solve the two-phase
/// network with sigma_Ti = 1 and sigma_Al = contrast.
AnalysisRow analyze_snapshot(const ScalarField2D& f, double time, double threshold = 0.5,
                             double contrast = 1e-4);

/// Columns time,char_length,ti_fraction,n_clusters,largest_cluster,spans_x,spans_y,R_eff_x,R_eff_y.
void write_analysis_csv(const std::filesystem::path& path, const std::vector<AnalysisRow>& rows);

}  // namespace spinodal
