#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinodal/ch_solver.hpp"
#include "spinodal/field.hpp"
#include "spinodal/fit_models.hpp"
#include "spinodal/transport.hpp"

namespace spinodal {

/// Shortest "%.17g" rendering; parses back to the identical double.
std::string format_double(double v);

// Field snapshot CSV: first line "nx,ny,h", then ny rows of nx values.
void write_field_csv(std::ostream& out, const ScalarField2D& f);
void write_field_csv(const std::filesystem::path& path, const ScalarField2D& f);
ScalarField2D read_field_csv(std::istream& in);
ScalarField2D read_field_csv(const std::filesystem::path& path);

/// "snap_t<time>.csv" with the time printed by %g.
std::string snapshot_filename(double time);

/// Columns step,time,mass,free_energy,min,max.
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<Diagnostics>& d);

/// Binary PPM (P6), one pixel per cell, row j = 0 first. Red encodes the
/// Al fraction, green the Ti fraction.
std::vector<std::uint8_t> ppm_bytes(const ScalarField2D& f);
void render_ppm(const ScalarField2D& f, const std::filesystem::path& path);

/// Numeric CSV rows. A first line that does not parse as numbers is
/// treated as a header and skipped. Rows must have `columns` entries.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t columns);

/// label,d_m,Rs_ohm_sq,Tc_K,hall_slope_ohm_per_T
std::vector<TransportRecord> read_transport_csv(const std::filesystem::path& path);
void write_transport_report(std::ostream& out, const std::vector<TransportReport>& rows);

/// Two-column (x, y) traces such as T_K,R_ohm or T_K,sigma.
std::vector<std::pair<double, double>> read_pairs_csv(const std::filesystem::path& path);

/// T_K,muH_T
std::vector<DataPoint> read_hc2_csv(const std::filesystem::path& path);
/// f_Hz,re_S21,im_S21
std::vector<DataPoint> read_s21_csv(const std::filesystem::path& path);
void write_s21_csv(const std::filesystem::path& path, const std::vector<DataPoint>& s21);

/// Plain-text table and CSV (name,unit,value,std_error,r2,ss_res,converged).
void write_fit_table(std::ostream& out, const FitModel& model, const FitResult& r);
void write_fit_csv(const std::filesystem::path& path, const FitModel& model, const FitResult& r);

}  // namespace spinodal
