/**
 * @file io.hpp
 * @brief CSV readers/writers for forcing, observations and result series.
 *
 * All files are comma separated with a header row; dates are YYYY-MM-DD.
 * Parse errors carry the 1-based line number of the offending row.
 */
#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "prmsda/ensemble.hpp"
#include "prmsda/forcing.hpp"
#include "prmsda/model.hpp"

namespace prmsda {

/// Header: date,tmax,tmin,<hru id>... ; HRU columns may appear in any order
/// but must name every basin HRU exactly once. Dates must be consecutive.
std::vector<ClimateForcing> read_forcing_csv(std::istream& in, const Basin& basin);
std::vector<ClimateForcing> load_forcing_csv(const std::string& path, const Basin& basin);
void write_forcing_csv(std::ostream& out, const Basin& basin, const std::vector<ClimateForcing>& series);

/// Rows date,hru_id,swe. Returns observations grouped by date (HRU positions).
std::map<Date, std::vector<SweObservation>> load_swe_observations(const std::string& path, const Basin& basin);
std::map<Date, std::vector<SweObservation>> read_swe_observations(std::istream& in, const Basin& basin);
/// Rows date,flow (cfs).
std::map<Date, double> load_flow_observations(const std::string& path);
std::map<Date, double> read_flow_observations(std::istream& in);

/// One day of a simulated or assimilated run.
struct SeriesRow {
  Date date;
  double flow_cfs = 0.0;
  double flow_std = 0.0;
  double swe_mean = 0.0;  ///< basin-mean SWE, inches
  double swe_std = 0.0;
  double swe_std_pre_inflation = 0.0;
  double residual = 0.0;  ///< largest per-HRU water-balance residual magnitude
  double surface_runoff = 0.0;
  double subsurface_flow = 0.0;
  double groundwater_flow = 0.0;
};

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);
void save_series_csv(const std::string& path, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(std::istream& in);
std::vector<SeriesRow> load_series_csv(const std::string& path);

}  // namespace prmsda
