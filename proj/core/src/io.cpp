#include "prmsda/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "prmsda/errors.hpp"
#include "prmsda/snapshot.hpp"

namespace prmsda {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

Date parse_date(std::string_view token, std::size_t line) {
  try {
    return Date::parse(token);
  } catch (const ParseError&) {
    throw ParseError("invalid date '" + std::string(token) + "'", line);
  }
}

int parse_int(std::string_view token, std::string_view what, std::size_t line) {
  const double v = parse_double(token, what, line);
  if (v != std::floor(v)) throw ParseError("expected an integer for " + std::string(what), line);
  return static_cast<int>(v);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

template <typename F>
auto with_path(const std::string& path, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError::in_file(path, e);
  }
}

}  // namespace

std::vector<ClimateForcing> read_forcing_csv(std::istream& in, const Basin& basin) {
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw ParseError("forcing file is empty", 1);
  ++n;
  const auto header = split_csv(line);
  if (header.size() < 4 || header[0] != "date" || header[1] != "tmax" || header[2] != "tmin") {
    throw ParseError("forcing header must start with date,tmax,tmin followed by HRU ids", n);
  }
  std::vector<std::size_t> column_hru;
  std::set<std::size_t> seen;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const int id = parse_int(header[c], "HRU id in header", n);
    std::size_t pos = 0;
    try {
      pos = basin.position_of(id);
    } catch (const ConfigError&) {
      throw ParseError("header names HRU " + std::to_string(id) + " which is not in the basin", n);
    }
    if (!seen.insert(pos).second) throw ParseError("header repeats HRU " + std::to_string(id), n);
    column_hru.push_back(pos);
  }
  if (column_hru.size() != basin.size()) {
    throw ParseError("header has " + std::to_string(column_hru.size()) + " HRU columns, basin has " +
                         std::to_string(basin.size()),
                     n);
  }

  std::vector<ClimateForcing> series;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " columns, found " + std::to_string(cells.size()),
                       n);
    }
    ClimateForcing f;
    f.date = parse_date(cells[0], n);
    if (!series.empty() && f.date != series.back().date + 1) {
      if (f.date > series.back().date + 1) {
        throw ParseError("missing date " + (series.back().date + 1).iso(), n);
      }
      throw ParseError("date " + f.date.iso() + " is out of order", n);
    }
    f.tmax_station = parse_double(cells[1], "tmax", n);
    f.tmin_station = parse_double(cells[2], "tmin", n);
    if (!std::isfinite(f.tmax_station) || !std::isfinite(f.tmin_station)) throw ParseError("non-finite temperature", n);
    if (f.tmax_station < f.tmin_station) throw ParseError("tmax below tmin", n);
    f.precip.assign(basin.size(), 0.0);
    for (std::size_t c = 3; c < cells.size(); ++c) {
      const double p = parse_double(cells[c], "precipitation", n);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ParseError("negative or non-finite precipitation for HRU " + std::string(header[c]), n);
      }
      f.precip[column_hru[c - 3]] = p;
    }
    series.push_back(std::move(f));
  }
  if (series.empty()) throw ParseError("forcing file has no data rows", n);
  return series;
}

std::vector<ClimateForcing> load_forcing_csv(const std::string& path, const Basin& basin) {
  auto in = open(path);
  return with_path(path, [&] { return read_forcing_csv(in, basin); });
}

void write_forcing_csv(std::ostream& out, const Basin& basin, const std::vector<ClimateForcing>& series) {
  out << "date,tmax,tmin";
  for (const auto& h : basin.hrus) out << ',' << h.id;
  out << '\n';
  for (const auto& f : series) {
    out << f.date.iso() << ',' << format_double(f.tmax_station) << ',' << format_double(f.tmin_station);
    for (double p : f.precip) out << ',' << format_double(p);
    out << '\n';
  }
}

std::map<Date, std::vector<SweObservation>> read_swe_observations(std::istream& in, const Basin& basin) {
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw ParseError("SWE observation file is empty", 1);
  ++n;
  const auto header = split_csv(line);
  if (header.size() != 3 || header[0] != "date" || header[1] != "hru_id" || header[2] != "swe") {
    throw ParseError("SWE observation header must be date,hru_id,swe", n);
  }
  std::map<Date, std::vector<SweObservation>> out;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw ParseError("expected 3 columns", n);
    const Date d = parse_date(cells[0], n);
    const int id = parse_int(cells[1], "hru_id", n);
    std::size_t pos = 0;
    try {
      pos = basin.position_of(id);
    } catch (const ConfigError&) {
      throw ParseError("unknown HRU id " + std::to_string(id), n);
    }
    const double swe = parse_double(cells[2], "swe", n);
    if (!(swe >= 0.0)) throw ParseError("negative SWE observation", n);
    out[d].push_back({pos, swe});
  }
  return out;
}

std::map<Date, std::vector<SweObservation>> load_swe_observations(const std::string& path, const Basin& basin) {
  auto in = open(path);
  return with_path(path, [&] { return read_swe_observations(in, basin); });
}

std::map<Date, double> read_flow_observations(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw ParseError("flow observation file is empty", 1);
  ++n;
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "date" || header[1] != "flow") {
    throw ParseError("flow observation header must be date,flow", n);
  }
  std::map<Date, double> out;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError("expected 2 columns", n);
    const double f = parse_double(cells[1], "flow", n);
    if (!(f >= 0.0)) throw ParseError("negative flow observation", n);
    out[parse_date(cells[0], n)] = f;
  }
  return out;
}

std::map<Date, double> load_flow_observations(const std::string& path) {
  auto in = open(path);
  return with_path(path, [&] { return read_flow_observations(in); });
}

namespace {

constexpr const char* kSeriesHeader =
    "date,flow_cfs,flow_std,swe_mean,swe_std,swe_std_pre_inflation,residual,surface_runoff,subsurface_flow,"
    "groundwater_flow";

}  // namespace

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << r.date.iso() << ',' << format_double(r.flow_cfs) << ',' << format_double(r.flow_std) << ','
        << format_double(r.swe_mean) << ',' << format_double(r.swe_std) << ','
        << format_double(r.swe_std_pre_inflation) << ',' << format_double(r.residual) << ','
        << format_double(r.surface_runoff) << ',' << format_double(r.subsurface_flow) << ','
        << format_double(r.groundwater_flow) << '\n';
  }
}

void save_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_series_csv(out, rows);
}

std::vector<SeriesRow> read_series_csv(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw ParseError("series file is empty", 1);
  ++n;
  if (trim(line) != kSeriesHeader) throw ParseError("unexpected series header", n);
  std::vector<SeriesRow> rows;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    const auto c = split_csv(line);
    if (c.size() != 10) throw ParseError("expected 10 columns", n);
    SeriesRow r;
    r.date = parse_date(c[0], n);
    r.flow_cfs = parse_double(c[1], "flow_cfs", n);
    r.flow_std = parse_double(c[2], "flow_std", n);
    r.swe_mean = parse_double(c[3], "swe_mean", n);
    r.swe_std = parse_double(c[4], "swe_std", n);
    r.swe_std_pre_inflation = parse_double(c[5], "swe_std_pre_inflation", n);
    r.residual = parse_double(c[6], "residual", n);
    r.surface_runoff = parse_double(c[7], "surface_runoff", n);
    r.subsurface_flow = parse_double(c[8], "subsurface_flow", n);
    r.groundwater_flow = parse_double(c[9], "groundwater_flow", n);
    rows.push_back(r);
  }
  return rows;
}

std::vector<SeriesRow> load_series_csv(const std::string& path) {
  auto in = open(path);
  return with_path(path, [&] { return read_series_csv(in); });
}

}  // namespace prmsda
