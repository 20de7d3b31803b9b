#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "prmsda/parameters.hpp"
#include "prmsda/types.hpp"

namespace prmsda {

inline constexpr int kSnapshotVersion = 1;

/// Model state of every HRU plus the parameter values that produced it.
struct Snapshot {
  std::vector<HruState> states;
  ParameterSet parameters;

  bool operator==(const Snapshot& o) const { return states == o.states && parameters == o.parameters; }
};

/// Text format documented in docs/formats.md. Doubles are written in
/// shortest round-trip form so load(save(x)) == x bit for bit.
void write_snapshot(std::ostream& out, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in, std::shared_ptr<const ParameterRegistry> registry);

void snapshot_save(const std::string& path, const Snapshot& snap);
Snapshot snapshot_load(const std::string& path, std::shared_ptr<const ParameterRegistry> registry);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a full token; throws ParseError naming `what`.
double parse_double(std::string_view token, std::string_view what, std::size_t line = 0);

}  // namespace prmsda
