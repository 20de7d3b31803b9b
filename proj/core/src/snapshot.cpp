#include "prmsda/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "prmsda/errors.hpp"

namespace prmsda {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_double(std::string_view token, std::string_view what, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || p != token.data() + token.size()) {
    throw ParseError("invalid number '" + std::string(token) + "' for " + std::string(what), line);
  }
  return v;
}

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  out << "prmsda-snapshot " << kSnapshotVersion << "\n";
  out << "hru_count " << snap.states.size() << "\n";
  out << "states";
  for (auto name : kStateFieldNames) out << ' ' << name;
  out << "\n";
  for (const auto& s : snap.states) {
    for (std::size_t i = 0; i < kStateFieldNames.size(); ++i) {
      out << (i == 0 ? "" : " ") << format_double(field(s, i));
    }
    out << "\n";
  }
  out << "parameters\n";
  for (const auto& spec : snap.parameters.registry().specs()) {
    const auto& v = snap.parameters.values(spec.id);
    out << spec.name << ' ' << v.size();
    for (double x : v) out << ' ' << format_double(x);
    out << "\n";
  }
  out << "end\n";
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> next(const char* expecting) {
    if (!std::getline(in_, buf_)) {
      throw ParseError(std::string("truncated snapshot: expected ") + expecting, line_ + 1);
    }
    ++line_;
    return split_ws(buf_);
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
};

std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw ParseError("invalid count '" + std::string(tok) + "'", line);
  }
  return n;
}

}  // namespace

Snapshot read_snapshot(std::istream& in, std::shared_ptr<const ParameterRegistry> registry) {
  LineReader r(in);
  auto head = r.next("header");
  if (head.size() != 2 || head[0] != "prmsda-snapshot") throw ParseError("not a snapshot file", r.line());
  if (parse_count(head[1], r.line()) != static_cast<std::size_t>(kSnapshotVersion)) {
    throw ParseError("unsupported snapshot version " + std::string(head[1]), r.line());
  }
  auto count = r.next("hru_count");
  if (count.size() != 2 || count[0] != "hru_count") throw ParseError("expected 'hru_count <n>'", r.line());
  const std::size_t n = parse_count(count[1], r.line());

  auto header = r.next("states header");
  if (header.empty() || header[0] != "states") throw ParseError("expected 'states' header", r.line());
  std::vector<std::size_t> columns;
  for (std::size_t i = 1; i < header.size(); ++i) {
    auto idx = state_field_index(header[i]);
    if (!idx) throw ParseError("unknown state field '" + std::string(header[i]) + "'", r.line());
    columns.push_back(*idx);
  }

  Snapshot snap{std::vector<HruState>(n), ParameterSet(registry, n)};
  for (std::size_t h = 0; h < n; ++h) {
    auto row = r.next("state row");
    if (row.size() != columns.size()) {
      throw ParseError("state row has " + std::to_string(row.size()) + " fields, expected " +
                           std::to_string(columns.size()),
                       r.line());
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      field(snap.states[h], columns[c]) = parse_double(row[c], kStateFieldNames[columns[c]], r.line());
    }
  }

  auto phead = r.next("parameters");
  if (phead.size() != 1 || phead[0] != "parameters") throw ParseError("expected 'parameters'", r.line());
  for (;;) {
    auto row = r.next("parameter row or 'end'");
    if (row.size() == 1 && row[0] == "end") break;
    if (row.size() < 2) throw ParseError("malformed parameter row", r.line());
    auto id = registry->find(row[0]);
    if (!id) throw ParseError("unknown parameter '" + std::string(row[0]) + "'", r.line());
    const std::size_t k = parse_count(row[1], r.line());
    if (row.size() != k + 2) throw ParseError("parameter '" + std::string(row[0]) + "' value count mismatch", r.line());
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = parse_double(row[i + 2], row[0], r.line());
    if (k != 0) {
      try {
        snap.parameters.set(*id, std::move(v));
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), r.line());
      }
    }
  }
  return snap;
}

void snapshot_save(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write snapshot " + path);
  write_snapshot(out, snap);
}

Snapshot snapshot_load(const std::string& path, std::shared_ptr<const ParameterRegistry> registry) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot " + path);
  return read_snapshot(in, std::move(registry));
}

}  // namespace prmsda
