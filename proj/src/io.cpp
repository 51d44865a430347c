#include "ctinv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "ctinv/error.hpp"

namespace ctinv::io {

namespace {

using nlohmann::json;

constexpr double kDegree = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line);
}

int parse_l(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line) + ": not an integer: '" + s + "'");
  }
}

json meta_to_json(const Metadata& m) {
  json j = json::object();
  if (m.energy_mev) j["energy_mev"] = *m.energy_mev;
  if (m.k_per_fm) j["k_per_fm"] = *m.k_per_fm;
  if (!m.label.empty()) j["label"] = m.label;
  if (!m.generator.empty()) j["generator"] = m.generator;
  return j;
}

Metadata meta_from_json(const json& j) {
  Metadata m;
  if (!j.is_object()) throw InputError("metadata header must be a JSON object");
  if (j.contains("energy_mev")) m.energy_mev = j.at("energy_mev").get<double>();
  if (j.contains("k_per_fm")) m.k_per_fm = j.at("k_per_fm").get<double>();
  if (j.contains("label")) m.label = j.at("label").get<std::string>();
  if (j.contains("generator")) m.generator = j.at("generator").get<std::string>();
  return m;
}

struct Table {
  Metadata meta;
  std::vector<std::string> header;
  /// (line number, cells)
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

// Reads the optional metadata line, the column header and the data rows.
// Further '#' lines are comments.
Table read_table(std::istream& is, const std::vector<std::string>& required) {
  Table t;
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  bool first = true;
  while (std::getline(is, line)) {
    ++n;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      if (first) {
        const std::string body = trim(s.substr(1));
        if (!body.empty() && body[0] == '{') {
          try {
            t.meta = meta_from_json(json::parse(body));
          } catch (const json::exception& e) {
            throw InputError("line " + std::to_string(n) + ": bad metadata: " + e.what());
          }
        }
      }
      first = false;
      continue;
    }
    first = false;
    if (!have_header) {
      t.header = split(s);
      for (std::size_t i = 0; i < required.size(); ++i) {
        if (i >= t.header.size() || t.header[i] != required[i]) {
          throw InputError("expected columns starting with '" + join(required) + "', got '" + s + "'");
        }
      }
      have_header = true;
      continue;
    }
    auto cells = split(s);
    if (cells.size() > t.header.size()) {
      throw InputError("line " + std::to_string(n) + ": more fields than columns");
    }
    cells.resize(t.header.size());
    t.rows.emplace_back(n, std::move(cells));
  }
  if (!have_header) throw InputError("missing column header");
  return t;
}

template <class F>
void write_file(const std::string& path, const F& file, void (*writer)(std::ostream&, const F&)) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  writer(os, file);
  if (!os) throw InputError("write to '" + path + "' failed");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  return is;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v == 0.0 ? 0.0 : v);
  return buf;
}

cplx PhaseShiftRecord::delta() const {
  if (eta) return delta_from_elasticity(re_delta, *eta);
  return {re_delta, im_delta.value_or(0.0)};
}

PhaseShiftSet PhaseShiftFile::to_set() const {
  std::vector<Channel> ch;
  for (const PhaseShiftRecord& r : records) ch.push_back({r.l, r.delta()});
  return PhaseShiftSet(std::move(ch));
}

PhaseShiftFile PhaseShiftFile::from_set(const PhaseShiftSet& set, Metadata meta) {
  PhaseShiftFile f;
  f.meta = std::move(meta);
  for (const Channel& c : set.channels()) f.records.push_back({c.l, c.delta.real(), c.delta.imag(), {}});
  return f;
}

PotentialCurve PotentialFile::to_curve() const {
  PotentialCurve c;
  std::vector<double> xs;
  for (const PotentialRow& r : rows) {
    if (r.x <= 0.0) continue;
    xs.push_back(r.x);
    c.q.push_back(r.q);
    c.flags.push_back(r.flag);
  }
  c.grid = RadialGrid(std::move(xs));
  return c;
}

PotentialFile PotentialFile::from_curve(const PotentialCurve& curve, Metadata meta) {
  curve.validate();
  PotentialFile f;
  f.meta = std::move(meta);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    f.rows.push_back({curve.grid[i], curve.q[i], curve.flags[i]});
  }
  return f;
}

void write_phase_shifts(std::ostream& os, const PhaseShiftFile& file) {
  os << "# " << meta_to_json(file.meta).dump() << '\n';
  os << "l,re_delta,im_delta,eta\n";
  for (const PhaseShiftRecord& r : file.records) {
    if (r.im_delta && r.eta) throw InputError("record carries both im_delta and eta");
    os << r.l << ',' << format_number(r.re_delta) << ',' << opt(r.im_delta) << ',' << opt(r.eta)
       << '\n';
  }
}

PhaseShiftFile read_phase_shifts(std::istream& is, bool degrees) {
  const Table t = read_table(is, {"l", "re_delta"});
  PhaseShiftFile f;
  f.meta = t.meta;
  for (const auto& [line, cells] : t.rows) {
    PhaseShiftRecord r;
    r.l = parse_l(cells[0], line);
    r.re_delta = parse_double(cells[1], line);
    if (cells.size() > 2) r.im_delta = parse_optional(cells[2], line);
    if (cells.size() > 3) r.eta = parse_optional(cells[3], line);
    if (r.im_delta && r.eta) {
      throw InputError("line " + std::to_string(line) + ": give im_delta or eta, not both");
    }
    if (r.eta && !(*r.eta > 0.0 && *r.eta <= 1.0)) {
      throw InputError("line " + std::to_string(line) + ": eta must lie in (0, 1]");
    }
    if (degrees) {
      r.re_delta *= kDegree;
      if (r.im_delta) *r.im_delta *= kDegree;
    }
    f.records.push_back(r);
  }
  f.to_set();  // validates the channel list
  return f;
}

void write_potential(std::ostream& os, const PotentialFile& file) {
  const bool physical = file.meta.energy_mev && file.meta.k_per_fm;
  os << "# " << meta_to_json(file.meta).dump() << '\n';
  os << (physical ? "x,re_q,im_q,r,re_V,im_V,flag\n" : "x,re_q,im_q,flag\n");
  for (const PotentialRow& r : file.rows) {
    os << format_number(r.x) << ',' << format_number(r.q.real()) << ',' << format_number(r.q.imag());
    if (physical) {
      const double k = *file.meta.k_per_fm;
      const double e = *file.meta.energy_mev;
      os << ',' << format_number(r.x / k) << ',' << format_number(e * r.q.real()) << ','
         << format_number(e * r.q.imag());
    }
    os << ',' << to_string(r.flag) << '\n';
  }
}

PotentialFile read_potential(std::istream& is) {
  const Table t = read_table(is, {"x", "re_q", "im_q"});
  PotentialFile f;
  f.meta = t.meta;
  const std::size_t flag_col = t.header.size() - 1;
  if (t.header.back() != "flag") throw InputError("potential file needs a trailing flag column");
  for (const auto& [line, cells] : t.rows) {
    PotentialRow r;
    r.x = parse_double(cells[0], line);
    r.q = {parse_double(cells[1], line), parse_double(cells[2], line)};
    const std::string& flag = cells[flag_col];
    if (flag == "clean" || flag.empty()) {
      r.flag = PointFlag::Clean;
    } else if (flag == "interpolated") {
      r.flag = PointFlag::Interpolated;
    } else if (flag == "extrapolated") {
      r.flag = PointFlag::Extrapolated;
    } else {
      throw InputError("line " + std::to_string(line) + ": unknown flag '" + flag + "'");
    }
    if (!f.rows.empty() && !(r.x > f.rows.back().x)) {
      throw InputError("line " + std::to_string(line) + ": x must be strictly increasing");
    }
    f.rows.push_back(r);
  }
  return f;
}

SpinPairFile read_spin_pairs(std::istream& is, bool degrees) {
  const Table t = read_table(
      is, {"l", "re_delta_plus", "im_delta_plus", "re_delta_minus", "im_delta_minus"});
  SpinPairFile f;
  f.meta = t.meta;
  const double scale = degrees ? kDegree : 1.0;
  for (const auto& [line, cells] : t.rows) {
    SpinPairRecord r;
    r.l = parse_l(cells[0], line);
    if (cells[1].empty()) {
      throw InputError("line " + std::to_string(line) + ": missing delta_plus for l = " + cells[0]);
    }
    r.delta_plus = cplx(parse_double(cells[1], line), parse_optional(cells[2], line).value_or(0.0)) *
                   scale;
    if (!cells[3].empty()) {
      r.delta_minus =
          cplx(parse_double(cells[3], line), parse_optional(cells[4], line).value_or(0.0)) * scale;
    } else if (r.l != 0) {
      throw InputError("line " + std::to_string(line) + ": missing delta_minus for l = " + cells[0]);
    }
    f.records.push_back(r);
  }
  return f;
}

PhaseShiftFile load_phase_shifts(const std::string& path, bool degrees) {
  auto is = open_input(path);
  return read_phase_shifts(is, degrees);
}

PotentialFile load_potential(const std::string& path) {
  auto is = open_input(path);
  return read_potential(is);
}

SpinPairFile load_spin_pairs(const std::string& path, bool degrees) {
  auto is = open_input(path);
  return read_spin_pairs(is, degrees);
}

void save(const std::string& path, const PhaseShiftFile& file) {
  write_file<PhaseShiftFile>(path, file, &write_phase_shifts);
}

void save(const std::string& path, const PotentialFile& file) {
  write_file<PotentialFile>(path, file, &write_potential);
}

}  // namespace ctinv::io
