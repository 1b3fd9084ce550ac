#include "qpfc/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qpfc {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<Bond> all_grid_bonds(const Geometry& g) {
  std::vector<Bond> out;
  for (int i = 1; i <= g.rows; ++i) {
    for (int j = 1; j < g.cols; ++j)
      out.emplace_back(g.flat(i, j), g.flat(i, j + 1));
  }
  for (int i = 1; i < g.rows; ++i) {
    for (int j = 1; j <= g.cols; ++j)
      out.emplace_back(g.flat(i, j), g.flat(i + 1, j));
  }
  return out;
}

std::vector<Bond> dimer_a_bonds(const Geometry& g) {
  if (g.cols % 2 != 0)
    throw std::invalid_argument("dimer selectors need an even number of columns");
  std::vector<Bond> out;
  for (int i = 1; i <= g.rows; ++i) {
    for (int c = 1; c <= g.cols / 2; ++c)
      out.emplace_back(g.flat(i, 2 * c - 1), g.flat(i, 2 * c));
  }
  return out;
}
}  // namespace

std::vector<Bond> bonds_of(const BondSet& set, const Geometry& g) {
  using Sel = BondSet::Sel;
  switch (set.sel) {
    case Sel::AllChain: {
      if (!g.is_chain())
        throw std::invalid_argument("allChain bond set on a grid");
      std::vector<Bond> out;
      for (int b = 1; b < g.chain_len; ++b)
        out.emplace_back(g.flat(b), g.flat(b + 1));
      return out;
    }
    case Sel::AllGrid:
      if (!g.is_grid()) throw std::invalid_argument("allGrid bond set on a chain");
      return all_grid_bonds(g);
    case Sel::GridRowsOnly: {
      if (!g.is_grid())
        throw std::invalid_argument("gridRowsOnly bond set on a chain");
      std::vector<Bond> out;
      for (int i = 1; i <= g.rows; ++i)
        for (int j = 1; j < g.cols; ++j)
          out.emplace_back(g.flat(i, j), g.flat(i, j + 1));
      return out;
    }
    case Sel::GridColsOnly: {
      if (!g.is_grid())
        throw std::invalid_argument("gridColsOnly bond set on a chain");
      std::vector<Bond> out;
      for (int i = 1; i < g.rows; ++i)
        for (int j = 1; j <= g.cols; ++j)
          out.emplace_back(g.flat(i, j), g.flat(i + 1, j));
      return out;
    }
    case Sel::DimerA:
      if (!g.is_grid()) throw std::invalid_argument("dimerA bond set on a chain");
      return dimer_a_bonds(g);
    case Sel::DimerB: {
      if (!g.is_grid()) throw std::invalid_argument("dimerB bond set on a chain");
      auto a = dimer_a_bonds(g);
      std::vector<Bond> out;
      for (const Bond& b : all_grid_bonds(g)) {
        bool in_a = false;
        for (const Bond& ab : a)
          if (ab == b) { in_a = true; break; }
        if (!in_a) out.push_back(b);
      }
      return out;
    }
    case Sel::Explicit: {
      const int n = g.sites();
      for (const Bond& b : set.list) {
        if (b.first < 0 || b.second < 0 || b.first >= n || b.second >= n)
          throw std::invalid_argument("explicit bond site out of range");
        bool neighbor = false;
        if (g.is_chain()) {
          neighbor = (b.second - b.first == 1);
        } else {
          int r1 = b.first / g.cols, c1 = b.first % g.cols;
          int r2 = b.second / g.cols, c2 = b.second % g.cols;
          neighbor = (std::abs(r1 - r2) + std::abs(c1 - c2) == 1);
        }
        if (!neighbor)
          throw std::invalid_argument("explicit bond is not nearest-neighbor");
      }
      return set.list;
    }
  }
  throw std::logic_error("unreachable bond selector");
}

std::vector<double> angle_profile(const PulseSpec& p, const Geometry& g) {
  if (!p.is_rotation())
    throw std::invalid_argument("angle_profile: evolution pulses have no per-site profile");
  const int n = g.sites();
  std::vector<double> out(n);
  if (p.kind == PulseKind::Uniform ||
      (p.kind == PulseKind::SubspacePeriodic && p.period == 0)) {
    for (int s = 0; s < n; ++s) out[s] = p.theta;
    return out;
  }
  if (g.is_chain() && p.dir != Direction::Chain)
    throw std::invalid_argument("grid direction on a chain pulse");
  if (g.is_grid() && p.dir == Direction::Chain)
    throw std::invalid_argument("chain direction on a grid pulse");
  for (int s = 0; s < n; ++s) {
    const double c = g.coordinate(s, p.dir);
    out[s] = p.theta * (1.0 - std::cos(2.0 * kPi * (c - p.focus) / p.period));
  }
  return out;
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Chain: return "chain";
    case Direction::Rows: return "rows";
    case Direction::Cols: return "cols";
  }
  return "?";
}

std::string to_string(const BondSet& b) {
  using Sel = BondSet::Sel;
  switch (b.sel) {
    case Sel::AllChain: return "allChain";
    case Sel::AllGrid: return "allGrid";
    case Sel::GridRowsOnly: return "gridRowsOnly";
    case Sel::GridColsOnly: return "gridColsOnly";
    case Sel::DimerA: return "dimerA";
    case Sel::DimerB: return "dimerB";
    case Sel::Explicit: {
      // site1a-site1b;site2a-site2b;...  (flat 0-based indices)
      std::string s = "explicit:";
      for (size_t i = 0; i < b.list.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(b.list[i].first) + '-' + std::to_string(b.list[i].second);
      }
      return s;
    }
  }
  return "?";
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw std::invalid_argument("bad axis: " + s);
}

Direction parse_direction(const std::string& s) {
  if (s == "chain") return Direction::Chain;
  if (s == "rows") return Direction::Rows;
  if (s == "cols") return Direction::Cols;
  throw std::invalid_argument("bad direction: " + s);
}

BondSet parse_bonds(const std::string& s) {
  if (s == "allChain") return BondSet::all_chain();
  if (s == "allGrid") return BondSet::all_grid();
  if (s == "gridRowsOnly") return BondSet::grid_rows_only();
  if (s == "gridColsOnly") return BondSet::grid_cols_only();
  if (s == "dimerA") return BondSet::dimer_a();
  if (s == "dimerB") return BondSet::dimer_b();
  if (s.rfind("explicit:", 0) == 0) {
    std::vector<Bond> list;
    std::string body = s.substr(9);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto dash = item.find('-');
      if (dash == std::string::npos)
        throw std::invalid_argument("bad explicit bond: " + item);
      list.emplace_back(std::stoi(item.substr(0, dash)),
                        std::stoi(item.substr(dash + 1)));
    }
    return BondSet::explicit_bonds(std::move(list));
  }
  throw std::invalid_argument("bad bond selector: " + s);
}

double parse_real(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad real: " + s);
  return v;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

// key=value fields of one record line, strict.
std::map<std::string, std::string> parse_fields(std::istringstream& ss) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (ss >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got: " + tok);
    auto key = tok.substr(0, eq);
    if (kv.count(key)) throw std::invalid_argument("duplicate key: " + key);
    kv[key] = tok.substr(eq + 1);
  }
  return kv;
}

std::string take(std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing key: " + key);
  std::string v = it->second;
  kv.erase(it);
  return v;
}

void expect_empty(const std::map<std::string, std::string>& kv) {
  if (!kv.empty())
    throw std::invalid_argument("unknown key: " + kv.begin()->first);
}

}  // namespace

void write_schedule(std::ostream& os, const Schedule& s) {
  if (!s.metadata.empty()) {
    std::istringstream meta(s.metadata);
    std::string line;
    while (std::getline(meta, line)) os << "# " << line << "\n";
  }
  if (s.geometry.is_chain()) {
    os << "GEOMETRY kind=chain n=" << s.geometry.chain_len
       << " dim=" << s.local_dim << "\n";
  } else {
    os << "GEOMETRY kind=grid rows=" << s.geometry.rows
       << " cols=" << s.geometry.cols << " dim=" << s.local_dim << "\n";
  }
  for (const PulseSpec& p : s.pulses) {
    switch (p.kind) {
      case PulseKind::Periodic:
        os << "PERIODIC axis=" << to_string(p.axis)
           << " theta=" << fmt_real(p.theta) << " period=" << fmt_real(p.period)
           << " focus=" << fmt_real(p.focus);
        if (s.geometry.is_grid()) os << " direction=" << to_string(p.dir);
        os << "\n";
        break;
      case PulseKind::Uniform:
        os << "UNIFORM axis=" << to_string(p.axis)
           << " theta=" << fmt_real(p.theta) << "\n";
        break;
      case PulseKind::Ising:
        os << "ISING theta=" << fmt_real(p.theta)
           << " bonds=" << to_string(p.bonds) << "\n";
        break;
      case PulseKind::Xxz:
        os << "XXZ j1=" << fmt_real(p.j1) << " j2=" << fmt_real(p.j2)
           << " t=" << fmt_real(p.t) << " bonds=" << to_string(p.bonds) << "\n";
        break;
      case PulseKind::Heisenberg:
        os << "HEISENBERG j=" << fmt_real(p.j) << " t=" << fmt_real(p.t)
           << " bonds=" << to_string(p.bonds) << "\n";
        break;
      case PulseKind::XyBond:
        os << "XYBOND theta=" << fmt_real(p.theta)
           << " bonds=" << to_string(p.bonds) << "\n";
        break;
      case PulseKind::SubspacePeriodic:
        os << "SUBSPACE axis=" << to_string(p.axis) << " level=" << p.level
           << " theta=" << fmt_real(p.theta) << " period=" << fmt_real(p.period)
           << " focus=" << fmt_real(p.focus) << "\n";
        break;
    }
  }
}

std::string schedule_to_string(const Schedule& s) {
  std::ostringstream os;
  write_schedule(os, s);
  return os.str();
}

Schedule parse_schedule(std::istream& is) {
  Schedule s;
  bool have_geometry = false;
  std::string line;
  std::string meta;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      if (!have_geometry) meta += meta.empty() ? body : "\n" + body;
      continue;
    }
    std::istringstream ss(line);
    std::string rec;
    ss >> rec;
    if (rec == "GEOMETRY") {
      if (have_geometry) throw std::invalid_argument("duplicate GEOMETRY line");
      auto kv = parse_fields(ss);
      std::string kind = take(kv, "kind");
      int dim = parse_int(take(kv, "dim"));
      if (dim < 2) throw std::invalid_argument("dim must be >= 2");
      if (kind == "chain") {
        s.geometry = Geometry::chain(parse_int(take(kv, "n")));
      } else if (kind == "grid") {
        int r = parse_int(take(kv, "rows"));
        int c = parse_int(take(kv, "cols"));
        s.geometry = Geometry::grid(r, c);
      } else {
        throw std::invalid_argument("bad geometry kind: " + kind);
      }
      s.local_dim = dim;
      expect_empty(kv);
      have_geometry = true;
      continue;
    }
    if (!have_geometry)
      throw std::invalid_argument("pulse record before GEOMETRY line");
    auto kv = parse_fields(ss);
    if (rec == "PERIODIC") {
      Axis ax = parse_axis(take(kv, "axis"));
      double theta = parse_real(take(kv, "theta"));
      double period = parse_real(take(kv, "period"));
      double focus = parse_real(take(kv, "focus"));
      Direction dir = Direction::Chain;
      if (s.geometry.is_grid()) dir = parse_direction(take(kv, "direction"));
      else if (kv.count("direction")) dir = parse_direction(take(kv, "direction"));
      s.pulses.push_back(PulseSpec::periodic(ax, theta, period, focus, dir));
    } else if (rec == "UNIFORM") {
      Axis ax = parse_axis(take(kv, "axis"));
      s.pulses.push_back(PulseSpec::uniform(ax, parse_real(take(kv, "theta"))));
    } else if (rec == "ISING") {
      double theta = parse_real(take(kv, "theta"));
      s.pulses.push_back(PulseSpec::ising(theta, parse_bonds(take(kv, "bonds"))));
    } else if (rec == "XXZ") {
      double j1 = parse_real(take(kv, "j1"));
      double j2 = parse_real(take(kv, "j2"));
      double t = parse_real(take(kv, "t"));
      s.pulses.push_back(PulseSpec::xxz(j1, j2, t, parse_bonds(take(kv, "bonds"))));
    } else if (rec == "HEISENBERG") {
      double j = parse_real(take(kv, "j"));
      double t = parse_real(take(kv, "t"));
      s.pulses.push_back(PulseSpec::heisenberg(j, t, parse_bonds(take(kv, "bonds"))));
    } else if (rec == "XYBOND") {
      double theta = parse_real(take(kv, "theta"));
      s.pulses.push_back(PulseSpec::xy_bond(theta, parse_bonds(take(kv, "bonds"))));
    } else if (rec == "SUBSPACE") {
      Axis ax = parse_axis(take(kv, "axis"));
      int level = parse_int(take(kv, "level"));
      double theta = parse_real(take(kv, "theta"));
      double period = parse_real(take(kv, "period"));
      double focus = parse_real(take(kv, "focus"));
      if (period == 0.0) {
        s.pulses.push_back(PulseSpec::subspace_uniform(level, ax, theta));
      } else {
        s.pulses.push_back(
            PulseSpec::subspace_periodic(level, ax, theta, period, focus));
      }
    } else {
      throw std::invalid_argument("unknown record: " + rec);
    }
    expect_empty(kv);
  }
  if (!have_geometry) throw std::invalid_argument("schedule has no GEOMETRY line");
  s.metadata = meta;
  return s;
}

Schedule parse_schedule_string(const std::string& text) {
  std::istringstream is(text);
  return parse_schedule(is);
}

}  // namespace qpfc
