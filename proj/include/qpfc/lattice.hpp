#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Lattice geometries, bond sets, pulse primitives and schedules.
// Sites are 1-based: chain sites i in [1, N], grid sites (i, j) with i the
// row and j the column. Internally sites flatten to 0-based indices in
// row-major order; site 1 (or (1,1)) is the most significant digit of the
// base-d basis index.

namespace qpfc {

enum class Axis { X, Y, Z };

// Which site coordinate drives a periodic profile on a grid:
//   Rows -> the row index, Cols -> the column index.
enum class Direction { Chain, Rows, Cols };

struct Geometry {
  enum class Kind { Chain, Grid };
  Kind kind = Kind::Chain;
  int chain_len = 0;  // N, chains only
  int rows = 0, cols = 0;  // grids only

  static Geometry chain(int n) {
    if (n < 2) throw std::invalid_argument("chain length must be >= 2");
    Geometry g;
    g.kind = Kind::Chain;
    g.chain_len = n;
    return g;
  }
  static Geometry grid(int rows, int cols) {
    if (rows < 2 || cols < 2)
      throw std::invalid_argument("grid must be at least 2x2");
    Geometry g;
    g.kind = Kind::Grid;
    g.rows = rows;
    g.cols = cols;
    return g;
  }

  bool is_chain() const { return kind == Kind::Chain; }
  bool is_grid() const { return kind == Kind::Grid; }

  int sites() const { return is_chain() ? chain_len : rows * cols; }

  // 1-based chain site -> flat 0-based index.
  int flat(int i) const {
    if (!is_chain()) throw std::invalid_argument("flat(i): not a chain");
    if (i < 1 || i > chain_len) throw std::out_of_range("chain site out of range");
    return i - 1;
  }
  // 1-based grid site (i, j) -> flat 0-based index, row-major.
  int flat(int i, int j) const {
    if (!is_grid()) throw std::invalid_argument("flat(i,j): not a grid");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw std::out_of_range("grid site out of range");
    return (i - 1) * cols + (j - 1);
  }
  // Coordinate of flat site s along a profile direction, 1-based.
  int coordinate(int s, Direction dir) const {
    if (is_chain()) {
      if (dir != Direction::Chain)
        throw std::invalid_argument("grid direction on a chain");
      return s + 1;
    }
    switch (dir) {
      case Direction::Rows: return s / cols + 1;
      case Direction::Cols: return s % cols + 1;
      default: throw std::invalid_argument("chain direction on a grid");
    }
  }

  bool operator==(const Geometry& o) const {
    return kind == o.kind && chain_len == o.chain_len && rows == o.rows &&
           cols == o.cols;
  }
};

using Bond = std::pair<int, int>;  // flat site indices, first < second

struct BondSet {
  enum class Sel {
    AllChain,
    AllGrid,
    GridRowsOnly,
    GridColsOnly,
    DimerA,
    DimerB,
    Explicit
  };
  Sel sel = Sel::AllChain;
  std::vector<Bond> list;  // Explicit only

  static BondSet all_chain() { return {Sel::AllChain, {}}; }
  static BondSet all_grid() { return {Sel::AllGrid, {}}; }
  static BondSet grid_rows_only() { return {Sel::GridRowsOnly, {}}; }
  static BondSet grid_cols_only() { return {Sel::GridColsOnly, {}}; }
  static BondSet dimer_a() { return {Sel::DimerA, {}}; }
  static BondSet dimer_b() { return {Sel::DimerB, {}}; }
  static BondSet explicit_bonds(std::vector<Bond> bonds) {
    BondSet b{Sel::Explicit, std::move(bonds)};
    return b;
  }

  bool operator==(const BondSet& o) const {
    return sel == o.sel && list == o.list;
  }
};

// Deterministic, duplicate-free bond enumeration. Chain bond b couples
// (b, b+1); grid bonds are row-major, horizontal before vertical.
std::vector<Bond> bonds_of(const BondSet& set, const Geometry& g);

enum class PulseKind {
  Periodic,
  Uniform,
  Ising,
  Xxz,
  Heisenberg,
  XyBond,
  SubspacePeriodic
};

// One globally applied control primitive. Semantics:
//   Periodic        per-site rotation exp(-i theta_i sigma^axis) with
//                   theta_i = theta * (1 - cos(2 pi (c_i - focus) / period)),
//                   c_i the site coordinate along `dir`
//   Uniform         exp(-i theta sigma^axis) on every site
//   Ising           exp(+i theta sum_bonds sigma^z sigma^z)
//   Xxz             exp(-i t sum_bonds [j1 ZZ - j2 (XX + YY)])
//   Heisenberg      exp(-i t j sum_bonds (XX + YY + ZZ))
//   XyBond          exp(+i theta sum_bonds (XX + YY))
//   SubspacePeriodic  Periodic profile acting on the two-level subspace
//                   {|a_{level-1}>, |a_level>} per site (|a_0> = |1>);
//                   period == 0 means a uniform subspace pulse
struct PulseSpec {
  PulseKind kind = PulseKind::Uniform;
  Axis axis = Axis::X;
  double theta = 0.0;
  double period = 0.0;
  double focus = 0.0;
  Direction dir = Direction::Chain;
  BondSet bonds;
  double j1 = 0.0, j2 = 0.0, j = 0.0, t = 0.0;
  int level = 0;  // SubspacePeriodic only, >= 1

  static PulseSpec periodic(Axis axis, double theta, double period,
                            double focus, Direction dir = Direction::Chain) {
    if (period <= 0) throw std::invalid_argument("periodic pulse needs period > 0");
    PulseSpec p;
    p.kind = PulseKind::Periodic;
    p.axis = axis;
    p.theta = theta;
    p.period = period;
    p.focus = focus;
    p.dir = dir;
    return p;
  }
  static PulseSpec uniform(Axis axis, double theta) {
    PulseSpec p;
    p.kind = PulseKind::Uniform;
    p.axis = axis;
    p.theta = theta;
    return p;
  }
  static PulseSpec ising(double theta, BondSet bonds) {
    PulseSpec p;
    p.kind = PulseKind::Ising;
    p.theta = theta;
    p.bonds = std::move(bonds);
    return p;
  }
  static PulseSpec xxz(double j1, double j2, double t, BondSet bonds) {
    PulseSpec p;
    p.kind = PulseKind::Xxz;
    p.j1 = j1;
    p.j2 = j2;
    p.t = t;
    p.bonds = std::move(bonds);
    return p;
  }
  static PulseSpec heisenberg(double j, double t, BondSet bonds) {
    PulseSpec p;
    p.kind = PulseKind::Heisenberg;
    p.j = j;
    p.t = t;
    p.bonds = std::move(bonds);
    return p;
  }
  static PulseSpec xy_bond(double theta, BondSet bonds) {
    PulseSpec p;
    p.kind = PulseKind::XyBond;
    p.theta = theta;
    p.bonds = std::move(bonds);
    return p;
  }
  static PulseSpec subspace_periodic(int level, Axis axis, double theta,
                                     double period, double focus) {
    if (level < 1) throw std::invalid_argument("subspace level must be >= 1");
    if (period <= 0) throw std::invalid_argument("subspace periodic pulse needs period > 0");
    PulseSpec p;
    p.kind = PulseKind::SubspacePeriodic;
    p.level = level;
    p.axis = axis;
    p.theta = theta;
    p.period = period;
    p.focus = focus;
    return p;
  }
  static PulseSpec subspace_uniform(int level, Axis axis, double theta) {
    if (level < 1) throw std::invalid_argument("subspace level must be >= 1");
    PulseSpec p;
    p.kind = PulseKind::SubspacePeriodic;
    p.level = level;
    p.axis = axis;
    p.theta = theta;
    p.period = 0.0;  // uniform sentinel
    return p;
  }

  bool is_rotation() const {
    return kind == PulseKind::Periodic || kind == PulseKind::Uniform ||
           kind == PulseKind::SubspacePeriodic;
  }

  // Phase of the underlying cosine field, phi = -2 pi focus / period.
  double phase() const {
    if (kind != PulseKind::Periodic && kind != PulseKind::SubspacePeriodic)
      throw std::invalid_argument("phase(): not a periodic pulse");
    if (period == 0) throw std::invalid_argument("phase(): uniform subspace pulse");
    return -2.0 * 3.14159265358979323846 * focus / period;
  }

  // Hermitian adjoint of the pulse unitary.
  PulseSpec inverse() const {
    PulseSpec p = *this;
    switch (kind) {
      case PulseKind::Xxz:
      case PulseKind::Heisenberg:
        p.t = -t;
        break;
      default:
        p.theta = -theta;
        break;
    }
    return p;
  }
};

// Per-site rotation angles of a single-site pulse; indexed by flat site.
std::vector<double> angle_profile(const PulseSpec& p, const Geometry& g);

struct Schedule {
  Geometry geometry;
  int local_dim = 2;
  std::vector<PulseSpec> pulses;
  std::string metadata;

  // Every pulse counts as exactly one elementary step.
  int step_count() const { return static_cast<int>(pulses.size()); }

  void append(const Schedule& other) {
    if (!(other.geometry == geometry) || other.local_dim != local_dim)
      throw std::invalid_argument("schedule concat: geometry mismatch");
    pulses.insert(pulses.end(), other.pulses.begin(), other.pulses.end());
  }
};

// Plain-text schedule format, one record per line (see README).
void write_schedule(std::ostream& os, const Schedule& s);
std::string schedule_to_string(const Schedule& s);
Schedule parse_schedule(std::istream& is);
Schedule parse_schedule_string(const std::string& text);

std::string to_string(Axis a);
std::string to_string(Direction d);
std::string to_string(const BondSet& b);

}  // namespace qpfc
