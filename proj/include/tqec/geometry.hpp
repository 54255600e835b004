#pragma once

#include <array>
#include <compare>
#include <string_view>
#include <vector>

#include "tqec/circuit.hpp"

namespace tqec {

/// Integer lattice coordinate. Primal cell centres are all-odd, dual cell
/// centres all-even.
struct Coord {
  int i = 0;
  int j = 0;
  int t = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

enum class DefectKind { Primal, Dual };
enum class Axis { I, J, T };

std::string_view to_string(DefectKind kind);

/// Axis-aligned defect segment between two lattice points.
struct Segment {
  DefectKind kind = DefectKind::Primal;
  Coord a;
  Coord b;

  /// Throws std::invalid_argument when a and b are not axis-aligned or equal.
  Axis axis() const;
  int length() const;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Defect {
  DefectKind kind = DefectKind::Primal;
  std::vector<Segment> segments;
  bool closed = false;
};

enum class PinRole { Injection, Io, BoxOutput, Ghost };
enum class StateType { None, A, Y };

std::string_view to_string(PinRole role);
std::string_view to_string(StateType state);

struct Pin {
  Coord coord;
  DefectKind kind = DefectKind::Primal;
  PinRole role = PinRole::Io;
  StateType state = StateType::None;
  int row = -1;  // circuit row the pin belongs to, -1 for box pins

  friend bool operator==(const Pin&, const Pin&) = default;
};

/// State injection. The vertex uses lattice-vertex coordinates; the two
/// pyramid defects are represented by their pins only.
struct Injection {
  Coord vertex;
  StateType state = StateType::A;
  std::array<int, 2> pins{-1, -1};  // indices into Geometry::pins
  int row = -1;
};

/// Boundary geometry variants placed at qubit inputs and outputs. The
/// measurement variants are the initialisation geometries mirrored in t.
enum class IoTemplate { ZInit, XInit, ZMeas, XMeas, OpenInput, OpenOutput, Injection };

std::string_view to_string(IoTemplate tag);

enum class PortRole { Input, Output };
enum class PortBasis { Z, X, Open, InjectionA, InjectionY };

/// Template tag for an input or output of the given basis. Z and X swap for
/// dual qubits. Throws std::invalid_argument for injected outputs.
IoTemplate io_geometry(PortRole role, PortBasis basis, DefectKind qubit_kind);

struct IOPort {
  PortRole role = PortRole::Input;
  PortBasis basis = PortBasis::Open;
  IoTemplate tag = IoTemplate::OpenInput;
  std::array<int, 2> pins{-1, -1};
  int qubit_row = -1;

  bool configurable() const { return basis == PortBasis::Open; }
};

struct BoxDim {
  StateType state = StateType::Y;
  int ispan = 4;
  int jspan = 4;
  int tspan = 8;
};

enum class BoxStatus { Pending, Success, Failed };

std::string_view to_string(BoxStatus status);

/// Placed distillation box. It occupies [origin, origin + span) on every
/// axis; its two output pins sit just past the face toward the circuit.
struct BoxInstance {
  BoxDim dim;
  Coord origin;
  std::array<Pin, 2> pins;
  BoxStatus status = BoxStatus::Pending;
  bool spare = false;
};

/// Primal defect routed from a box pin to a circuit pin.
struct Connection {
  int box = -1;
  int box_pin = 0;       // 0 or 1
  int circuit_pin = -1;  // index into Geometry::pins
  std::vector<Segment> segments;
};

struct LayoutParams {
  int i_inner = 1;
  int i_outer = 5;
  int j0 = 1;
  int j_pitch = 6;
  int t_pitch = 6;
  int t_in = 1;

  /// Throws std::invalid_argument if the parameters break the parity or
  /// spacing rules the generator relies on.
  void validate() const;
  int row_j(int row) const { return j0 + j_pitch * row; }
  /// t of the braid plane of CNOT column c (1-based).
  int braid_t(int column) const { return t_in + 1 + column * t_pitch; }
  int t_out(int columns) const { return t_in + (columns + 1) * t_pitch; }
};

struct RowStrands {
  int row = -1;
  int j = 0;
  int inner = -1;  // defect index
  int outer = -1;
};

struct BraidLoop {
  int column = 0;  // 1-based CNOT column
  int control = -1;
  int target = -1;
  int defect = -1;
};

struct Geometry {
  LayoutParams params;
  int rows = 0;
  int columns = 0;
  std::vector<Defect> defects;
  std::vector<Pin> pins;
  std::vector<Injection> injections;
  std::vector<IOPort> ports;
  std::vector<BoxInstance> boxes;
  std::vector<Connection> connections;
  std::vector<RowStrands> strands;
  std::vector<BraidLoop> loops;

  /// Every defect segment followed by every connection segment.
  std::vector<Segment> all_segments() const;
  bool empty() const;
};

/// Builds the single-layer geometry of an ICM matrix: a primal pair per row
/// running along t and a dual loop per CNOT column.
Geometry generate_geometry(const MatrixRep& matrix, const LayoutParams& params = {});

/// Closed dual loop in the braid plane of `column` linking the inner strands
/// of the two rows and detouring around the inner strands between them.
std::vector<Segment> cnot_braid_template(int control_row, int target_row, int column, const LayoutParams& params);

/// Winding number of a planar constant-t loop around the (i, j) point where
/// a t-directed strand crosses its plane; 0 if the strand misses the plane.
int linking_number(const std::vector<Segment>& loop, const std::vector<Segment>& strand);

/// Parity and shape diagnostics. Never throws.
std::vector<Diagnostic> validate_parity(const Geometry& geometry);

}  // namespace tqec
