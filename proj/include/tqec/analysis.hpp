#pragma once

#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "tqec/geometry.hpp"

namespace tqec {

/// Inclusive coordinate bounds.
struct BoundingBox {
  Coord min;
  Coord max;

  /// Number of cells covered on each axis (max - min + 1).
  Coord extent() const { return {max.i - min.i + 1, max.j - min.j + 1, max.t - min.t + 1}; }
};

/// Bounds of every segment endpoint, pin, injection vertex and box cell.
/// Throws std::invalid_argument for an empty geometry.
BoundingBox bounding_box(const Geometry& geometry);

struct DistanceReport {
  int defect_diameter = 0;
  std::optional<int> min_separation;  // unset when no two same-kind defects exist
  int ring_length = 0;
  std::optional<int> chain_length;
  int code_distance = 0;
};

/// Ring 4*d_f, chain separation+1, distance the smaller of the two.
DistanceReport distance_report(int defect_diameter, std::optional<int> separation);

/// Distance of a geometry whose coordinates are cubes of side d: every
/// defect is d cells wide and separations scale by d. Separations are taken
/// between distinct same-kind circuit defects; connections are ignored.
DistanceReport min_code_distance(const Geometry& geometry, int d = 1);

struct VolumeReport {
  int cube_side = 1;
  Coord bbox_cubes;
  Coord units;
  long long volume_units = 0;
};

/// Volume units covering a box of the given size in cubes.
VolumeReport volume_from_cubes(Coord cubes);

/// Converts the bounding box (cells) to cubes of side d and tiles it with
/// volume units of 5 cubes per side.
VolumeReport volume_units(const Geometry& geometry, int d = 1);

enum class QubitBasis { X, Z, Injected, UnmeasuredIO };

std::string_view to_string(QubitBasis basis);

struct LayerQubit {
  int i = 0;
  int j = 0;
  QubitBasis basis = QubitBasis::X;
};

struct Layer {
  int t = 0;
  DefectKind kind = DefectKind::Primal;
  std::vector<LayerQubit> qubits;
};

/// Slices the lattice [0, extent) along t into alternating primal (even t)
/// and dual (odd t) layers. The last layer index is rounded up to even so
/// that there is one more primal layer than dual ones. Throws
/// std::invalid_argument when extent does not cover the bounding box.
std::vector<Layer> slice_layers(const Geometry& geometry, Coord extent);

/// Smallest slicing extent covering the geometry with one spare lattice
/// point on each upper side.
Coord default_extent(const Geometry& geometry);

enum class InstructionOp { Init, Entangle, Measure };

std::string_view to_string(InstructionOp op);

struct Instruction {
  InstructionOp op = InstructionOp::Init;
  int layer = 0;
  int other = -1;  // second layer of an Entangle

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Hardware loop over alternating layers p0 d0 p1 ... pn. Throws
/// std::invalid_argument if the layers do not alternate starting and ending
/// with a primal layer.
std::vector<Instruction> execution_schedule(const std::vector<Layer>& layers);

/// Writes one JSON object per instruction and returns the number of lines.
std::size_t write_instruction_stream(std::ostream& out, const std::vector<Layer>& layers,
                                     const std::vector<Instruction>& stream);

}  // namespace tqec
