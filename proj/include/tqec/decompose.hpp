#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tqec/circuit.hpp"

namespace tqec {

/// Rewrites H as P,V,P and TOFFOLI as its 6-CNOT / 7-T-type sequence. Every
/// other gate is copied unchanged.
Circuit decompose_gates(const Circuit& circuit);

/// The gate sequence substituted for a composite gate (H or TOFFOLI).
std::vector<Gate> decomposition_of(const Gate& gate);

/// Affine GF(2) rule over the effective outcomes of a template's measured
/// rows. Bit k of a mask refers to template-local row k.
struct ParityRule {
  bool constant = false;
  std::uint32_t rows = 0;

  bool eval(std::span<const int> outcomes) const;
};

struct Byproduct {
  ParityRule x;
  ParityRule z;
};

/// Measurement bases for every template-local row; the output row is Open.
using MeasPattern = std::vector<MeasBasis>;

/// Static description of a teleportation block. Local row 0 is the qubit the
/// gate acts on; rows 1.. are ancillae initialised per `ancilla_inits`.
struct TeleportTemplate {
  GateKind gate = GateKind::P;
  std::vector<InitBasis> ancilla_inits;
  std::vector<std::pair<int, int>> cnots;  // (control, target), local rows
  std::vector<MeasPattern> patterns;       // one, or two for selective blocks
  std::vector<Byproduct> byproducts;       // one per pattern
  int trigger_row = -1;                    // local row whose Z outcome selects the pattern
  int correction_outcome = 1;              // trigger outcome that requires the P correction
  int output_row = 0;

  int row_count() const { return 1 + static_cast<int>(ancilla_inits.size()); }
  bool selective() const { return patterns.size() == 2; }
};

/// Template used for a TQEC rotation gate. Throws std::invalid_argument for
/// CNOT, H and TOFFOLI.
const TeleportTemplate& teleport_template(GateKind kind);

/// One template placed into an ICM circuit.
struct TemplateInstance {
  GateKind gate = GateKind::P;
  int source_gate = -1;    // index in the decomposed circuit
  int logical_qubit = -1;
  std::vector<int> rows;   // template-local row -> ICM row
  int first_cnot = 0;      // [first_cnot, first_cnot + cnot count) in the ICM gate list
  int cnot_count = 0;

  const TeleportTemplate& shape() const { return teleport_template(gate); }
  int output_row() const { return rows[static_cast<std::size_t>(shape().output_row)]; }
  int data_row() const { return rows.front(); }
  /// ICM rows holding |A> or |Y> injections, with their state.
  std::vector<std::pair<int, InitBasis>> injections() const;
};

struct IcmCircuit {
  Circuit circuit;
  std::vector<TemplateInstance> instances;
  std::vector<int> input_rows;   // per logical qubit, its first row
  std::vector<int> output_rows;  // per logical qubit, the row it ends on
};

/// Converts a decomposed circuit into ICM form. Each rotation gate becomes a
/// teleportation block whose ancilla rows are appended below the rows
/// already owned by the acted-on logical qubit.
IcmCircuit to_icm(const Circuit& decomposed);

/// Pattern chosen for a selective block given the effective Z outcome of its
/// trigger row. Throws std::invalid_argument for non-selective instances.
const MeasPattern& select_pattern(const TemplateInstance& instance, int outcome);

/// Index (0 or 1) of the pattern select_pattern would return.
int pattern_index(const TeleportTemplate& shape, int outcome);

/// Per-qubit X/Z flip record.
class PauliFrame {
 public:
  PauliFrame() = default;
  explicit PauliFrame(int qubits) : x_(static_cast<std::size_t>(qubits), 0), z_(static_cast<std::size_t>(qubits), 0) {}

  int size() const { return static_cast<int>(x_.size()); }
  bool x(int q) const { return x_[static_cast<std::size_t>(q)] != 0; }
  bool z(int q) const { return z_[static_cast<std::size_t>(q)] != 0; }
  void flip_x(int q) { x_[static_cast<std::size_t>(q)] ^= 1; }
  void flip_z(int q) { z_[static_cast<std::size_t>(q)] ^= 1; }
  void clear(int q) { x_[static_cast<std::size_t>(q)] = z_[static_cast<std::size_t>(q)] = 0; }
  bool is_identity() const;

  /// Conjugation through CNOT(control, target).
  void propagate_cnot(int control, int target);

  /// Product of two frames over the same qubits (phases dropped).
  PauliFrame compose(const PauliFrame& other) const;

  friend bool operator==(const PauliFrame&, const PauliFrame&) = default;

 private:
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> z_;
};

}  // namespace tqec
