#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tqec {

/// Base class for every error raised by the toolchain. The stage name is
/// filled in by the pipeline when the error crosses a stage boundary.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string stage = {})
      : std::runtime_error(what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  std::string stage_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class GateKind { Cnot, T, Tdg, P, Pdg, V, Vdg, H, Toffoli };

enum class InitBasis { Zero, Plus, Y, A, Open };

enum class MeasBasis { Z, X, Open };

std::string_view to_string(GateKind kind);
std::string_view to_string(InitBasis basis);
std::string_view to_string(MeasBasis basis);

/// Number of qubit operands taken by a gate kind (1, 2 or 3).
int arity(GateKind kind);

/// True for the gates a TQEC circuit supports after decomposition.
bool is_tqec_gate(GateKind kind);

/// True for |A> and |Y> initialisations.
inline bool is_injection(InitBasis basis) { return basis == InitBasis::A || basis == InitBasis::Y; }

struct Gate {
  GateKind kind = GateKind::Cnot;
  std::array<int, 3> qubits{-1, -1, -1};

  static Gate cnot(int control, int target) { return {GateKind::Cnot, {control, target, -1}}; }
  static Gate single(GateKind kind, int qubit) { return {kind, {qubit, -1, -1}}; }
  static Gate toffoli(int c1, int c2, int target) { return {GateKind::Toffoli, {c1, c2, target}}; }

  int control() const { return qubits[0]; }
  int target() const { return kind == GateKind::Toffoli ? qubits[2] : qubits[1]; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Ordered gate list over logical qubits together with per-qubit
/// initialisation and measurement bases. A circuit made only of CNOTs is an
/// ICM circuit.
struct Circuit {
  std::vector<InitBasis> inits;
  std::vector<Gate> gates;
  std::vector<MeasBasis> meas;

  Circuit() = default;
  explicit Circuit(int qubit_count)
      : inits(static_cast<std::size_t>(qubit_count), InitBasis::Open),
        meas(static_cast<std::size_t>(qubit_count), MeasBasis::Open) {}

  int qubit_count() const { return static_cast<int>(inits.size()); }
  int add_qubit(InitBasis init, MeasBasis m) {
    inits.push_back(init);
    meas.push_back(m);
    return qubit_count() - 1;
  }
  std::size_t cnot_count() const;
  bool is_icm() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct Diagnostic {
  std::string rule;
  int gate = -1;   // gate index, -1 when not gate related
  int qubit = -1;  // qubit index, -1 when not qubit related
  std::string message;
};

/// Checks the structural invariants of a circuit. Never throws.
std::vector<Diagnostic> validate_circuit(const Circuit& circuit);

/// Parses the line-oriented circuit format:
///
///   qubits N
///   init Q {zero|plus|y|a|open}
///   measure Q {z|x|open}
///   cnot C T | t Q | tdg Q | p Q | pdg Q | v Q | vdg Q | h Q | toffoli A B T
///
/// `#` starts a comment. Throws ParseError carrying line and column.
Circuit parse_circuit(std::string_view text);

/// Serialises a circuit back into the text format accepted by parse_circuit.
std::string format_circuit(const Circuit& circuit);

namespace code {
inline constexpr int kEmpty = 0;
inline constexpr int kControl = 1;
inline constexpr int kTarget = 2;
inline constexpr int kInput = -100;
inline constexpr int kOutput = -101;
inline constexpr int kInitA = -99;
inline constexpr int kOutputA = -98;
inline constexpr int kInitY = -97;
inline constexpr int kOutputY = -96;
inline constexpr int kInitZero = -95;
inline constexpr int kInitPlus = -94;
inline constexpr int kMeasZ = -93;
inline constexpr int kMeasX = -92;
}  // namespace code

int init_code(InitBasis basis);
/// Terminal cell code. Rows started by an injection that leave the circuit
/// unmeasured use the injection-specific output codes.
int output_code(InitBasis init, MeasBasis meas);

/// Integer matrix form of an ICM circuit. Rows are qubits; column 0 holds the
/// initialisation code, the last column the measurement code, and every
/// column in between exactly one CNOT.
class MatrixRep {
 public:
  MatrixRep(int rows, int cols) : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows * cols), 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int at(int row, int col) const { return cells_[index(row, col)]; }
  int& at(int row, int col) { return cells_[index(row, col)]; }

  std::vector<std::vector<int>> to_rows() const;
  static MatrixRep from_rows(const std::vector<std::vector<int>>& rows);

  friend bool operator==(const MatrixRep&, const MatrixRep&) = default;

 private:
  std::size_t index(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_) throw std::out_of_range("matrix cell out of range");
    return static_cast<std::size_t>(row * cols_ + col);
  }

  int rows_;
  int cols_;
  std::vector<int> cells_;
};

MatrixRep to_matrix(const Circuit& circuit);

/// Inverse of to_matrix. Throws std::invalid_argument on malformed matrices.
Circuit from_matrix(const MatrixRep& matrix);

}  // namespace tqec
