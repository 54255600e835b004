#include "tqec/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace tqec {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Cnot: return "cnot";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::P: return "p";
    case GateKind::Pdg: return "pdg";
    case GateKind::V: return "v";
    case GateKind::Vdg: return "vdg";
    case GateKind::H: return "h";
    case GateKind::Toffoli: return "toffoli";
  }
  return "?";
}

std::string_view to_string(InitBasis basis) {
  switch (basis) {
    case InitBasis::Zero: return "zero";
    case InitBasis::Plus: return "plus";
    case InitBasis::Y: return "y";
    case InitBasis::A: return "a";
    case InitBasis::Open: return "open";
  }
  return "?";
}

std::string_view to_string(MeasBasis basis) {
  switch (basis) {
    case MeasBasis::Z: return "z";
    case MeasBasis::X: return "x";
    case MeasBasis::Open: return "open";
  }
  return "?";
}

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::Cnot: return 2;
    case GateKind::Toffoli: return 3;
    default: return 1;
  }
}

bool is_tqec_gate(GateKind kind) { return kind != GateKind::H && kind != GateKind::Toffoli; }

std::size_t Circuit::cnot_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::Cnot; }));
}

bool Circuit::is_icm() const { return cnot_count() == gates.size(); }

std::vector<Diagnostic> validate_circuit(const Circuit& circuit) {
  std::vector<Diagnostic> out;
  const int n = circuit.qubit_count();
  if (circuit.meas.size() != circuit.inits.size()) {
    out.push_back({"basis-count", -1, -1, "init and measurement lists differ in length"});
  }
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const Gate& gate = circuit.gates[g];
    const int gi = static_cast<int>(g);
    const int k = arity(gate.kind);
    bool in_range = true;
    for (int i = 0; i < k; ++i) {
      const int q = gate.qubits[static_cast<std::size_t>(i)];
      if (q < 0 || q >= n) {
        in_range = false;
        out.push_back({"qubit-range", gi, q,
                       "gate " + std::to_string(g) + " (" + std::string(to_string(gate.kind)) + ") uses qubit " +
                           std::to_string(q) + " outside [0, " + std::to_string(n) + ")"});
      }
    }
    if (!in_range) continue;
    if (gate.kind == GateKind::Cnot && gate.qubits[0] == gate.qubits[1]) {
      out.push_back({"cnot-distinct", gi, gate.qubits[0],
                     "gate " + std::to_string(g) + ": control equals target"});
    }
    if (gate.kind == GateKind::Toffoli) {
      const auto& q = gate.qubits;
      if (q[0] == q[1] || q[0] == q[2] || q[1] == q[2]) {
        out.push_back({"toffoli-distinct", gi, q[2], "gate " + std::to_string(g) + ": toffoli operands not distinct"});
      }
    }
  }
  return out;
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

std::optional<GateKind> gate_keyword(std::string_view word) {
  static const std::unordered_map<std::string_view, GateKind> table = {
      {"cnot", GateKind::Cnot}, {"t", GateKind::T},     {"tdg", GateKind::Tdg}, {"p", GateKind::P},
      {"pdg", GateKind::Pdg},   {"v", GateKind::V},     {"vdg", GateKind::Vdg}, {"h", GateKind::H},
      {"toffoli", GateKind::Toffoli}};
  auto it = table.find(word);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

class LineParser {
 public:
  LineParser(std::size_t line_no, std::vector<Token> tokens) : line_(line_no), tokens_(std::move(tokens)) {}

  [[noreturn]] void fail(std::size_t token, const std::string& message) const {
    const std::size_t col = token < tokens_.size() ? tokens_[token].column
                                                   : (tokens_.empty() ? 1 : tokens_.back().column + tokens_.back().text.size());
    throw ParseError(line_, col, message);
  }

  void expect_count(std::size_t count) const {
    if (tokens_.size() < count) fail(tokens_.size(), "expected " + std::to_string(count - 1) + " operand(s)");
    if (tokens_.size() > count) fail(count, "unexpected token '" + std::string(tokens_[count].text) + "'");
  }

  int integer(std::size_t token) const {
    const auto text = tokens_[token].text;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
      fail(token, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
  }

  int qubit(std::size_t token, int qubit_count) const {
    const int q = integer(token);
    if (q >= qubit_count) {
      fail(token, "qubit index " + std::to_string(q) + " out of range for " + std::to_string(qubit_count) + " qubit(s)");
    }
    return q;
  }

  std::string_view word(std::size_t token) const { return tokens_[token].text; }
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::vector<Token> tokens_;
};

}  // namespace

Circuit parse_circuit(std::string_view text) {
  std::optional<Circuit> circuit;
  std::vector<bool> init_seen;
  std::vector<bool> meas_seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const LineParser lp(line_no, tokens);
    const std::string_view head = lp.word(0);

    if (head == "qubits") {
      if (circuit) lp.fail(0, "duplicate qubit declaration");
      lp.expect_count(2);
      const int n = lp.integer(1);
      if (n == 0) lp.fail(1, "qubit count must be positive");
      circuit.emplace(n);
      init_seen.assign(static_cast<std::size_t>(n), false);
      meas_seen.assign(static_cast<std::size_t>(n), false);
    } else if (!circuit) {
      lp.fail(0, "expected 'qubits N' before '" + std::string(head) + "'");
    } else if (head == "init") {
      lp.expect_count(3);
      const int q = lp.qubit(1, circuit->qubit_count());
      static const std::unordered_map<std::string_view, InitBasis> bases = {{"zero", InitBasis::Zero},
                                                                            {"plus", InitBasis::Plus},
                                                                            {"y", InitBasis::Y},
                                                                            {"a", InitBasis::A},
                                                                            {"open", InitBasis::Open}};
      auto it = bases.find(lp.word(2));
      if (it == bases.end()) lp.fail(2, "unknown initialisation '" + std::string(lp.word(2)) + "'");
      if (init_seen[static_cast<std::size_t>(q)]) lp.fail(1, "duplicate init for qubit " + std::to_string(q));
      init_seen[static_cast<std::size_t>(q)] = true;
      circuit->inits[static_cast<std::size_t>(q)] = it->second;
    } else if (head == "measure") {
      lp.expect_count(3);
      const int q = lp.qubit(1, circuit->qubit_count());
      static const std::unordered_map<std::string_view, MeasBasis> bases = {
          {"z", MeasBasis::Z}, {"x", MeasBasis::X}, {"open", MeasBasis::Open}};
      auto it = bases.find(lp.word(2));
      if (it == bases.end()) lp.fail(2, "unknown measurement '" + std::string(lp.word(2)) + "'");
      if (meas_seen[static_cast<std::size_t>(q)]) lp.fail(1, "duplicate measure for qubit " + std::to_string(q));
      meas_seen[static_cast<std::size_t>(q)] = true;
      circuit->meas[static_cast<std::size_t>(q)] = it->second;
    } else if (auto kind = gate_keyword(head)) {
      const int k = arity(*kind);
      lp.expect_count(static_cast<std::size_t>(k) + 1);
      Gate gate{*kind, {-1, -1, -1}};
      for (int i = 0; i < k; ++i) {
        gate.qubits[static_cast<std::size_t>(i)] = lp.qubit(static_cast<std::size_t>(i) + 1, circuit->qubit_count());
      }
      if (*kind == GateKind::Cnot && gate.qubits[0] == gate.qubits[1]) lp.fail(2, "control equals target");
      if (*kind == GateKind::Toffoli) {
        const auto& q = gate.qubits;
        if (q[0] == q[1]) lp.fail(2, "toffoli operands not distinct");
        if (q[2] == q[0] || q[2] == q[1]) lp.fail(3, "toffoli operands not distinct");
      }
      circuit->gates.push_back(gate);
    } else {
      lp.fail(0, "unknown statement '" + std::string(head) + "'");
    }
    if (end == text.size()) break;
  }
  if (!circuit) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'qubits N' declaration");
  return *circuit;
}

std::string format_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.qubit_count() << '\n';
  for (int q = 0; q < circuit.qubit_count(); ++q) {
    const auto init = circuit.inits[static_cast<std::size_t>(q)];
    if (init != InitBasis::Open) out << "init " << q << ' ' << to_string(init) << '\n';
  }
  for (const Gate& g : circuit.gates) {
    out << to_string(g.kind);
    for (int i = 0; i < arity(g.kind); ++i) out << ' ' << g.qubits[static_cast<std::size_t>(i)];
    out << '\n';
  }
  for (int q = 0; q < circuit.qubit_count(); ++q) {
    const auto m = circuit.meas[static_cast<std::size_t>(q)];
    if (m != MeasBasis::Open) out << "measure " << q << ' ' << to_string(m) << '\n';
  }
  return out.str();
}

int init_code(InitBasis basis) {
  switch (basis) {
    case InitBasis::Open: return code::kInput;
    case InitBasis::A: return code::kInitA;
    case InitBasis::Y: return code::kInitY;
    case InitBasis::Zero: return code::kInitZero;
    case InitBasis::Plus: return code::kInitPlus;
  }
  return code::kInput;
}

int output_code(InitBasis init, MeasBasis meas) {
  switch (meas) {
    case MeasBasis::Z: return code::kMeasZ;
    case MeasBasis::X: return code::kMeasX;
    case MeasBasis::Open:
      if (init == InitBasis::A) return code::kOutputA;
      if (init == InitBasis::Y) return code::kOutputY;
      return code::kOutput;
  }
  return code::kOutput;
}

std::vector<std::vector<int>> MatrixRep::to_rows() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(rows_));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out[static_cast<std::size_t>(r)].push_back(at(r, c));
  }
  return out;
}

MatrixRep MatrixRep::from_rows(const std::vector<std::vector<int>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  MatrixRep m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) {
      throw std::invalid_argument("ragged matrix rows");
    }
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

MatrixRep to_matrix(const Circuit& circuit) {
  if (!circuit.is_icm()) throw std::invalid_argument("to_matrix: circuit is not ICM (contains non-CNOT gates)");
  if (auto diags = validate_circuit(circuit); !diags.empty()) {
    throw std::invalid_argument("to_matrix: " + diags.front().message);
  }
  const int n = circuit.qubit_count();
  const int cols = static_cast<int>(circuit.gates.size()) + 2;
  MatrixRep m(n, cols);
  for (int q = 0; q < n; ++q) {
    const auto init = circuit.inits[static_cast<std::size_t>(q)];
    m.at(q, 0) = init_code(init);
    m.at(q, cols - 1) = output_code(init, circuit.meas[static_cast<std::size_t>(q)]);
  }
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const int col = static_cast<int>(g) + 1;
    m.at(circuit.gates[g].control(), col) = code::kControl;
    m.at(circuit.gates[g].target(), col) = code::kTarget;
  }
  return m;
}

Circuit from_matrix(const MatrixRep& matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 2) throw std::invalid_argument("matrix needs at least one row and two columns");
  const int n = matrix.rows();
  const int last = matrix.cols() - 1;
  Circuit circuit(n);
  for (int q = 0; q < n; ++q) {
    InitBasis init;
    switch (matrix.at(q, 0)) {
      case code::kInput: init = InitBasis::Open; break;
      case code::kInitA: init = InitBasis::A; break;
      case code::kInitY: init = InitBasis::Y; break;
      case code::kInitZero: init = InitBasis::Zero; break;
      case code::kInitPlus: init = InitBasis::Plus; break;
      default: throw std::invalid_argument("row " + std::to_string(q) + " has no input code");
    }
    MeasBasis meas;
    switch (matrix.at(q, last)) {
      case code::kOutput:
        if (is_injection(init)) throw std::invalid_argument("row " + std::to_string(q) + ": injected row uses plain output code");
        meas = MeasBasis::Open;
        break;
      case code::kOutputA:
        if (init != InitBasis::A) throw std::invalid_argument("row " + std::to_string(q) + ": |A> output code without |A> init");
        meas = MeasBasis::Open;
        break;
      case code::kOutputY:
        if (init != InitBasis::Y) throw std::invalid_argument("row " + std::to_string(q) + ": |Y> output code without |Y> init");
        meas = MeasBasis::Open;
        break;
      case code::kMeasZ: meas = MeasBasis::Z; break;
      case code::kMeasX: meas = MeasBasis::X; break;
      default: throw std::invalid_argument("row " + std::to_string(q) + " has no output code");
    }
    circuit.inits[static_cast<std::size_t>(q)] = init;
    circuit.meas[static_cast<std::size_t>(q)] = meas;
  }
  for (int col = 1; col < last; ++col) {
    int control = -1;
    int target = -1;
    for (int q = 0; q < n; ++q) {
      const int cell = matrix.at(q, col);
      if (cell == code::kEmpty) continue;
      int& slot = cell == code::kControl ? control : target;
      if ((cell != code::kControl && cell != code::kTarget) || slot != -1) {
        throw std::invalid_argument("malformed column " + std::to_string(col));
      }
      slot = q;
    }
    if (control < 0 || target < 0) throw std::invalid_argument("malformed column " + std::to_string(col));
    circuit.gates.push_back(Gate::cnot(control, target));
  }
  return circuit;
}

}  // namespace tqec
