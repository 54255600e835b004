#include "tqec/decompose.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tqec {

std::vector<Gate> decomposition_of(const Gate& gate) {
  switch (gate.kind) {
    case GateKind::H: {
      const int q = gate.qubits[0];
      return {Gate::single(GateKind::P, q), Gate::single(GateKind::V, q), Gate::single(GateKind::P, q)};
    }
    case GateKind::Toffoli: {
      const int c1 = gate.qubits[0];
      const int c2 = gate.qubits[1];
      const int t = gate.qubits[2];
      std::vector<Gate> seq;
      auto h = [&](int q) {
        seq.push_back(Gate::single(GateKind::P, q));
        seq.push_back(Gate::single(GateKind::V, q));
        seq.push_back(Gate::single(GateKind::P, q));
      };
      h(t);
      seq.push_back(Gate::cnot(c2, t));
      seq.push_back(Gate::single(GateKind::Tdg, t));
      seq.push_back(Gate::cnot(c1, t));
      seq.push_back(Gate::single(GateKind::T, t));
      seq.push_back(Gate::cnot(c2, t));
      seq.push_back(Gate::single(GateKind::Tdg, t));
      seq.push_back(Gate::cnot(c1, t));
      seq.push_back(Gate::single(GateKind::Tdg, c2));
      seq.push_back(Gate::single(GateKind::T, t));
      seq.push_back(Gate::cnot(c1, c2));
      h(t);
      seq.push_back(Gate::single(GateKind::Tdg, c2));
      seq.push_back(Gate::cnot(c1, c2));
      seq.push_back(Gate::single(GateKind::T, c1));
      seq.push_back(Gate::single(GateKind::P, c2));
      return seq;
    }
    default:
      return {gate};
  }
}

Circuit decompose_gates(const Circuit& circuit) {
  Circuit out = circuit;
  out.gates.clear();
  for (const Gate& g : circuit.gates) {
    auto seq = decomposition_of(g);
    out.gates.insert(out.gates.end(), seq.begin(), seq.end());
  }
  return out;
}

bool ParityRule::eval(std::span<const int> outcomes) const {
  int bit = constant ? 1 : 0;
  for (std::size_t k = 0; k < outcomes.size() && k < 32; ++k) {
    if (rows & (1u << k)) bit ^= outcomes[k] & 1;
  }
  return bit != 0;
}

namespace {

constexpr std::uint32_t row(int k) { return 1u << k; }

TeleportTemplate make_p(bool dagger) {
  // data controls the |Y> ancilla, ancilla measured in Z, state stays on row 0
  TeleportTemplate t;
  t.gate = dagger ? GateKind::Pdg : GateKind::P;
  t.ancilla_inits = {InitBasis::Y};
  t.cnots = {{0, 1}};
  t.patterns = {{MeasBasis::Open, MeasBasis::Z}};
  t.byproducts = {{{false, 0}, {dagger, row(1)}}};
  t.output_row = 0;
  return t;
}

TeleportTemplate make_v(bool dagger) {
  // |Y> ancilla controls the data, ancilla measured in X
  TeleportTemplate t;
  t.gate = dagger ? GateKind::Vdg : GateKind::V;
  t.ancilla_inits = {InitBasis::Y};
  t.cnots = {{1, 0}};
  t.patterns = {{MeasBasis::Open, MeasBasis::X}};
  t.byproducts = {{{!dagger, row(1)}, {false, 0}}};
  t.output_row = 0;
  return t;
}

TeleportTemplate make_t(bool dagger) {
  // rows: 0 psi, 1 |A>, 2 |0>, 3 |Y>, 4 |+>, 5 |0> (output)
  TeleportTemplate t;
  t.gate = dagger ? GateKind::Tdg : GateKind::T;
  t.ancilla_inits = {InitBasis::A, InitBasis::Zero, InitBasis::Y, InitBasis::Plus, InitBasis::Zero};
  t.cnots = {{1, 0}, {1, 2}, {3, 1}, {4, 2}, {3, 5}, {4, 5}};
  const auto Z = MeasBasis::Z;
  const auto X = MeasBasis::X;
  t.patterns = {{Z, Z, X, X, Z, MeasBasis::Open}, {Z, X, Z, Z, X, MeasBasis::Open}};
  const std::uint32_t b14 = row(1) | row(4);
  const std::uint32_t b23 = row(2) | row(3);
  const std::uint32_t b123 = row(1) | row(2) | row(3);
  if (!dagger) {
    t.byproducts = {{{true, b14}, {true, b123}}, {{false, b23}, {false, b14}}};
  } else {
    t.byproducts = {{{false, b14}, {true, b123}}, {{true, b23}, {false, b14}}};
  }
  t.trigger_row = 0;
  // T|psi> needs the P correction after outcome 1; T^dag|psi> after outcome 0
  t.correction_outcome = dagger ? 0 : 1;
  t.output_row = 5;
  return t;
}

}  // namespace

const TeleportTemplate& teleport_template(GateKind kind) {
  static const TeleportTemplate p = make_p(false);
  static const TeleportTemplate pdg = make_p(true);
  static const TeleportTemplate v = make_v(false);
  static const TeleportTemplate vdg = make_v(true);
  static const TeleportTemplate t = make_t(false);
  static const TeleportTemplate tdg = make_t(true);
  switch (kind) {
    case GateKind::P: return p;
    case GateKind::Pdg: return pdg;
    case GateKind::V: return v;
    case GateKind::Vdg: return vdg;
    case GateKind::T: return t;
    case GateKind::Tdg: return tdg;
    default:
      throw std::invalid_argument("no teleportation template for gate '" + std::string(to_string(kind)) + "'");
  }
}

std::vector<std::pair<int, InitBasis>> TemplateInstance::injections() const {
  std::vector<std::pair<int, InitBasis>> out;
  const auto& inits = shape().ancilla_inits;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    if (is_injection(inits[k])) out.emplace_back(rows[k + 1], inits[k]);
  }
  return out;
}

IcmCircuit to_icm(const Circuit& decomposed) {
  if (auto diags = validate_circuit(decomposed); !diags.empty()) {
    throw std::invalid_argument("to_icm: " + diags.front().message);
  }
  struct RowSlot {
    InitBasis init;
    MeasBasis meas;
  };
  struct RowRef {
    int qubit;
    int slot;
  };
  const int n = decomposed.qubit_count();
  std::vector<std::vector<RowSlot>> slots(static_cast<std::size_t>(n));
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  for (int q = 0; q < n; ++q) slots[static_cast<std::size_t>(q)].push_back({decomposed.inits[static_cast<std::size_t>(q)], MeasBasis::Open});

  std::vector<std::pair<RowRef, RowRef>> cnots;
  struct PendingInstance {
    TemplateInstance instance;
    std::vector<RowRef> refs;
  };
  std::vector<PendingInstance> pending;

  for (std::size_t gi = 0; gi < decomposed.gates.size(); ++gi) {
    const Gate& g = decomposed.gates[gi];
    if (g.kind == GateKind::Cnot) {
      const int c = g.control();
      const int t = g.target();
      cnots.push_back({{c, current[static_cast<std::size_t>(c)]}, {t, current[static_cast<std::size_t>(t)]}});
      continue;
    }
    if (!is_tqec_gate(g.kind)) {
      throw std::invalid_argument("to_icm: gate " + std::to_string(gi) + " ('" + std::string(to_string(g.kind)) +
                                  "') must be decomposed first");
    }
    const int q = g.qubits[0];
    auto& qslots = slots[static_cast<std::size_t>(q)];
    const TeleportTemplate& shape = teleport_template(g.kind);

    PendingInstance p;
    p.instance.gate = g.kind;
    p.instance.source_gate = static_cast<int>(gi);
    p.instance.logical_qubit = q;
    p.instance.first_cnot = static_cast<int>(cnots.size());
    p.instance.cnot_count = static_cast<int>(shape.cnots.size());
    p.refs.push_back({q, current[static_cast<std::size_t>(q)]});
    for (InitBasis init : shape.ancilla_inits) {
      qslots.push_back({init, MeasBasis::Open});
      p.refs.push_back({q, static_cast<int>(qslots.size()) - 1});
    }
    for (auto [lc, lt] : shape.cnots) {
      cnots.push_back({p.refs[static_cast<std::size_t>(lc)], p.refs[static_cast<std::size_t>(lt)]});
    }
    // the first pattern is the nominal basis recorded in the circuit
    const MeasPattern& nominal = shape.patterns.front();
    for (std::size_t k = 0; k < nominal.size(); ++k) {
      if (nominal[k] != MeasBasis::Open) qslots[static_cast<std::size_t>(p.refs[k].slot)].meas = nominal[k];
    }
    current[static_cast<std::size_t>(q)] = p.refs[static_cast<std::size_t>(shape.output_row)].slot;
    pending.push_back(std::move(p));
  }
  for (int q = 0; q < n; ++q) {
    slots[static_cast<std::size_t>(q)][static_cast<std::size_t>(current[static_cast<std::size_t>(q)])].meas =
        decomposed.meas[static_cast<std::size_t>(q)];
  }

  std::vector<int> offset(static_cast<std::size_t>(n) + 1, 0);
  for (int q = 0; q < n; ++q) {
    offset[static_cast<std::size_t>(q) + 1] = offset[static_cast<std::size_t>(q)] + static_cast<int>(slots[static_cast<std::size_t>(q)].size());
  }
  auto global = [&](RowRef r) { return offset[static_cast<std::size_t>(r.qubit)] + r.slot; };

  IcmCircuit out;
  for (int q = 0; q < n; ++q) {
    for (const RowSlot& s : slots[static_cast<std::size_t>(q)]) out.circuit.add_qubit(s.init, s.meas);
    out.input_rows.push_back(offset[static_cast<std::size_t>(q)]);
    out.output_rows.push_back(offset[static_cast<std::size_t>(q)] + current[static_cast<std::size_t>(q)]);
  }
  for (auto [c, t] : cnots) out.circuit.gates.push_back(Gate::cnot(global(c), global(t)));
  for (auto& p : pending) {
    for (RowRef r : p.refs) p.instance.rows.push_back(global(r));
    out.instances.push_back(std::move(p.instance));
  }
  return out;
}

int pattern_index(const TeleportTemplate& shape, int outcome) {
  if (!shape.selective()) return 0;
  return (outcome & 1) == shape.correction_outcome ? 0 : 1;
}

const MeasPattern& select_pattern(const TemplateInstance& instance, int outcome) {
  const TeleportTemplate& shape = instance.shape();
  if (!shape.selective()) {
    throw std::invalid_argument("select_pattern: '" + std::string(to_string(instance.gate)) +
                                "' block has no selective measurement");
  }
  return shape.patterns[static_cast<std::size_t>(pattern_index(shape, outcome))];
}

bool PauliFrame::is_identity() const {
  return std::none_of(x_.begin(), x_.end(), [](auto b) { return b != 0; }) &&
         std::none_of(z_.begin(), z_.end(), [](auto b) { return b != 0; });
}

void PauliFrame::propagate_cnot(int control, int target) {
  if (x(control)) flip_x(target);
  if (z(target)) flip_z(control);
}

PauliFrame PauliFrame::compose(const PauliFrame& other) const {
  if (other.size() != size()) throw std::invalid_argument("PauliFrame::compose: size mismatch");
  PauliFrame out = *this;
  for (int q = 0; q < size(); ++q) {
    if (other.x(q)) out.flip_x(q);
    if (other.z(q)) out.flip_z(q);
  }
  return out;
}

}  // namespace tqec
