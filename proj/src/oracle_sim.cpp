#include "tqec/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tqec {

namespace {

constexpr double kImpossible = 1e-14;
constexpr int kSampledBranches = 256;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const Complex kI{0.0, 1.0};

std::size_t bit(int q) { return std::size_t{1} << q; }

}  // namespace

GateMatrix::GateMatrix(int d, std::initializer_list<Complex> values) : dim(d), m(values) {
  if (m.size() != static_cast<std::size_t>(d * d)) throw std::invalid_argument("GateMatrix: wrong entry count");
}

GateMatrix GateMatrix::identity(int d) {
  GateMatrix g(d);
  for (int k = 0; k < d; ++k) g.at(k, k) = 1.0;
  return g;
}

int GateMatrix::qubits() const {
  int q = 0;
  while ((1 << q) < dim) ++q;
  if ((1 << q) != dim) throw std::logic_error("GateMatrix dimension is not a power of two");
  return q;
}

GateMatrix GateMatrix::adjoint() const {
  GateMatrix out(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

GateMatrix GateMatrix::operator*(const GateMatrix& rhs) const {
  if (rhs.dim != dim) throw std::invalid_argument("GateMatrix product: dimension mismatch");
  GateMatrix out(dim);
  for (int r = 0; r < dim; ++r)
    for (int k = 0; k < dim; ++k) {
      const Complex a = at(r, k);
      if (a == Complex{}) continue;
      for (int c = 0; c < dim; ++c) out.at(r, c) += a * rhs.at(k, c);
    }
  return out;
}

bool GateMatrix::is_unitary(double tol) const {
  const GateMatrix p = adjoint() * *this;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const Complex expect = r == c ? 1.0 : 0.0;
      if (std::abs(p.at(r, c) - expect) > tol) return false;
    }
  return true;
}

GateMatrix gate_matrix(GateKind kind) {
  const Complex w = std::polar(1.0, std::numbers::pi / 4);
  switch (kind) {
    case GateKind::Cnot:
      return GateMatrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    case GateKind::T:
      return GateMatrix(2, {1, 0, 0, w});
    case GateKind::Tdg:
      return gate_matrix(GateKind::T).adjoint();
    case GateKind::P:
      return GateMatrix(2, {1, 0, 0, kI});
    case GateKind::Pdg:
      return gate_matrix(GateKind::P).adjoint();
    case GateKind::V:
      return GateMatrix(2, {kInvSqrt2, -kI * kInvSqrt2, -kI * kInvSqrt2, kInvSqrt2});
    case GateKind::Vdg:
      return gate_matrix(GateKind::V).adjoint();
    case GateKind::H:
    case GateKind::Toffoli:
      break;
  }
  throw std::invalid_argument("gate_matrix: '" + std::string(to_string(kind)) + "' is a composite gate");
}

GateMatrix hadamard_matrix() { return GateMatrix(2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}); }

GateMatrix toffoli_matrix() {
  GateMatrix g = GateMatrix::identity(8);
  g.at(6, 6) = g.at(7, 7) = 0.0;
  g.at(6, 7) = g.at(7, 6) = 1.0;
  return g;
}

double matrix_distance(const GateMatrix& a, const GateMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix_distance: dimension mismatch");
  Complex overlap{};
  for (std::size_t k = 0; k < a.m.size(); ++k) overlap += std::conj(a.m[k]) * b.m[k];
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1.0};
  double worst = 0.0;
  for (std::size_t k = 0; k < a.m.size(); ++k) worst = std::max(worst, std::abs(b.m[k] - phase * a.m[k]));
  return worst;
}

StateVector::StateVector(int qubits) : n_(qubits) {
  if (qubits < 0 || qubits > kMaxSimQubits) {
    throw Error("qubit budget exceeded: " + std::to_string(qubits) + " > " + std::to_string(kMaxSimQubits));
  }
  amp_.assign(bit(qubits), Complex{});
  amp_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
  int n = 0;
  while (bit(n) < amps.size()) ++n;
  if (bit(n) != amps.size()) throw std::invalid_argument("StateVector: length is not a power of two");
  StateVector s(n);
  s.amp_ = std::move(amps);
  return s;
}

StateVector StateVector::product(std::span<const std::array<Complex, 2>> states) {
  StateVector s(static_cast<int>(states.size()));
  for (std::size_t idx = 0; idx < s.amp_.size(); ++idx) {
    Complex a = 1.0;
    for (std::size_t q = 0; q < states.size(); ++q) a *= states[q][(idx >> q) & 1];
    s.amp_[idx] = a;
  }
  return s;
}

std::array<Complex, 2> StateVector::single(InitBasis basis) {
  switch (basis) {
    case InitBasis::Zero: return {1.0, 0.0};
    case InitBasis::Plus: return {kInvSqrt2, kInvSqrt2};
    case InitBasis::Y: return {kInvSqrt2, kI * kInvSqrt2};
    case InitBasis::A: return {kInvSqrt2, std::polar(kInvSqrt2, std::numbers::pi / 4)};
    case InitBasis::Open: break;
  }
  throw std::invalid_argument("StateVector::single: open input has no fixed state");
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::logic_error("StateVector::normalize: zero vector");
  for (Complex& a : amp_) a /= nrm;
}

void StateVector::apply(const GateMatrix& u, std::span<const int> qubits) {
  const int k = static_cast<int>(qubits.size());
  if (u.dim != (1 << k)) throw std::invalid_argument("StateVector::apply: matrix does not match operand count");
  std::size_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_) throw std::out_of_range("StateVector::apply: qubit out of range");
    if (mask & bit(q)) throw std::invalid_argument("StateVector::apply: repeated qubit");
    mask |= bit(q);
  }
  std::vector<std::size_t> offsets(static_cast<std::size_t>(u.dim));
  for (int s = 0; s < u.dim; ++s) {
    std::size_t off = 0;
    for (int pos = 0; pos < k; ++pos) {
      if (s & (1 << (k - 1 - pos))) off |= bit(qubits[static_cast<std::size_t>(pos)]);
    }
    offsets[static_cast<std::size_t>(s)] = off;
  }
  std::vector<Complex> in(static_cast<std::size_t>(u.dim));
  for (std::size_t base = 0; base < amp_.size(); ++base) {
    if (base & mask) continue;
    for (int s = 0; s < u.dim; ++s) in[static_cast<std::size_t>(s)] = amp_[base | offsets[static_cast<std::size_t>(s)]];
    for (int r = 0; r < u.dim; ++r) {
      Complex acc{};
      for (int c = 0; c < u.dim; ++c) acc += u.at(r, c) * in[static_cast<std::size_t>(c)];
      amp_[base | offsets[static_cast<std::size_t>(r)]] = acc;
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  if (control == target) throw std::invalid_argument("apply_cnot: control equals target");
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if ((idx & bit(control)) && !(idx & bit(target))) std::swap(amp_[idx], amp_[idx | bit(target)]);
  }
}

void StateVector::apply_x(int q) {
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if (!(idx & bit(q))) std::swap(amp_[idx], amp_[idx | bit(q)]);
  }
}

void StateVector::apply_z(int q) {
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if (idx & bit(q)) amp_[idx] = -amp_[idx];
  }
}

void StateVector::apply_h(int q) { apply(hadamard_matrix(), {q}); }

double StateVector::probability_one(int q, MeasBasis basis) const {
  double p = 0.0;
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if (idx & bit(q)) continue;
    const Complex a0 = amp_[idx];
    const Complex a1 = amp_[idx | bit(q)];
    if (basis == MeasBasis::X) {
      p += 0.5 * std::norm(a0 - a1);
    } else {
      p += std::norm(a1);
    }
  }
  const double total = norm();
  return total > 0 ? std::clamp(p / (total * total), 0.0, 1.0) : 0.0;
}

double StateVector::measure_and_reset(int q, MeasBasis basis, int outcome) {
  if (basis == MeasBasis::Open) throw std::invalid_argument("measure_and_reset: open basis");
  if (basis == MeasBasis::X) apply_h(q);
  double p = 0.0;
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if (static_cast<int>((idx >> q) & 1) == outcome) {
      p += std::norm(amp_[idx]);
    } else {
      amp_[idx] = 0.0;
    }
  }
  if (p > kImpossible) {
    const double scale = 1.0 / std::sqrt(p);
    for (Complex& a : amp_) a *= scale;
  }
  if (outcome == 1) apply_x(q);
  return p;
}

StateVector StateVector::extract(std::span<const int> keep) const {
  StateVector out(static_cast<int>(keep.size()));
  for (std::size_t s = 0; s < out.amp_.size(); ++s) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      if (s & bit(static_cast<int>(k))) idx |= bit(keep[k]);
    }
    out.amp_[s] = amp_[idx];
  }
  return out;
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.amp_.size() != amp_.size()) throw std::invalid_argument("StateVector::inner: size mismatch");
  Complex s{};
  for (std::size_t k = 0; k < amp_.size(); ++k) s += std::conj(amp_[k]) * other.amp_[k];
  return s;
}

double infidelity(const StateVector& a, const StateVector& b) {
  const double overlap = std::norm(a.inner(b)) / (std::norm(a.norm()) * std::norm(b.norm()));
  return std::max(0.0, 1.0 - overlap);
}

int FixedOutcomes::next(double) {
  if (pos_ >= bits_.size()) throw Error("outcome source exhausted after " + std::to_string(bits_.size()) + " outcomes");
  return bits_[pos_++] & 1;
}

int BornSampler::next(double p_one) {
  const double draw = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return draw < p_one ? 1 : 0;
}

StateVector SimResult::corrected() const {
  StateVector s = output;
  for (int q = 0; q < frame.size(); ++q) {
    if (frame.x(q)) s.apply_x(q);
    if (frame.z(q)) s.apply_z(q);
  }
  return s;
}

namespace {

/// Full register state with the open-input rows taken from `input` and
/// every other row in its fixed initial state.
StateVector initial_state(const Circuit& c, const StateVector& input) {
  const int n = c.qubit_count();
  if (n > kMaxSimQubits) {
    throw Error("qubit budget exceeded: " + std::to_string(n) + " > " + std::to_string(kMaxSimQubits));
  }
  std::vector<int> open;
  for (int q = 0; q < n; ++q) {
    if (c.inits[static_cast<std::size_t>(q)] == InitBasis::Open) open.push_back(q);
  }
  if (input.qubits() != static_cast<int>(open.size())) {
    throw std::invalid_argument("simulate: input has " + std::to_string(input.qubits()) + " qubits, circuit has " +
                                std::to_string(open.size()) + " open inputs");
  }
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < open.size(); ++k) slot[static_cast<std::size_t>(open[k])] = static_cast<int>(k);

  std::vector<Complex> amps(bit(n));
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    std::size_t sub = 0;
    Complex a = 1.0;
    for (int q = 0; q < n; ++q) {
      const int b = static_cast<int>((idx >> q) & 1);
      if (slot[static_cast<std::size_t>(q)] >= 0) {
        if (b) sub |= bit(slot[static_cast<std::size_t>(q)]);
      } else {
        a *= StateVector::single(c.inits[static_cast<std::size_t>(q)])[static_cast<std::size_t>(b)];
      }
    }
    amps[idx] = a * input.amplitude(sub);
  }
  return StateVector::from_amplitudes(std::move(amps));
}

void apply_gate(StateVector& s, const Gate& g) {
  switch (g.kind) {
    case GateKind::Cnot:
      s.apply_cnot(g.control(), g.target());
      return;
    case GateKind::H:
      s.apply(hadamard_matrix(), {g.qubits[0]});
      return;
    case GateKind::Toffoli:
      s.apply(toffoli_matrix(), {g.qubits[0], g.qubits[1], g.qubits[2]});
      return;
    default:
      s.apply(gate_matrix(g.kind), {g.qubits[0]});
  }
}

}  // namespace

int measurement_count(const Circuit& circuit) {
  return static_cast<int>(std::count_if(circuit.meas.begin(), circuit.meas.end(),
                                        [](MeasBasis m) { return m != MeasBasis::Open; }));
}

SimResult simulate(const Circuit& circuit, const StateVector& input, OutcomeSource& outcomes) {
  StateVector s = initial_state(circuit, input);
  for (const Gate& g : circuit.gates) apply_gate(s, g);

  SimResult result;
  std::vector<int> keep;
  for (int q = 0; q < circuit.qubit_count(); ++q) {
    const MeasBasis basis = circuit.meas[static_cast<std::size_t>(q)];
    if (basis == MeasBasis::Open) {
      keep.push_back(q);
      continue;
    }
    const int raw = outcomes.next(s.probability_one(q, basis));
    result.probability *= s.measure_and_reset(q, basis, raw);
    result.log.push_back({q, basis, raw, raw});
  }
  result.output = s.extract(keep);
  result.frame = PauliFrame(static_cast<int>(keep.size()));
  return result;
}

SimResult simulate(const IcmCircuit& icm, const StateVector& input, OutcomeSource& outcomes) {
  const Circuit& c = icm.circuit;
  if (!c.is_icm()) throw std::invalid_argument("simulate: circuit is not in ICM form");
  const int n = c.qubit_count();
  StateVector s = initial_state(c, input);

  std::vector<int> last_cnot(static_cast<std::size_t>(n), -1);
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    last_cnot[static_cast<std::size_t>(c.gates[gi].control())] = static_cast<int>(gi);
    last_cnot[static_cast<std::size_t>(c.gates[gi].target())] = static_cast<int>(gi);
  }

  struct Owner {
    int instance = -1;
    int local = -1;
  };
  struct Progress {
    int pattern = -1;
    int measured = 0;
    int to_measure = 0;
    std::vector<int> outcomes;
  };
  std::vector<Owner> owner(static_cast<std::size_t>(n));
  std::vector<Progress> progress(icm.instances.size());
  for (std::size_t k = 0; k < icm.instances.size(); ++k) {
    const TemplateInstance& inst = icm.instances[k];
    const TeleportTemplate& shape = inst.shape();
    Progress& pr = progress[k];
    pr.pattern = shape.selective() ? -1 : 0;
    pr.outcomes.assign(static_cast<std::size_t>(shape.row_count()), 0);
    for (int local = 0; local < shape.row_count(); ++local) {
      if (shape.patterns.front()[static_cast<std::size_t>(local)] == MeasBasis::Open) continue;
      owner[static_cast<std::size_t>(inst.rows[static_cast<std::size_t>(local)])] = {static_cast<int>(k), local};
      ++pr.to_measure;
    }
  }

  SimResult result;
  PauliFrame frame(n);

  auto measure_row = [&](int r) {
    const Owner own = owner[static_cast<std::size_t>(r)];
    MeasBasis basis = c.meas[static_cast<std::size_t>(r)];
    if (own.instance >= 0) {
      const TeleportTemplate& shape = icm.instances[static_cast<std::size_t>(own.instance)].shape();
      int pattern = progress[static_cast<std::size_t>(own.instance)].pattern;
      if (own.local == shape.trigger_row) {
        pattern = 0;  // the trigger has the same basis in both patterns
      } else if (pattern < 0) {
        throw std::logic_error("simulate: selective row measured before its trigger");
      }
      basis = shape.patterns[static_cast<std::size_t>(pattern)][static_cast<std::size_t>(own.local)];
    }
    if (basis == MeasBasis::Open) return;

    const int raw = outcomes.next(s.probability_one(r, basis));
    result.probability *= s.measure_and_reset(r, basis, raw);
    const bool flipped = basis == MeasBasis::Z ? frame.x(r) : frame.z(r);
    const int effective = raw ^ (flipped ? 1 : 0);
    frame.clear(r);
    result.log.push_back({r, basis, raw, effective});
    if (own.instance < 0) return;

    const TemplateInstance& inst = icm.instances[static_cast<std::size_t>(own.instance)];
    const TeleportTemplate& shape = inst.shape();
    Progress& pr = progress[static_cast<std::size_t>(own.instance)];
    pr.outcomes[static_cast<std::size_t>(own.local)] = effective;
    if (own.local == shape.trigger_row) pr.pattern = pattern_index(shape, effective);
    if (++pr.measured == pr.to_measure) {
      const Byproduct& bp = shape.byproducts[static_cast<std::size_t>(pr.pattern)];
      if (bp.x.eval(pr.outcomes)) frame.flip_x(inst.output_row());
      if (bp.z.eval(pr.outcomes)) frame.flip_z(inst.output_row());
    }
  };

  auto is_output = [&](int r) {
    return std::find(icm.output_rows.begin(), icm.output_rows.end(), r) != icm.output_rows.end();
  };
  for (int r = 0; r < n; ++r) {
    if (last_cnot[static_cast<std::size_t>(r)] < 0 && !is_output(r)) measure_row(r);
  }
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const Gate& g = c.gates[gi];
    s.apply_cnot(g.control(), g.target());
    frame.propagate_cnot(g.control(), g.target());
    for (int r : {g.control(), g.target()}) {
      if (last_cnot[static_cast<std::size_t>(r)] == static_cast<int>(gi) && !is_output(r)) measure_row(r);
    }
  }

  std::vector<int> keep;
  for (std::size_t q = 0; q < icm.output_rows.size(); ++q) {
    const int r = icm.output_rows[q];
    if (c.meas[static_cast<std::size_t>(r)] == MeasBasis::Open) {
      keep.push_back(r);
    } else {
      measure_row(r);
    }
  }
  result.output = s.extract(keep);
  result.frame = PauliFrame(static_cast<int>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (frame.x(keep[k])) result.frame.flip_x(static_cast<int>(k));
    if (frame.z(keep[k])) result.frame.flip_z(static_cast<int>(k));
  }
  for (const Progress& pr : progress) result.patterns.push_back(pr.pattern);
  return result;
}

GateMatrix circuit_unitary(const Circuit& circuit) {
  const int n = circuit.qubit_count();
  if (n > kMaxSimQubits) throw Error("qubit budget exceeded");
  const int dim = 1 << n;
  GateMatrix u(dim);
  for (int col = 0; col < dim; ++col) {
    std::vector<Complex> amps(static_cast<std::size_t>(dim));
    amps[static_cast<std::size_t>(col)] = 1.0;
    StateVector s = StateVector::from_amplitudes(std::move(amps));
    for (const Gate& g : circuit.gates) apply_gate(s, g);
    for (int row = 0; row < dim; ++row) u.at(row, col) = s.amplitude(static_cast<std::size_t>(row));
  }
  return u;
}

std::array<Complex, 2> random_qubit(std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Complex a{normal(gen), normal(gen)};
  Complex b{normal(gen), normal(gen)};
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  return {a / nrm, b / nrm};
}

namespace {

int open_inputs(const Circuit& c) {
  return static_cast<int>(std::count(c.inits.begin(), c.inits.end(), InitBasis::Open));
}

void require_open_outputs(const Circuit& c, std::span<const int> rows, const char* which) {
  for (int r : rows) {
    if (c.meas[static_cast<std::size_t>(r)] != MeasBasis::Open) {
      throw std::invalid_argument(std::string("check_equivalence: ") + which + " measures logical qubit row " +
                                  std::to_string(r));
    }
  }
}

std::vector<int> all_rows(const Circuit& c) {
  std::vector<int> rows(static_cast<std::size_t>(c.qubit_count()));
  for (int q = 0; q < c.qubit_count(); ++q) rows[static_cast<std::size_t>(q)] = q;
  return rows;
}

StateVector random_input(int qubits, std::mt19937_64& gen) {
  std::vector<std::array<Complex, 2>> states;
  for (int k = 0; k < qubits; ++k) states.push_back(random_qubit(gen));
  return StateVector::product(states);
}

/// Runs `run` on every outcome branch (or a sample of them) and returns the
/// worst infidelity against `expected` over possible branches.
template <class Run>
double worst_branch(int measurements, const StateVector& expected, std::uint64_t sample_seed, Run run) {
  double worst = 0.0;
  auto account = [&](const SimResult& r) {
    if (r.probability <= 1e-12) return;
    worst = std::max(worst, infidelity(expected, r.corrected()));
  };
  if (measurements <= 10 && (1 << measurements) <= kMaxExhaustiveBranches) {
    for (int branch = 0; branch < (1 << measurements); ++branch) {
      std::vector<int> bits(static_cast<std::size_t>(measurements));
      for (int k = 0; k < measurements; ++k) bits[static_cast<std::size_t>(k)] = (branch >> k) & 1;
      FixedOutcomes src(std::move(bits));
      account(run(src));
    }
  } else {
    for (int k = 0; k < kSampledBranches; ++k) {
      BornSampler src(sample_seed + static_cast<std::uint64_t>(k));
      account(run(src));
    }
  }
  return worst;
}

}  // namespace

double check_equivalence(const Circuit& a, const Circuit& b, int trials, std::uint64_t seed) {
  if (open_inputs(a) != open_inputs(b) || a.qubit_count() != b.qubit_count()) {
    throw std::invalid_argument("check_equivalence: arity mismatch");
  }
  if (a.qubit_count() > kMaxSimQubits) throw Error("qubit budget exceeded");
  require_open_outputs(a, all_rows(a), "first circuit");
  require_open_outputs(b, all_rows(b), "second circuit");
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const StateVector in = random_input(open_inputs(a), gen);
    FixedOutcomes none({});
    const StateVector ea = simulate(a, in, none).output;
    const StateVector eb = simulate(b, in, none).output;
    worst = std::max(worst, infidelity(ea, eb));
  }
  return worst;
}

double check_equivalence(const Circuit& reference, const IcmCircuit& icm, int trials, std::uint64_t seed) {
  if (open_inputs(reference) != open_inputs(icm.circuit) ||
      reference.qubit_count() != static_cast<int>(icm.output_rows.size())) {
    throw std::invalid_argument("check_equivalence: arity mismatch");
  }
  if (icm.circuit.qubit_count() > kMaxSimQubits || reference.qubit_count() > kMaxSimQubits) {
    throw Error("qubit budget exceeded: ICM form has " + std::to_string(icm.circuit.qubit_count()) + " rows");
  }
  require_open_outputs(reference, all_rows(reference), "reference");
  require_open_outputs(icm.circuit, icm.output_rows, "ICM circuit");
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  const int m = measurement_count(icm.circuit);
  for (int t = 0; t < trials; ++t) {
    const StateVector in = random_input(open_inputs(reference), gen);
    FixedOutcomes none({});
    const StateVector expected = simulate(reference, in, none).output;
    worst = std::max(worst, worst_branch(m, expected, gen(), [&](OutcomeSource& src) { return simulate(icm, in, src); }));
  }
  return worst;
}

}  // namespace tqec
