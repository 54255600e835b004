#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "tqec/circuit.hpp"
#include "tqec/decompose.hpp"

namespace tqec {

using Complex = std::complex<double>;

/// Largest number of simultaneously simulated qubits.
inline constexpr int kMaxSimQubits = 12;
/// Outcome branch count up to which simulations enumerate every branch.
inline constexpr int kMaxExhaustiveBranches = 1024;

/// Square complex matrix acting on one or more qubits. For multi-qubit
/// matrices the first listed qubit is the most significant index bit.
struct GateMatrix {
  int dim = 0;
  std::vector<Complex> m;

  GateMatrix() = default;
  explicit GateMatrix(int d) : dim(d), m(static_cast<std::size_t>(d * d)) {}
  GateMatrix(int d, std::initializer_list<Complex> values);

  static GateMatrix identity(int d);

  Complex at(int r, int c) const { return m[static_cast<std::size_t>(r * dim + c)]; }
  Complex& at(int r, int c) { return m[static_cast<std::size_t>(r * dim + c)]; }
  int qubits() const;

  GateMatrix adjoint() const;
  GateMatrix operator*(const GateMatrix& rhs) const;
  bool is_unitary(double tol = 1e-12) const;
};

/// Matrix of a TQEC gate. CNOT is 4x4 with the control as the high bit.
/// Throws std::invalid_argument for H and TOFFOLI.
GateMatrix gate_matrix(GateKind kind);

/// Reference matrices for the composite gates.
GateMatrix hadamard_matrix();
GateMatrix toffoli_matrix();

/// Largest entry-wise deviation between two matrices after removing the
/// global phase that best aligns them.
double matrix_distance(const GateMatrix& a, const GateMatrix& b);

/// Amplitudes over n qubits; qubit q is bit q of the basis index.
class StateVector {
 public:
  StateVector() : StateVector(0) {}
  explicit StateVector(int qubits);

  static StateVector from_amplitudes(std::vector<Complex> amps);
  /// Tensor product of single-qubit states; state k becomes qubit k.
  static StateVector product(std::span<const std::array<Complex, 2>> states);
  static std::array<Complex, 2> single(InitBasis basis);

  int qubits() const { return n_; }
  std::size_t size() const { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  Complex amplitude(std::size_t index) const { return amp_[index]; }

  double norm() const;
  void normalize();

  void apply(const GateMatrix& u, std::span<const int> qubits);
  void apply(const GateMatrix& u, std::initializer_list<int> qubits) {
    apply(u, std::span<const int>(qubits.begin(), qubits.size()));
  }
  void apply_cnot(int control, int target);
  void apply_x(int q);
  void apply_z(int q);
  void apply_h(int q);

  /// Probability of reading 1 when measuring q in the given basis.
  double probability_one(int q, MeasBasis basis) const;
  /// Projects q onto `outcome` in the basis, renormalises and resets q to
  /// |0>. Returns the outcome probability; the state is left unnormalised
  /// when it is below 1e-14.
  double measure_and_reset(int q, MeasBasis basis, int outcome);

  /// Reduced state of `keep` (in that order), assuming every other qubit
  /// is in |0>.
  StateVector extract(std::span<const int> keep) const;

  Complex inner(const StateVector& other) const;

 private:
  int n_;
  std::vector<Complex> amp_;
};

/// 1 - |<a|b>|^2.
double infidelity(const StateVector& a, const StateVector& b);

/// Supplies measurement outcomes to a simulation.
class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;
  /// Returns the next outcome given the Born probability of reading 1.
  virtual int next(double p_one) = 0;
};

/// Replays a fixed bit sequence. Throws Error when exhausted.
class FixedOutcomes : public OutcomeSource {
 public:
  explicit FixedOutcomes(std::vector<int> bits) : bits_(std::move(bits)) {}
  int next(double p_one) override;

 private:
  std::vector<int> bits_;
  std::size_t pos_ = 0;
};

/// Samples outcomes from the Born rule with a seeded generator.
class BornSampler : public OutcomeSource {
 public:
  explicit BornSampler(std::uint64_t seed) : gen_(seed) {}
  int next(double p_one) override;

 private:
  std::mt19937_64 gen_;
};

struct MeasurementRecord {
  int row = 0;
  MeasBasis basis = MeasBasis::Z;
  int raw = 0;
  int effective = 0;  // raw outcome with the tracked frame removed
};

struct SimResult {
  StateVector output;        // open-output logical qubits, before frame correction
  PauliFrame frame;          // pending Paulis on those qubits
  std::vector<MeasurementRecord> log;
  std::vector<int> patterns; // chosen pattern per template instance
  double probability = 1.0;  // probability of the realised branch

  /// Output with the tracked frame applied.
  StateVector corrected() const;
};

/// Simulates a circuit gate by gate. H and TOFFOLI use their reference
/// matrices. Measured qubits are measured after the last gate.
SimResult simulate(const Circuit& circuit, const StateVector& input, OutcomeSource& outcomes);

/// Simulates an ICM circuit, measuring each row after its last CNOT,
/// selecting patterns of selective blocks and tracking byproducts.
SimResult simulate(const IcmCircuit& icm, const StateVector& input, OutcomeSource& outcomes);

/// Number of measurements either simulate overload performs.
int measurement_count(const Circuit& circuit);

/// Unitary of a measurement-free circuit over all of its qubits.
GateMatrix circuit_unitary(const Circuit& circuit);

/// Maximum infidelity between two circuits over `trials` random product
/// inputs and every outcome branch (sampled when there are more than
/// kMaxExhaustiveBranches). Both circuits must leave every logical qubit
/// unmeasured and have the same number of open inputs and qubits.
double check_equivalence(const Circuit& a, const Circuit& b, int trials, std::uint64_t seed);

/// Same as above with `b` given in ICM form; the ICM output is compared
/// after applying its tracked frame.
double check_equivalence(const Circuit& reference, const IcmCircuit& icm, int trials, std::uint64_t seed);

/// Haar-random single-qubit state.
std::array<Complex, 2> random_qubit(std::mt19937_64& gen);

}  // namespace tqec
