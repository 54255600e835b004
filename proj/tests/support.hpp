#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tqec/circuit.hpp"

namespace tqec::testing {

inline std::mt19937_64 make_gen(std::uint64_t seed) { return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 1); }

inline int pick(std::mt19937_64& gen, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

/// CNOT-only circuit with arbitrary init and measurement bases.
inline Circuit random_icm(std::mt19937_64& gen, int max_qubits = 6, int max_cnots = 8) {
  const int n = pick(gen, 2, max_qubits);
  static constexpr InitBasis kInits[] = {InitBasis::Open, InitBasis::Zero, InitBasis::Plus, InitBasis::A, InitBasis::Y};
  static constexpr MeasBasis kMeas[] = {MeasBasis::Open, MeasBasis::Z, MeasBasis::X};
  Circuit c;
  for (int q = 0; q < n; ++q) c.add_qubit(kInits[pick(gen, 0, 4)], kMeas[pick(gen, 0, 2)]);
  const int m = pick(gen, 0, max_cnots);
  for (int k = 0; k < m; ++k) {
    const int a = pick(gen, 0, n - 1);
    int b = pick(gen, 0, n - 2);
    if (b >= a) ++b;
    c.gates.push_back(Gate::cnot(a, b));
  }
  return c;
}

/// Circuit over open qubits using the full gate set. `composite` allows H
/// and TOFFOLI (the latter only with three or more qubits).
inline Circuit random_circuit(std::mt19937_64& gen, int max_qubits, int max_gates, bool composite) {
  const int n = pick(gen, 1, max_qubits);
  Circuit c(n);
  std::vector<GateKind> kinds = {GateKind::T, GateKind::Tdg, GateKind::P, GateKind::Pdg, GateKind::V, GateKind::Vdg};
  if (n >= 2) kinds.push_back(GateKind::Cnot);
  if (composite) kinds.push_back(GateKind::H);
  if (composite && n >= 3) kinds.push_back(GateKind::Toffoli);
  const int m = pick(gen, 0, max_gates);
  for (int k = 0; k < m; ++k) {
    const GateKind kind = kinds[static_cast<std::size_t>(pick(gen, 0, static_cast<int>(kinds.size()) - 1))];
    if (kind == GateKind::Cnot) {
      const int a = pick(gen, 0, n - 1);
      int b = pick(gen, 0, n - 2);
      if (b >= a) ++b;
      c.gates.push_back(Gate::cnot(a, b));
    } else if (kind == GateKind::Toffoli) {
      std::vector<int> q(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
      std::shuffle(q.begin(), q.end(), gen);
      c.gates.push_back(Gate::toffoli(q[0], q[1], q[2]));
    } else {
      c.gates.push_back(Gate::single(kind, pick(gen, 0, n - 1)));
    }
  }
  return c;
}

inline const char* kPSource = "qubits 1\np 0\n";
inline const char* kTSource = "qubits 1\nt 0\n";
inline const char* kHSource = "qubits 1\nh 0\n";
inline const char* kToffoliSource = "qubits 3\ntoffoli 0 1 2\n";

}  // namespace tqec::testing
