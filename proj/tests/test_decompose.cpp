#include <gtest/gtest.h>

#include <complex>
#include <vector>

#include "support.hpp"
#include "tqec/decompose.hpp"

namespace tqec {
namespace {

using C = std::complex<double>;

// Small dense simulator kept separate from oracle_sim so the Toffoli
// sequence is checked against an independent implementation.
std::vector<C> apply_sequence(const std::vector<Gate>& gates, std::size_t basis_index) {
  std::vector<C> v(8, 0.0);
  v[basis_index] = 1.0;
  const C i(0.0, 1.0);
  const C w = std::polar(1.0, M_PI / 4);
  for (const Gate& g : gates) {
    std::vector<C> next(8, 0.0);
    for (std::size_t s = 0; s < 8; ++s) {
      if (v[s] == C(0.0)) continue;
      const std::size_t bit = std::size_t{1} << g.qubits[0];
      const bool one = (s & bit) != 0;
      switch (g.kind) {
        case GateKind::Cnot:
          next[one ? s ^ (std::size_t{1} << g.qubits[1]) : s] += v[s];
          break;
        case GateKind::T: next[s] += one ? w * v[s] : v[s]; break;
        case GateKind::Tdg: next[s] += one ? std::conj(w) * v[s] : v[s]; break;
        case GateKind::P: next[s] += one ? i * v[s] : v[s]; break;
        case GateKind::Pdg: next[s] += one ? -i * v[s] : v[s]; break;
        case GateKind::V:
          next[s] += 0.5 * (1.0 + i) * v[s];
          next[s ^ bit] += 0.5 * (1.0 - i) * v[s];
          break;
        default: ADD_FAILURE() << "unexpected gate";
      }
    }
    v = next;
  }
  return v;
}

TEST(DecomposeGates, HadamardBecomesPVP) {
  const Circuit d = decompose_gates(parse_circuit("qubits 1\nh 0\n"));
  const std::vector<Gate> expected = {Gate::single(GateKind::P, 0), Gate::single(GateKind::V, 0),
                                      Gate::single(GateKind::P, 0)};
  EXPECT_EQ(d.gates, expected);
}

TEST(DecomposeGates, LeavesTqecGatesAlone) {
  const Circuit c = parse_circuit("qubits 2\ncnot 0 1\nt 1\nvdg 0\npdg 1\n");
  EXPECT_EQ(decompose_gates(c), c);
}

TEST(DecomposeGates, ToffoliCounts) {
  const Circuit d = decompose_gates(parse_circuit("qubits 3\ntoffoli 0 1 2\n"));
  int cnots = 0, t_type = 0, p = 0, v = 0;
  for (const Gate& g : d.gates) {
    cnots += g.kind == GateKind::Cnot;
    t_type += g.kind == GateKind::T || g.kind == GateKind::Tdg;
    p += g.kind == GateKind::P;
    v += g.kind == GateKind::V;
  }
  EXPECT_EQ(cnots, 6);
  EXPECT_EQ(t_type, 7);
  EXPECT_EQ(v, 2);      // one per Hadamard
  EXPECT_EQ(p, 2 * 2 + 1);
  EXPECT_EQ(d.gates.size(), 6u + 7u + 1u + 6u);
}

TEST(DecomposeGates, ToffoliSequenceMatchesIndependentSimulation) {
  const auto seq = decomposition_of(Gate::toffoli(0, 1, 2));
  C phase = 0.0;
  for (std::size_t s = 0; s < 8; ++s) {
    const std::vector<C> out = apply_sequence(seq, s);
    const std::size_t expect = (s & 3) == 3 ? s ^ 4 : s;
    for (std::size_t k = 0; k < 8; ++k) {
      if (k != expect) {
        EXPECT_NEAR(std::abs(out[k]), 0.0, 1e-12) << "input " << s << " leaks into " << k;
      }
    }
    if (s == 0) phase = out[expect];
    EXPECT_NEAR(std::abs(out[expect] - phase), 0.0, 1e-12) << "input " << s;
  }
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
}

TEST(ToIcm, PGate) {
  const IcmCircuit icm = to_icm(parse_circuit("qubits 1\np 0\n"));
  EXPECT_EQ(icm.circuit.qubit_count(), 2);
  EXPECT_EQ(icm.circuit.gates.size(), 1u);
  EXPECT_EQ(icm.circuit.inits[1], InitBasis::Y);
  ASSERT_EQ(icm.instances.size(), 1u);
  EXPECT_EQ(icm.output_rows, std::vector<int>{0});  // the data row carries the result
  EXPECT_TRUE(icm.circuit.is_icm());
}

TEST(ToIcm, TGateSelectiveBlock) {
  const IcmCircuit icm = to_icm(parse_circuit("qubits 1\nt 0\n"));
  EXPECT_EQ(icm.circuit.qubit_count(), 6);
  EXPECT_EQ(icm.circuit.gates.size(), 6u);
  const std::vector<InitBasis> ancillae(icm.circuit.inits.begin() + 1, icm.circuit.inits.end());
  EXPECT_EQ(ancillae, (std::vector<InitBasis>{InitBasis::A, InitBasis::Zero, InitBasis::Y, InitBasis::Plus,
                                              InitBasis::Zero}));
  ASSERT_EQ(icm.instances.size(), 1u);
  EXPECT_TRUE(icm.instances[0].shape().selective());
  const auto inj = icm.instances[0].injections();
  ASSERT_EQ(inj.size(), 2u);
  EXPECT_EQ(inj[0].second, InitBasis::A);
  EXPECT_EQ(inj[1].second, InitBasis::Y);
}

TEST(ToIcm, HadamardUsesThreeYAncillae) {
  const IcmCircuit icm = to_icm(decompose_gates(parse_circuit("qubits 1\nh 0\n")));
  EXPECT_EQ(icm.circuit.gates.size(), 3u);
  int y = 0;
  for (InitBasis b : icm.circuit.inits) y += b == InitBasis::Y;
  EXPECT_EQ(y, 3);
  EXPECT_EQ(icm.instances.size(), 3u);
}

TEST(ToIcm, ToffoliInjectionCounts) {
  const IcmCircuit icm = to_icm(decompose_gates(parse_circuit("qubits 3\ntoffoli 0 1 2\n")));
  int a = 0, y = 0;
  for (const auto& inst : icm.instances) {
    for (const auto& [row, state] : inst.injections()) ++(state == InitBasis::A ? a : y);
  }
  EXPECT_EQ(a, 7);
  EXPECT_EQ(y, 14);  // 7 from the T blocks, 5 P-type gates, 2 V gates
}

TEST(ToIcm, RejectsCompositeGates) {
  EXPECT_THROW(to_icm(parse_circuit("qubits 1\nh 0\n")), std::invalid_argument);
}

TEST(SelectPattern, TBlockPatterns) {
  const IcmCircuit icm = to_icm(parse_circuit("qubits 1\nt 0\n"));
  const TemplateInstance& inst = icm.instances[0];
  const int correction = inst.shape().correction_outcome;
  const MeasPattern& a = select_pattern(inst, correction);
  const MeasPattern& b = select_pattern(inst, 1 - correction);
  EXPECT_EQ(std::vector<MeasBasis>(a.begin() + 1, a.begin() + 5),
            (std::vector<MeasBasis>{MeasBasis::Z, MeasBasis::X, MeasBasis::X, MeasBasis::Z}));
  EXPECT_EQ(std::vector<MeasBasis>(b.begin() + 1, b.begin() + 5),
            (std::vector<MeasBasis>{MeasBasis::X, MeasBasis::Z, MeasBasis::Z, MeasBasis::X}));
  EXPECT_EQ(a.back(), MeasBasis::Open);
  EXPECT_EQ(pattern_index(inst.shape(), correction), 0);
}

TEST(SelectPattern, RejectsNonSelective) {
  const IcmCircuit icm = to_icm(parse_circuit("qubits 1\np 0\n"));
  EXPECT_THROW(select_pattern(icm.instances[0], 0), std::invalid_argument);
}

TEST(TeleportTemplate, FrozenByproductRules) {
  auto rule = [](bool c, std::uint32_t rows) { return std::pair{c, rows}; };
  auto of = [](const ParityRule& r) { return std::pair{r.constant, r.rows}; };
  EXPECT_EQ(of(teleport_template(GateKind::P).byproducts[0].z), rule(false, 0b10));
  EXPECT_EQ(of(teleport_template(GateKind::Pdg).byproducts[0].z), rule(true, 0b10));
  EXPECT_EQ(of(teleport_template(GateKind::V).byproducts[0].x), rule(true, 0b10));
  EXPECT_EQ(of(teleport_template(GateKind::Vdg).byproducts[0].x), rule(false, 0b10));
  const auto& t = teleport_template(GateKind::T);
  EXPECT_EQ(t.correction_outcome, 1);
  EXPECT_EQ(of(t.byproducts[0].x), rule(true, 0b10010));
  EXPECT_EQ(of(t.byproducts[0].z), rule(true, 0b01110));
  EXPECT_EQ(of(t.byproducts[1].x), rule(false, 0b01100));
  EXPECT_EQ(of(t.byproducts[1].z), rule(false, 0b10010));
  const auto& tdg = teleport_template(GateKind::Tdg);
  EXPECT_EQ(tdg.correction_outcome, 0);
  EXPECT_EQ(of(tdg.byproducts[0].x), rule(false, 0b10010));
  EXPECT_EQ(of(tdg.byproducts[1].x), rule(true, 0b01100));
  EXPECT_THROW(teleport_template(GateKind::Cnot), std::invalid_argument);
}

TEST(ParityRule, Eval) {
  const ParityRule r{true, 0b101};
  const std::vector<int> bits = {1, 1, 0};
  EXPECT_FALSE(r.eval(bits));
  const std::vector<int> bits2 = {1, 0, 1};
  EXPECT_TRUE(r.eval(bits2));
}

TEST(PauliFrame, CnotPropagation) {
  PauliFrame f(2);
  f.flip_x(0);
  f.propagate_cnot(0, 1);
  EXPECT_TRUE(f.x(0));
  EXPECT_TRUE(f.x(1));
  PauliFrame g(2);
  g.flip_z(1);
  g.propagate_cnot(0, 1);
  EXPECT_TRUE(g.z(0));
  EXPECT_TRUE(g.z(1));
  EXPECT_TRUE(PauliFrame(3).is_identity());
}

TEST(PauliFrame, ComposeIsAssociative) {
  auto gen = testing::make_gen(11);
  for (int k = 0; k < 200; ++k) {
    PauliFrame f[3] = {PauliFrame(4), PauliFrame(4), PauliFrame(4)};
    for (auto& fr : f) {
      for (int q = 0; q < 4; ++q) {
        if (testing::pick(gen, 0, 1)) fr.flip_x(q);
        if (testing::pick(gen, 0, 1)) fr.flip_z(q);
      }
    }
    EXPECT_EQ(f[0].compose(f[1]).compose(f[2]), f[0].compose(f[1].compose(f[2])));
    EXPECT_TRUE(f[0].compose(f[0]).is_identity());
  }
}

}  // namespace
}  // namespace tqec
