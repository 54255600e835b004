#include <gtest/gtest.h>

#include "tqec/decompose.hpp"
#include "tqec/scheduling.hpp"

namespace tqec {
namespace {

std::vector<PinPair> pairs_for(const std::string& source) {
  const Circuit c = decompose_gates(parse_circuit(source));
  return injection_pairs(generate_geometry(to_matrix(to_icm(c).circuit)));
}

int count_state(const std::vector<BoxInstance>& boxes, StateType s) {
  int n = 0;
  for (const BoxInstance& b : boxes) n += b.dim.state == s;
  return n;
}

TEST(ScheduleBoxes, TGate) {
  Region region;
  const Schedule s = schedule_boxes(pairs_for("qubits 1\nt 0\n"), BoxDims{}, region);
  EXPECT_EQ(count_state(s.boxes, StateType::A), 1);
  EXPECT_EQ(count_state(s.boxes, StateType::Y), 1);
  EXPECT_EQ(s.kind, ScheduleKind::Heterogeneous);
}

TEST(ScheduleBoxes, HadamardStacksAlongI) {
  Region region;
  const Schedule s = schedule_boxes(pairs_for("qubits 1\nh 0\n"), BoxDims{}, region);
  ASSERT_EQ(s.boxes.size(), 3u);
  EXPECT_EQ(s.kind, ScheduleKind::HomogeneousY);
  // rows are 6 apart and Y boxes 4 wide, so no two overlap in j; each
  // still sits at its own pin row
  for (const BoxInstance& b : s.boxes) EXPECT_EQ(b.pins[0].coord.j, b.origin.j);
}

TEST(ScheduleBoxes, OverlappingJStacks) {
  BoxDims dims;
  PinPair p;
  p.state = StateType::A;
  for (Pin& pin : p.pins) pin.coord = {1, 1, 1};
  PinPair q = p;
  for (Pin& pin : q.pins) pin.coord = {1, 5, 1};
  Region region;
  const Schedule s = schedule_boxes({p, q}, dims, region);
  ASSERT_EQ(s.boxes.size(), 2u);
  EXPECT_EQ(s.boxes[0].origin.i, 0);
  EXPECT_EQ(s.boxes[1].origin.i, dims.a.ispan);
}

TEST(ScheduleBoxes, Toffoli) {
  Region region;
  const Schedule s = schedule_boxes(pairs_for("qubits 3\ntoffoli 0 1 2\n"), BoxDims{}, region);
  EXPECT_EQ(s.boxes.size(), 21u);
  EXPECT_EQ(count_state(s.boxes, StateType::A), 7);
  EXPECT_EQ(count_state(s.boxes, StateType::Y), 14);
}

TEST(ScheduleBoxes, PinsAndFace) {
  BoxDims dims;
  Region region;
  const Schedule s = schedule_boxes(pairs_for("qubits 1\nt 0\n"), dims, region);
  for (const BoxInstance& b : s.boxes) {
    EXPECT_EQ(b.origin.t + b.dim.tspan, dims.t_face());
    EXPECT_EQ(b.pins[0].coord, (Coord{b.origin.i + 1, b.origin.j, dims.t_face() + 1}));
    EXPECT_EQ(b.pins[1].coord, (Coord{b.origin.i + b.dim.ispan - 1, b.origin.j, dims.t_face() + 1}));
  }
}

TEST(HomogeneousSchedule, Counts) {
  Region region;
  EXPECT_TRUE(homogeneous_schedule(0, StateType::Y, 1, BoxDims{}, 0, region).boxes.empty());
  const Schedule four = homogeneous_schedule(4, StateType::Y, 1, BoxDims{}, 0, region);
  ASSERT_EQ(four.boxes.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(four.boxes[k].origin.j, 1 + 4 * static_cast<int>(k));
    EXPECT_TRUE(four.boxes[k].spare);
  }
}

TEST(SpareArray, ToffoliSpares) {
  Region region;
  const Schedule y = spare_array(12, StateType::Y, 1, BoxDims{}, region);
  const Schedule a = spare_array(8, StateType::A, 101, BoxDims{}, region);
  EXPECT_EQ(y.boxes.size(), 12u);
  EXPECT_EQ(a.boxes.size(), 8u);
  EXPECT_EQ(y.kind, ScheduleKind::HomogeneousY);
  EXPECT_EQ(a.kind, ScheduleKind::HomogeneousA);
}

TEST(SimulateFailures, RateOneAssignsInOrder) {
  const auto pairs = pairs_for("qubits 1\nh 0\n");
  Region region;
  std::vector<BoxInstance> boxes = schedule_boxes(pairs, BoxDims{}, region).boxes;
  Rng rng(1);
  const FailureReport r = simulate_failures(boxes, pairs, 1.0, rng);
  ASSERT_EQ(r.assignments.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(r.assignments[static_cast<std::size_t>(k)].box, k);
    EXPECT_EQ(r.assignments[static_cast<std::size_t>(k)].pair, k);
  }
  EXPECT_EQ(r.y.failed_initial, 0);
}

TEST(SimulateFailures, RateZeroFails) {
  const auto pairs = pairs_for("qubits 1\np 0\n");
  Region region;
  std::vector<BoxInstance> boxes = schedule_boxes(pairs, BoxDims{}, region).boxes;
  Rng rng(1);
  try {
    simulate_failures(boxes, pairs, 0.0, rng);
    FAIL() << "expected SynthesisError";
  } catch (const SynthesisError& e) {
    EXPECT_EQ(e.unserved(), std::vector<int>{0});
  }
}

TEST(SimulateFailures, SparesAreUsedAfterInitialBoxes) {
  const auto pairs = pairs_for("qubits 1\np 0\n");
  Region region;
  std::vector<BoxInstance> boxes = spare_array(4, StateType::Y, 1, BoxDims{}, region).boxes;
  const auto initial = schedule_boxes(pairs, BoxDims{}, region).boxes;
  boxes.insert(boxes.end(), initial.begin(), initial.end());
  Rng rng(2);
  const FailureReport r = simulate_failures(boxes, pairs, 1.0, rng);
  ASSERT_EQ(r.assignments.size(), 1u);
  EXPECT_EQ(r.assignments[0].box, 4);  // the non-spare box, even though listed last
}

TEST(Rng, FrozenStream) {
  // first outputs of mt19937_64 seeded with 0, top 53 bits scaled to [0, 1)
  Rng rng(0);
  std::mt19937_64 ref(0);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(rng.uniform(), static_cast<double>(ref() >> 11) / 9007199254740992.0);
  EXPECT_EQ(Rng::kId, "mt19937_64/u53");
}

TEST(ConnectPins, LegCounts) {
  auto pin = [](Coord c) {
    Pin p;
    p.coord = c;
    return p;
  };
  EXPECT_EQ(connect_pins(pin({2, 4, 0}), pin({2, 4, 6})).size(), 1u);
  const auto two = connect_pins(pin({1, 5, 9}), pin({5, 5, 15}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].axis(), Axis::T);
  EXPECT_EQ(two[1].axis(), Axis::I);
  const auto three = connect_pins(pin({1, 3, 9}), pin({5, 17, 15}));
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three.front().a, (Coord{1, 3, 9}));
  EXPECT_EQ(three.back().b, (Coord{5, 17, 15}));
  EXPECT_TRUE(connect_pins(pin({1, 1, 1}), pin({1, 1, 1})).empty());
}

TEST(SpareCount, BinomialTail) {
  // frozen from scipy.stats.binom: smallest n with cdf(needed-1; needed+n, rate) <= eps
  EXPECT_EQ(spare_count(1, 1.0, 0.01), 0);
  EXPECT_EQ(spare_count(0, 0.5, 0.01), 0);
  EXPECT_EQ(spare_count(1, 0.8, 0.01), 2);
  EXPECT_EQ(spare_count(3, 0.8, 0.01), 4);
  EXPECT_EQ(spare_count(4, 0.8, 0.01), 5);
  EXPECT_EQ(spare_count(7, 0.8, 0.01), 6);
  EXPECT_EQ(spare_count(14, 0.8, 0.01), 9);
  EXPECT_EQ(spare_count(21, 0.8, 0.01), 12);
  EXPECT_EQ(spare_count(7, 0.5, 0.05), 14);
  EXPECT_EQ(spare_count(14, 0.9, 0.001), 7);
  EXPECT_THROW(spare_count(1, 0.0, 0.01), std::invalid_argument);
  EXPECT_THROW(spare_count(-1, 0.5, 0.01), std::invalid_argument);
}

TEST(BoxDims, Validation) {
  BoxDims d;
  EXPECT_NO_THROW(d.validate());
  d.y.jspan = 3;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  d = {};
  d.a.jspan = 4;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  EXPECT_THROW(BoxDims{}.of(StateType::None), std::invalid_argument);
}

TEST(Region, FindI) {
  Region r;
  r.occupy({0, 0, 4, 4});
  EXPECT_EQ(r.find_i(2, 4, 4, 0, 1), 4);
  EXPECT_EQ(r.find_i(4, 4, 4, 0, 1), 0);
  EXPECT_THROW(r.occupy({2, 2, 4, 4}), std::logic_error);
  Region bounded(0, 6);
  bounded.occupy({0, 0, 4, 4});
  EXPECT_FALSE(bounded.find_i(0, 4, 4, 0, 1).has_value());
}

}  // namespace
}  // namespace tqec
