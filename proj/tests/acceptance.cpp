// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tqec/decompose.hpp"
#include "tqec/oracle_sim.hpp"
#include "tqec/pipeline.hpp"

namespace {

using namespace tqec;
using Clock = std::chrono::steady_clock;

constexpr double kOracleTolerance = 1e-10;
constexpr double kBoxCountSeconds = 1.0;  // per run
constexpr double kOracleSeconds = 30.0;
constexpr double kPropertySeconds = 60.0;
constexpr int kPropertyCases = 200;
// first seed in 0, 1, 2, ... that fails exactly 4 Y and 3 A initial boxes
constexpr std::uint64_t kToffoliFailureSeed = 7;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct BoxCounts {
  int a = 0;
  int y = 0;
  int total() const { return a + y; }
};

BoxCounts count_boxes(const PipelineResult& r) {
  BoxCounts c;
  for (const BoxInstance& b : r.geometry.boxes) ++(b.dim.state == StateType::A ? c.a : c.y);
  return c;
}

PipelineConfig config(const char* source, double rate = 1.0) {
  PipelineConfig c;
  c.source = source;
  c.success_rate = rate;
  return c;
}

void criterion_box_counts(Check& check) {
  struct Case {
    const char* name;
    const char* source;
    BoxCounts expect;
  };
  const Case cases[] = {{"P", testing::kPSource, {0, 1}},
                        {"T", testing::kTSource, {1, 1}},
                        {"H", testing::kHSource, {0, 3}},
                        {"Toffoli", testing::kToffoliSource, {7, 14}}};
  for (const Case& c : cases) {
    const auto start = Clock::now();
    const BoxCounts got = count_boxes(run_pipeline(config(c.source)));
    const double took = seconds_since(start);
    check.expect(got.a == c.expect.a && got.y == c.expect.y,
                 std::string(c.name) + ": got " + std::to_string(got.a) + " A + " + std::to_string(got.y) + " Y");
    check.expect(took < kBoxCountSeconds, std::string(c.name) + ": took " + std::to_string(took) + " s");
  }
}

void criterion_spare_schedules(Check& check) {
  PipelineConfig p = config(testing::kPSource, 0.8);
  p.spares.y = 4;
  const BoxCounts pc = count_boxes(run_pipeline(p));
  check.expect(pc.y == 5 && pc.a == 0, "P: " + std::to_string(pc.y) + " Y boxes");

  PipelineConfig t = config(testing::kToffoliSource, 0.8);
  t.spares.y = 12;
  t.spares.a = 8;
  // the spare arrays are present whatever the draws; try seeds until one
  // is served so the schedule can be inspected
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    t.seed = seed;
    try {
      const BoxCounts tc = count_boxes(run_pipeline(t));
      check.expect(tc.total() == 41, "Toffoli: " + std::to_string(tc.total()) + " boxes");
      check.expect(tc.y == 26 && tc.a == 15, "Toffoli split " + std::to_string(tc.a) + " A / " + std::to_string(tc.y) + " Y");
      return;
    } catch (const SynthesisError&) {
    }
  }
  check.expect(false, "Toffoli: no seed below 100 served every pair");
}

void criterion_failure_pattern(Check& check) {
  PipelineConfig t = config(testing::kToffoliSource, 0.8);
  t.spares.y = 12;
  t.spares.a = 8;
  t.seed = kToffoliFailureSeed;
  PipelineResult r;
  try {
    r = run_pipeline(t);
  } catch (const SynthesisError& e) {
    check.expect(false, std::string("synthesis failed: ") + e.what());
    return;
  }
  const FailureReport& f = r.failures;
  check.expect(f.y.failed_initial == 4, "Y initial failures " + std::to_string(f.y.failed_initial));
  check.expect(f.a.failed_initial == 3, "A initial failures " + std::to_string(f.a.failed_initial));
  check.expect(f.assignments.size() == 21, "served pairs " + std::to_string(f.assignments.size()));
  check.expect(f.y.served_by_spare == 4 && f.a.served_by_spare == 3,
               "spare-served " + std::to_string(f.a.served_by_spare) + " A / " + std::to_string(f.y.served_by_spare) + " Y");
  for (const Assignment& a : f.assignments) {
    check.expect(r.geometry.boxes[static_cast<std::size_t>(a.box)].status == BoxStatus::Success, "assigned box not successful");
  }
}

void criterion_oracle(Check& check) {
  const auto start = Clock::now();
  for (GateKind k : {GateKind::P, GateKind::Pdg, GateKind::V, GateKind::Vdg, GateKind::T, GateKind::Tdg}) {
    Circuit c(1);
    c.gates.push_back(Gate::single(k, 0));
    const double inf = check_equivalence(c, to_icm(c), 16, 1234);
    check.expect(inf <= kOracleTolerance, std::string(to_string(k)) + " template infidelity " + std::to_string(inf));
  }

  const GateMatrix pvp = gate_matrix(GateKind::P) * gate_matrix(GateKind::V) * gate_matrix(GateKind::P);
  const double dh = matrix_distance(pvp, hadamard_matrix());
  check.expect(dh <= kOracleTolerance, "H vs PVP " + std::to_string(dh));

  // circuit_unitary is little-endian while toffoli_matrix lists its first
  // operand as the high bit, so the controls go on qubits 2 and 1
  Circuit seq(3);
  seq.gates = decomposition_of(Gate::toffoli(2, 1, 0));
  const double dt = matrix_distance(circuit_unitary(seq), toffoli_matrix());
  check.expect(dt <= kOracleTolerance, "Toffoli unitary " + std::to_string(dt));

  // selective T block: every branch, both patterns, several inputs
  const IcmCircuit icm = to_icm(parse_circuit(testing::kTSource));
  const int m = measurement_count(icm.circuit);
  std::mt19937_64 gen(99);
  bool seen[2] = {false, false};
  for (int trial = 0; trial < 4; ++trial) {
    const std::array<Complex, 2> psi = random_qubit(gen);
    const StateVector in = StateVector::product(std::span(&psi, 1));
    StateVector expected = in;
    expected.apply(gate_matrix(GateKind::T), {0});
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<int> bits;
      for (int k = 0; k < m; ++k) bits.push_back((mask >> k) & 1);
      FixedOutcomes src(bits);
      const SimResult r = simulate(icm, in, src);
      if (r.probability <= 1e-12) continue;
      seen[r.patterns.at(0)] = true;
      const double inf = infidelity(r.corrected(), expected);
      if (inf > kOracleTolerance) {
        check.expect(false, "T branch " + std::to_string(mask) + " infidelity " + std::to_string(inf));
      }
    }
  }
  check.expect(seen[0] && seen[1], "T block did not exercise both patterns");
  const double took = seconds_since(start);
  check.expect(took < kOracleSeconds, "oracle checks took " + std::to_string(took) + " s");
}

Segment seg(DefectKind k, Coord a, Coord b) { return {k, a, b}; }

Defect line(Coord a, Coord b) { return {DefectKind::Primal, {seg(DefectKind::Primal, a, b)}, false}; }

Defect dual_ring(int t, int i0, int j0, int i1, int j1) {
  return {DefectKind::Dual,
          {seg(DefectKind::Dual, {i0, j0, t}, {i1, j0, t}), seg(DefectKind::Dual, {i1, j0, t}, {i1, j1, t}),
           seg(DefectKind::Dual, {i1, j1, t}, {i0, j1, t}), seg(DefectKind::Dual, {i0, j1, t}, {i0, j0, t})},
          true};
}

Geometry of(std::vector<Defect> defects) {
  Geometry g;
  g.defects = std::move(defects);
  return g;
}

void criterion_volume(Check& check) {
  const long long five = volume_units(of({line({1, 1, 1}, {1, 1, 5})})).volume_units;
  check.expect(five == 1, "5-cube defect: " + std::to_string(five));
  const VolumeReport one = volume_units(of({line({1, 5, 1}, {1, 5, 9}), dual_ring(4, 0, 2, 2, 8)}));
  check.expect(one.volume_units == 4, "ring around one primal: " + std::to_string(one.volume_units));
  const VolumeReport two =
      volume_units(of({line({1, 5, 1}, {1, 5, 9}), line({1, 9, 1}, {1, 9, 9}), dual_ring(4, 0, 2, 2, 12)}));
  check.expect(two.volume_units == 6, "ring around two primals: " + std::to_string(two.volume_units));
  const VolumeReport bridged = volume_from_cubes({10, 10, 15});
  check.expect(bridged.units.i == 2 && bridged.units.j == 2 && bridged.units.t == 3 && bridged.volume_units == 12,
               "bridged CNOT: " + std::to_string(bridged.volume_units));
}

void criterion_distance(Check& check) {
  struct Case {
    int d_f;
    int sep;
    int expect;
  };
  for (const Case& c : {Case{1, 2, 3}, Case{1, 4, 4}, Case{2, 8, 8}}) {
    const int got = distance_report(c.d_f, c.sep).code_distance;
    check.expect(got == c.expect, "(d_f=" + std::to_string(c.d_f) + ", sep=" + std::to_string(c.sep) + ") -> " +
                                      std::to_string(got));
    // the same configuration laid out as two parallel primal strands
    const int cell_gap = c.sep / c.d_f;
    const Geometry g = of({line({1, 1, 1}, {1, 1, 9}), line({1 + cell_gap, 1, 1}, {1 + cell_gap, 1, 9})});
    const int from_geometry = min_code_distance(g, c.d_f).code_distance;
    check.expect(from_geometry == c.expect, "geometry for (d_f=" + std::to_string(c.d_f) + ", sep=" +
                                                std::to_string(c.sep) + ") -> " + std::to_string(from_geometry));
  }
}

PipelineConfig random_config(std::mt19937_64& gen) {
  PipelineConfig c;
  c.source = format_circuit(testing::random_circuit(gen, 3, 4, true));
  c.success_rate = testing::pick(gen, 0, 1) ? 1.0 : 0.8;
  c.spares.epsilon = 1e-6;
  c.seed = gen();
  return c;
}

void criterion_properties(Check& check) {
  const auto start = Clock::now();
  auto gen = testing::make_gen(2024);

  int bad = 0;
  for (int k = 0; k < kPropertyCases; ++k) {
    const Circuit c = testing::random_icm(gen);
    bad += !(from_matrix(to_matrix(c)) == c);
  }
  check.expect(bad == 0, "matrix round trip failed " + std::to_string(bad) + " times");

  bad = 0;
  int link_bad = 0;
  int slice_bad = 0;
  for (int k = 0; k < kPropertyCases; ++k) {
    const Geometry g = generate_geometry(to_matrix(testing::random_icm(gen, 6, 6)));
    bad += !validate_parity(g).empty();
    for (const BraidLoop& loop : g.loops) {
      const auto& segs = g.defects[static_cast<std::size_t>(loop.defect)].segments;
      for (const RowStrands& s : g.strands) {
        const int want = (s.row == loop.control || s.row == loop.target) ? 1 : 0;
        link_bad += std::abs(linking_number(segs, g.defects[static_cast<std::size_t>(s.inner)].segments)) != want;
        link_bad += linking_number(segs, g.defects[static_cast<std::size_t>(s.outer)].segments) != 0;
      }
    }
    const auto layers = slice_layers(g, default_extent(g));
    int primal = 0;
    for (const Layer& l : layers) primal += l.kind == DefectKind::Primal;
    slice_bad += primal != static_cast<int>(layers.size()) - primal + 1;
  }
  check.expect(bad == 0, "parity diagnostics on " + std::to_string(bad) + " generated geometries");
  check.expect(link_bad == 0, "linking numbers wrong " + std::to_string(link_bad) + " times");
  check.expect(slice_bad == 0, "layer count wrong " + std::to_string(slice_bad) + " times");

  int done = 0, overlap = 0, route_bad = 0, nondeterministic = 0, parity_bad = 0;
  for (int attempt = 0; attempt < 4 * kPropertyCases && done < kPropertyCases; ++attempt) {
    const PipelineConfig c = random_config(gen);
    PipelineResult r;
    try {
      r = run_pipeline(c);
    } catch (const SynthesisError&) {
      continue;
    }
    ++done;
    const Geometry& g = r.geometry;
    parity_bad += !validate_parity(g).empty();
    for (std::size_t a = 0; a < g.boxes.size(); ++a) {
      for (std::size_t b = a + 1; b < g.boxes.size(); ++b) {
        const Rect ra{g.boxes[a].origin.i, g.boxes[a].origin.j, g.boxes[a].dim.ispan, g.boxes[a].dim.jspan};
        const Rect rb{g.boxes[b].origin.i, g.boxes[b].origin.j, g.boxes[b].dim.ispan, g.boxes[b].dim.jspan};
        overlap += ra.intersects(rb);
      }
    }
    for (const Connection& conn : g.connections) {
      Coord at = g.boxes[static_cast<std::size_t>(conn.box)].pins[static_cast<std::size_t>(conn.box_pin)].coord;
      bool ok = conn.segments.size() <= 3;
      for (const Segment& s : conn.segments) {
        ok = ok && s.a == at && s.length() > 0 && (s.a.i != s.b.i) + (s.a.j != s.b.j) + (s.a.t != s.b.t) == 1;
        at = s.b;
      }
      route_bad += !(ok && at == g.pins[static_cast<std::size_t>(conn.circuit_pin)].coord);
    }
    const std::string once = export_document(to_document(r, c), ExportFormat::Json);
    nondeterministic += export_document(to_document(run_pipeline(c), c), ExportFormat::Json) != once;
  }
  check.expect(done == kPropertyCases, "only " + std::to_string(done) + " random pipelines completed");
  check.expect(parity_bad == 0, "parity diagnostics on " + std::to_string(parity_bad) + " synthesised geometries");
  check.expect(overlap == 0, "overlapping box footprints: " + std::to_string(overlap));
  check.expect(route_bad == 0, "invalid routes: " + std::to_string(route_bad));
  check.expect(nondeterministic == 0, "non-deterministic documents: " + std::to_string(nondeterministic));

  const double took = seconds_since(start);
  check.expect(took < kPropertySeconds, "property suites took " + std::to_string(took) + " s");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 box counts (P, T, H, Toffoli)", criterion_box_counts},
      {"2 spare schedules with explicit counts", criterion_spare_schedules},
      {"3 Toffoli failure pattern (seed 7)", criterion_failure_pattern},
      {"4 oracle equivalence", criterion_oracle},
      {"5 volume units", criterion_volume},
      {"6 code distance", criterion_distance},
      {"7 property suites", criterion_properties},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Check check;
    try {
      c.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = check.failures.empty();
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.name;
    for (const std::string& f : check.failures) std::cout << "\n      " << f;
    std::cout << std::endl;
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
