#include "tqec/analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "json.hpp"

namespace tqec {

namespace {

void extend(BoundingBox& box, bool& first, const Coord& c) {
  if (first) {
    box.min = box.max = c;
    first = false;
    return;
  }
  box.min = {std::min(box.min.i, c.i), std::min(box.min.j, c.j), std::min(box.min.t, c.t)};
  box.max = {std::max(box.max.i, c.i), std::max(box.max.j, c.j), std::max(box.max.t, c.t)};
}

int gap(int a0, int a1, int b0, int b1) {
  const int lo_a = std::min(a0, a1), hi_a = std::max(a0, a1);
  const int lo_b = std::min(b0, b1), hi_b = std::max(b0, b1);
  return std::max({0, lo_b - hi_a, lo_a - hi_b});
}

/// L1 distance between two axis-aligned segments.
int segment_distance(const Segment& x, const Segment& y) {
  return gap(x.a.i, x.b.i, y.a.i, y.b.i) + gap(x.a.j, x.b.j, y.a.j, y.b.j) + gap(x.a.t, x.b.t, y.a.t, y.b.t);
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::int64_t key(int i, int j, int t) {
  // faces of cells on the lattice boundary may sit at -1
  return (static_cast<std::int64_t>(i + 1) << 42) | (static_cast<std::int64_t>(j + 1) << 21) | static_cast<std::int64_t>(t + 1);
}

}  // namespace

BoundingBox bounding_box(const Geometry& geometry) {
  BoundingBox box;
  bool first = true;
  for (const Segment& s : geometry.all_segments()) {
    extend(box, first, s.a);
    extend(box, first, s.b);
  }
  for (const Pin& p : geometry.pins) extend(box, first, p.coord);
  for (const Injection& inj : geometry.injections) extend(box, first, inj.vertex);
  for (const BoxInstance& b : geometry.boxes) {
    extend(box, first, b.origin);
    extend(box, first, {b.origin.i + b.dim.ispan - 1, b.origin.j + b.dim.jspan - 1, b.origin.t + b.dim.tspan - 1});
    for (const Pin& p : b.pins) extend(box, first, p.coord);
  }
  if (first) throw std::invalid_argument("bounding_box: empty geometry");
  return box;
}

DistanceReport distance_report(int defect_diameter, std::optional<int> separation) {
  if (defect_diameter < 1) throw std::invalid_argument("distance_report: defect diameter must be >= 1");
  DistanceReport r;
  r.defect_diameter = defect_diameter;
  r.min_separation = separation;
  r.ring_length = 4 * defect_diameter;
  r.code_distance = r.ring_length;
  if (separation) {
    r.chain_length = *separation + 1;
    r.code_distance = std::min(r.ring_length, *r.chain_length);
  }
  return r;
}

DistanceReport min_code_distance(const Geometry& geometry, int d) {
  if (d < 1) throw std::invalid_argument("min_code_distance: cube side must be >= 1");
  if (geometry.defects.empty()) throw std::invalid_argument("min_code_distance: geometry has no defects");
  std::optional<int> best;
  for (std::size_t p = 0; p < geometry.defects.size(); ++p) {
    for (std::size_t q = p + 1; q < geometry.defects.size(); ++q) {
      if (geometry.defects[p].kind != geometry.defects[q].kind) continue;
      for (const Segment& x : geometry.defects[p].segments) {
        for (const Segment& y : geometry.defects[q].segments) {
          const int dist = segment_distance(x, y);
          if (!best || dist < *best) best = dist;
        }
      }
    }
  }
  if (best) *best *= d;
  return distance_report(d, best);
}

VolumeReport volume_from_cubes(Coord cubes) {
  if (cubes.i < 0 || cubes.j < 0 || cubes.t < 0) throw std::invalid_argument("volume_from_cubes: negative size");
  VolumeReport r;
  r.bbox_cubes = cubes;
  r.units = {ceil_div(cubes.i, 5), ceil_div(cubes.j, 5), ceil_div(cubes.t, 5)};
  r.volume_units = static_cast<long long>(r.units.i) * r.units.j * r.units.t;
  return r;
}

VolumeReport volume_units(const Geometry& geometry, int d) {
  if (d < 1) throw std::invalid_argument("volume_units: cube side must be >= 1");
  const Coord e = bounding_box(geometry).extent();
  VolumeReport r = volume_from_cubes({ceil_div(e.i, d), ceil_div(e.j, d), ceil_div(e.t, d)});
  r.cube_side = d;
  return r;
}

std::string_view to_string(QubitBasis basis) {
  switch (basis) {
    case QubitBasis::X: return "X";
    case QubitBasis::Z: return "Z";
    case QubitBasis::Injected: return "injected";
    case QubitBasis::UnmeasuredIO: return "unmeasured_io";
  }
  return "?";
}

std::string_view to_string(InstructionOp op) {
  switch (op) {
    case InstructionOp::Init: return "init";
    case InstructionOp::Entangle: return "entangle";
    case InstructionOp::Measure: return "measure";
  }
  return "?";
}

Coord default_extent(const Geometry& geometry) {
  if (geometry.empty()) return {1, 1, 1};
  const BoundingBox b = bounding_box(geometry);
  return {b.max.i + 2, b.max.j + 2, b.max.t + 2};
}

std::vector<Layer> slice_layers(const Geometry& geometry, Coord extent) {
  if (extent.i < 1 || extent.j < 1 || extent.t < 1) throw std::invalid_argument("slice_layers: extent must be positive");
  if (!geometry.empty()) {
    const BoundingBox b = bounding_box(geometry);
    if (b.min.i < 0 || b.min.j < 0 || b.min.t < 0 || b.max.i >= extent.i || b.max.j >= extent.j ||
        b.max.t >= extent.t) {
      throw std::invalid_argument("slice_layers: extent does not cover the geometry");
    }
  }

  std::unordered_map<std::int64_t, QubitBasis> marks;
  auto mark = [&](int i, int j, int t, QubitBasis basis) {
    auto [it, inserted] = marks.emplace(key(i, j, t), basis);
    if (!inserted && static_cast<int>(basis) > static_cast<int>(it->second)) it->second = basis;
  };
  for (const Segment& s : geometry.all_segments()) {
    const Axis axis = s.axis();
    const Coord lo = std::min(s.a, s.b);
    const int len = s.length();
    for (int step = 0; step <= len; step += 2) {
      Coord cell = lo;
      (axis == Axis::I ? cell.i : axis == Axis::J ? cell.j : cell.t) += step;
      for (int d : {-1, 1}) {
        mark(cell.i + d, cell.j, cell.t, QubitBasis::Z);
        mark(cell.i, cell.j + d, cell.t, QubitBasis::Z);
        mark(cell.i, cell.j, cell.t + d, QubitBasis::Z);
      }
    }
  }
  for (const Injection& inj : geometry.injections) mark(inj.vertex.i, inj.vertex.j, inj.vertex.t, QubitBasis::Injected);
  for (const IOPort& port : geometry.ports) {
    if (!port.configurable()) continue;
    const int dt = port.role == PortRole::Input ? -1 : 1;
    for (int p : port.pins) {
      const Coord& c = geometry.pins[static_cast<std::size_t>(p)].coord;
      mark(c.i, c.j, c.t + dt, QubitBasis::UnmeasuredIO);
    }
  }

  int last = extent.t - 1;
  if (last % 2 != 0) ++last;
  std::vector<Layer> layers;
  for (int t = 0; t <= last; ++t) {
    Layer layer;
    layer.t = t;
    layer.kind = t % 2 == 0 ? DefectKind::Primal : DefectKind::Dual;
    for (int i = 0; i < extent.i; ++i) {
      for (int j = 0; j < extent.j; ++j) {
        const int parity = (i & 1) + (j & 1) + (t & 1);
        if (parity == 0 || parity == 3) continue;  // cell centres carry no qubit
        const auto it = marks.find(key(i, j, t));
        layer.qubits.push_back({i, j, it == marks.end() ? QubitBasis::X : it->second});
      }
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<Instruction> execution_schedule(const std::vector<Layer>& layers) {
  if (layers.empty() || layers.size() % 2 == 0) {
    throw std::invalid_argument("execution_schedule: need an odd number of layers starting with a primal one");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const DefectKind expect = k % 2 == 0 ? DefectKind::Primal : DefectKind::Dual;
    if (layers[k].kind != expect) {
      throw std::invalid_argument("execution_schedule: layer " + std::to_string(k) + " breaks the primal/dual alternation");
    }
  }
  const int n = static_cast<int>(layers.size() / 2);
  auto p = [](int i) { return 2 * i; };
  auto d = [](int i) { return 2 * i + 1; };
  std::vector<Instruction> out;
  out.push_back({InstructionOp::Init, p(0)});
  if (n > 0) {
    out.push_back({InstructionOp::Init, d(0)});
    out.push_back({InstructionOp::Entangle, p(0), d(0)});
  }
  for (int i = 0; i < n; ++i) {
    out.push_back({InstructionOp::Measure, p(i)});
    out.push_back({InstructionOp::Init, p(i + 1)});
    out.push_back({InstructionOp::Entangle, p(i + 1), d(i)});
    out.push_back({InstructionOp::Measure, d(i)});
    if (i + 1 < n) {
      out.push_back({InstructionOp::Init, d(i + 1)});
      out.push_back({InstructionOp::Entangle, d(i + 1), p(i + 1)});
    }
  }
  out.push_back({InstructionOp::Measure, p(n)});
  return out;
}

std::size_t write_instruction_stream(std::ostream& out, const std::vector<Layer>& layers,
                                     const std::vector<Instruction>& stream) {
  for (const Instruction& ins : stream) {
    const Layer& layer = layers.at(static_cast<std::size_t>(ins.layer));
    nlohmann::json rec;
    rec["op"] = to_string(ins.op);
    rec["layer"] = ins.layer;
    rec["kind"] = to_string(layer.kind);
    rec["t"] = layer.t;
    if (ins.op == InstructionOp::Entangle) {
      rec["with"] = ins.other;
    } else {
      nlohmann::json qubits = nlohmann::json::array();
      for (const LayerQubit& q : layer.qubits) qubits.push_back({q.i, q.j, to_string(q.basis)});
      rec["qubits"] = std::move(qubits);
    }
    out << rec.dump() << '\n';
  }
  return stream.size();
}

}  // namespace tqec
