#include "tqec/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tqec {

namespace {

bool odd(int v) { return v % 2 != 0; }
bool all_odd(const Coord& c) { return odd(c.i) && odd(c.j) && odd(c.t); }
bool all_even(const Coord& c) { return !odd(c.i) && !odd(c.j) && !odd(c.t); }
int odd_count(const Coord& c) { return int{odd(c.i)} + int{odd(c.j)} + int{odd(c.t)}; }

std::string str(const Coord& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.t) + ")";
}

}  // namespace

std::string_view to_string(DefectKind kind) { return kind == DefectKind::Primal ? "primal" : "dual"; }

std::string_view to_string(PinRole role) {
  switch (role) {
    case PinRole::Injection: return "injection";
    case PinRole::Io: return "io";
    case PinRole::BoxOutput: return "box_output";
    case PinRole::Ghost: return "ghost";
  }
  return "?";
}

std::string_view to_string(StateType state) {
  switch (state) {
    case StateType::None: return "none";
    case StateType::A: return "A";
    case StateType::Y: return "Y";
  }
  return "?";
}

std::string_view to_string(IoTemplate tag) {
  switch (tag) {
    case IoTemplate::ZInit: return "z_init";
    case IoTemplate::XInit: return "x_init";
    case IoTemplate::ZMeas: return "z_meas";
    case IoTemplate::XMeas: return "x_meas";
    case IoTemplate::OpenInput: return "open_input";
    case IoTemplate::OpenOutput: return "open_output";
    case IoTemplate::Injection: return "injection";
  }
  return "?";
}

std::string_view to_string(BoxStatus status) {
  switch (status) {
    case BoxStatus::Pending: return "pending";
    case BoxStatus::Success: return "success";
    case BoxStatus::Failed: return "failed";
  }
  return "?";
}

Axis Segment::axis() const {
  const int di = a.i != b.i;
  const int dj = a.j != b.j;
  const int dt = a.t != b.t;
  if (di + dj + dt != 1) throw std::invalid_argument("segment " + str(a) + "-" + str(b) + " is not axis-aligned");
  return di ? Axis::I : (dj ? Axis::J : Axis::T);
}

int Segment::length() const { return std::abs(a.i - b.i) + std::abs(a.j - b.j) + std::abs(a.t - b.t); }

IoTemplate io_geometry(PortRole role, PortBasis basis, DefectKind qubit_kind) {
  if (qubit_kind == DefectKind::Dual) {
    if (basis == PortBasis::Z) {
      basis = PortBasis::X;
    } else if (basis == PortBasis::X) {
      basis = PortBasis::Z;
    }
  }
  const bool input = role == PortRole::Input;
  switch (basis) {
    case PortBasis::Z: return input ? IoTemplate::ZInit : IoTemplate::ZMeas;
    case PortBasis::X: return input ? IoTemplate::XInit : IoTemplate::XMeas;
    case PortBasis::Open: return input ? IoTemplate::OpenInput : IoTemplate::OpenOutput;
    case PortBasis::InjectionA:
    case PortBasis::InjectionY:
      if (input) return IoTemplate::Injection;
      break;
  }
  throw std::invalid_argument("io_geometry: injection is only defined for inputs");
}

void LayoutParams::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("layout: " + m); };
  if (i_inner < 1 || !odd(i_inner)) fail("i_inner must be odd and >= 1");
  if (!odd(i_outer) || i_outer - i_inner < 4) fail("i_outer must be odd and at least i_inner + 4");
  if (j0 < 1 || !odd(j0)) fail("j0 must be odd and >= 1");
  if (odd(j_pitch) || j_pitch < 4) fail("j_pitch must be even and >= 4");
  if (odd(t_pitch) || t_pitch < 2) fail("t_pitch must be even and >= 2");
  if (t_in < 1 || !odd(t_in)) fail("t_in must be odd and >= 1");
}

std::vector<Segment> Geometry::all_segments() const {
  std::vector<Segment> out;
  for (const Defect& d : defects) out.insert(out.end(), d.segments.begin(), d.segments.end());
  for (const Connection& c : connections) out.insert(out.end(), c.segments.begin(), c.segments.end());
  return out;
}

bool Geometry::empty() const {
  return defects.empty() && connections.empty() && injections.empty() && boxes.empty();
}

std::vector<Segment> cnot_braid_template(int control_row, int target_row, int column, const LayoutParams& p) {
  if (control_row == target_row) throw std::invalid_argument("cnot_braid_template: control equals target");
  if (control_row < 0 || target_row < 0) throw std::invalid_argument("cnot_braid_template: negative row");
  const int a = std::min(control_row, target_row);
  const int b = std::max(control_row, target_row);
  const int ja = p.row_j(a);
  const int jb = p.row_j(b);
  const int t = p.braid_t(column);
  const int lo = p.i_inner - 1;
  const int mid = p.i_inner + 1;
  const int hi = p.i_outer - 1;

  std::vector<std::pair<int, int>> corners;
  if (b == a + 1) {
    corners = {{lo, ja - 1}, {mid, ja - 1}, {mid, jb + 1}, {lo, jb + 1}};
  } else {
    // the notch between the inner strands of a and b keeps the rows in
    // between outside the loop
    corners = {{lo, ja - 1}, {hi, ja - 1}, {hi, jb + 1}, {lo, jb + 1},
               {lo, jb - 1}, {mid, jb - 1}, {mid, ja + 1}, {lo, ja + 1}};
  }
  std::vector<Segment> loop;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const auto [i0, j0] = corners[k];
    const auto [i1, j1] = corners[(k + 1) % corners.size()];
    loop.push_back({DefectKind::Dual, {i0, j0, t}, {i1, j1, t}});
  }
  return loop;
}

Geometry generate_geometry(const MatrixRep& matrix, const LayoutParams& params) {
  params.validate();
  const Circuit c = from_matrix(matrix);
  Geometry g;
  g.params = params;
  g.rows = c.qubit_count();
  g.columns = static_cast<int>(c.gates.size());
  const int t_in = params.t_in;
  const int t_out = params.t_out(g.columns);

  auto add_pin_pair = [&](int j, int t, PinRole role, StateType state, int row) {
    const int first = static_cast<int>(g.pins.size());
    g.pins.push_back({{params.i_inner, j, t}, DefectKind::Primal, role, state, row});
    g.pins.push_back({{params.i_outer, j, t}, DefectKind::Primal, role, state, row});
    return std::array<int, 2>{first, first + 1};
  };

  for (int r = 0; r < g.rows; ++r) {
    const int j = params.row_j(r);
    RowStrands s{r, j, -1, -1};
    for (int i : {params.i_inner, params.i_outer}) {
      Defect d;
      d.kind = DefectKind::Primal;
      d.segments.push_back({DefectKind::Primal, {i, j, t_in}, {i, j, t_out}});
      (i == params.i_inner ? s.inner : s.outer) = static_cast<int>(g.defects.size());
      g.defects.push_back(std::move(d));
    }
    g.strands.push_back(s);

    const InitBasis init = c.inits[static_cast<std::size_t>(r)];
    if (is_injection(init)) {
      const StateType st = init == InitBasis::A ? StateType::A : StateType::Y;
      Injection inj;
      inj.vertex = {params.i_inner + 2, j + 1, t_in - 1};
      inj.state = st;
      inj.pins = add_pin_pair(j, t_in, PinRole::Injection, st, r);
      inj.row = r;
      g.injections.push_back(inj);
    } else {
      IOPort port;
      port.role = PortRole::Input;
      port.basis = init == InitBasis::Zero ? PortBasis::Z : (init == InitBasis::Plus ? PortBasis::X : PortBasis::Open);
      port.tag = io_geometry(port.role, port.basis, DefectKind::Primal);
      port.pins = add_pin_pair(j, t_in, PinRole::Io, StateType::None, r);
      port.qubit_row = r;
      g.ports.push_back(port);
    }

    IOPort out;
    out.role = PortRole::Output;
    const MeasBasis m = c.meas[static_cast<std::size_t>(r)];
    out.basis = m == MeasBasis::Z ? PortBasis::Z : (m == MeasBasis::X ? PortBasis::X : PortBasis::Open);
    out.tag = io_geometry(out.role, out.basis, DefectKind::Primal);
    out.pins = add_pin_pair(j, t_out, PinRole::Io, StateType::None, r);
    out.qubit_row = r;
    g.ports.push_back(out);
  }

  for (int col = 1; col <= g.columns; ++col) {
    const Gate& gate = c.gates[static_cast<std::size_t>(col - 1)];
    Defect loop;
    loop.kind = DefectKind::Dual;
    loop.closed = true;
    loop.segments = cnot_braid_template(gate.control(), gate.target(), col, params);
    g.loops.push_back({col, gate.control(), gate.target(), static_cast<int>(g.defects.size())});
    g.defects.push_back(std::move(loop));
  }
  return g;
}

int linking_number(const std::vector<Segment>& loop, const std::vector<Segment>& strand) {
  if (loop.size() < 4) throw std::invalid_argument("linking_number: loop needs at least four segments");
  const int t = loop.front().a.t;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const Segment& s = loop[k];
    if (s.a.t != t || s.b.t != t) throw std::invalid_argument("linking_number: loop is not planar in t");
    if (!(s.b == loop[(k + 1) % loop.size()].a)) throw std::invalid_argument("linking_number: loop is not closed");
  }
  if (strand.empty()) throw std::invalid_argument("linking_number: empty strand");
  const int pi = strand.front().a.i;
  const int pj = strand.front().a.j;
  int t_lo = strand.front().a.t;
  int t_hi = t_lo;
  for (const Segment& s : strand) {
    if (s.axis() != Axis::T || s.a.i != pi || s.a.j != pj || s.b.i != pi || s.b.j != pj) {
      throw std::invalid_argument("linking_number: strand must run along t");
    }
    t_lo = std::min({t_lo, s.a.t, s.b.t});
    t_hi = std::max({t_hi, s.a.t, s.b.t});
  }
  if (t < t_lo || t > t_hi) return 0;

  // winding number in the (i, j) plane with i as the horizontal axis
  int wn = 0;
  for (const Segment& s : loop) {
    const long x0 = s.a.i, y0 = s.a.j, x1 = s.b.i, y1 = s.b.j;
    const long side = (x1 - x0) * (pj - y0) - (pi - x0) * (y1 - y0);
    if (y0 <= pj) {
      if (y1 > pj && side > 0) ++wn;
    } else if (y1 <= pj && side < 0) {
      --wn;
    }
  }
  return wn;
}

std::vector<Diagnostic> validate_parity(const Geometry& geometry) {
  std::vector<Diagnostic> out;
  auto report = [&](const std::string& rule, const std::string& msg) { out.push_back({rule, -1, -1, msg}); };
  auto check_segment = [&](const Segment& s, const std::string& where) {
    try {
      (void)s.axis();
    } catch (const std::invalid_argument& e) {
      report("shape", where + ": " + e.what());
    }
    for (const Coord& c : {s.a, s.b}) {
      if (s.kind == DefectKind::Primal && !all_odd(c)) {
        report("parity", where + ": primal endpoint " + str(c) + " is not all-odd");
      } else if (s.kind == DefectKind::Dual && !all_even(c)) {
        report("parity", where + ": dual endpoint " + str(c) + " is not all-even");
      }
    }
  };
  for (std::size_t d = 0; d < geometry.defects.size(); ++d) {
    for (const Segment& s : geometry.defects[d].segments) check_segment(s, "defect " + std::to_string(d));
  }
  for (std::size_t k = 0; k < geometry.connections.size(); ++k) {
    for (const Segment& s : geometry.connections[k].segments) check_segment(s, "connection " + std::to_string(k));
  }
  auto check_pin = [&](const Pin& p, const std::string& where) {
    const bool ok = p.kind == DefectKind::Primal ? all_odd(p.coord) : all_even(p.coord);
    if (!ok) report("parity", where + ": pin " + str(p.coord) + " has the wrong parity for a " + std::string(to_string(p.kind)) + " pin");
  };
  for (std::size_t k = 0; k < geometry.pins.size(); ++k) check_pin(geometry.pins[k], "pin " + std::to_string(k));
  for (std::size_t b = 0; b < geometry.boxes.size(); ++b) {
    for (const Pin& p : geometry.boxes[b].pins) check_pin(p, "box " + std::to_string(b));
  }
  for (std::size_t k = 0; k < geometry.injections.size(); ++k) {
    const Coord& v = geometry.injections[k].vertex;
    if (odd_count(v) != 1) {
      report("parity", "injection " + std::to_string(k) + ": vertex " + str(v) + " needs exactly one odd coordinate");
    }
  }
  return out;
}

}  // namespace tqec
