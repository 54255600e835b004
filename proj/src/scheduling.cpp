#include "tqec/scheduling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqec {

bool Region::is_free(const Rect& r) const {
  if (r.i0 < i_min_ || r.i1() > i_max_) return false;
  return std::none_of(occupied_.begin(), occupied_.end(), [&](const Rect& o) { return o.intersects(r); });
}

void Region::occupy(const Rect& r) {
  if (!is_free(r)) throw std::logic_error("Region::occupy: rectangle is not free");
  occupied_.push_back(r);
}

std::optional<int> Region::find_i(int j, int ispan, int jspan, int start_i, int i_dir) const {
  // a lowest (or highest) feasible position always touches start_i or the
  // edge of an occupied rectangle
  std::vector<int> candidates;
  if (i_dir >= 0) {
    candidates.push_back(start_i);
    for (const Rect& o : occupied_) {
      if (o.i1() > start_i) candidates.push_back(o.i1());
    }
    std::sort(candidates.begin(), candidates.end());
  } else {
    candidates.push_back(start_i - ispan);
    for (const Rect& o : occupied_) {
      if (o.i0 - ispan < start_i - ispan) candidates.push_back(o.i0 - ispan);
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
  }
  for (int c : candidates) {
    if (is_free({c, j, ispan, jspan})) return c;
  }
  return std::nullopt;
}

const BoxDim& BoxDims::of(StateType state) const {
  switch (state) {
    case StateType::A: return a;
    case StateType::Y: return y;
    case StateType::None: break;
  }
  throw std::invalid_argument("BoxDims::of: no box for state 'none'");
}

void BoxDims::validate() const {
  for (const BoxDim* d : {&y, &a}) {
    for (int span : {d->ispan, d->jspan, d->tspan}) {
      if (span <= 0 || span % 2 != 0) {
        throw std::invalid_argument("box dims: spans must be positive and even (" + std::string(to_string(d->state)) + ")");
      }
    }
    if (d->ispan < 2) throw std::invalid_argument("box dims: ispan must be at least 2");
  }
  if (a.jspan <= y.jspan) throw std::invalid_argument("box dims: the A box must be wider in j than the Y box");
}

std::vector<PinPair> injection_pairs(const Geometry& geometry) {
  std::vector<PinPair> out;
  for (const Injection& inj : geometry.injections) {
    PinPair p;
    p.state = inj.state;
    p.circuit_pins = inj.pins;
    p.pins = {geometry.pins[static_cast<std::size_t>(inj.pins[0])], geometry.pins[static_cast<std::size_t>(inj.pins[1])]};
    out.push_back(p);
  }
  return out;
}

namespace {

BoxInstance place_box(const BoxDim& dim, int i, int j, int t_face, bool spare) {
  BoxInstance b;
  b.dim = dim;
  b.origin = {i, j, t_face - dim.tspan};
  b.spare = spare;
  for (int k = 0; k < 2; ++k) {
    Pin& p = b.pins[static_cast<std::size_t>(k)];
    p.coord = {k == 0 ? i + 1 : i + dim.ispan - 1, j, t_face + 1};
    p.kind = DefectKind::Primal;
    p.role = PinRole::BoxOutput;
    p.state = dim.state;
  }
  return b;
}

ScheduleKind homogeneous_kind(StateType state) {
  return state == StateType::A ? ScheduleKind::HomogeneousA : ScheduleKind::HomogeneousY;
}

}  // namespace

Schedule schedule_boxes(const std::vector<PinPair>& pairs, const BoxDims& dims, Region& region, const FillConfig& fill) {
  dims.validate();
  Schedule s;
  s.fill = fill;
  bool has_a = false;
  bool has_y = false;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const PinPair& p = pairs[k];
    const BoxDim& dim = dims.of(p.state);
    (p.state == StateType::A ? has_a : has_y) = true;
    const auto i = region.find_i(p.j(), dim.ispan, dim.jspan, fill.start_i, fill.i_dir);
    if (!i) {
      throw PlacementError("no room for the " + std::string(to_string(p.state)) + " box of pin pair " +
                           std::to_string(k) + " at j=" + std::to_string(p.j()));
    }
    region.occupy({*i, p.j(), dim.ispan, dim.jspan});
    s.boxes.push_back(place_box(dim, *i, p.j(), dims.t_face(), p.ghost));
  }
  if (has_a != has_y) s.kind = homogeneous_kind(has_a ? StateType::A : StateType::Y);
  return s;
}

std::vector<PinPair> ghost_pins(int n, StateType state, int sj, const BoxDims& dims, int offj, int j_dir) {
  if (n < 0) throw std::invalid_argument("ghost_pins: negative count");
  std::vector<PinPair> out;
  const int jspan = dims.of(state).jspan;
  for (int idx = 0; idx < n; ++idx) {
    PinPair p;
    p.state = state;
    p.ghost = true;
    const int j = sj + (j_dir < 0 ? -1 : 1) * idx * jspan + offj;
    for (Pin& pin : p.pins) {
      pin.coord = {0, j, 0};
      pin.role = PinRole::Ghost;
      pin.state = state;
    }
    out.push_back(p);
  }
  return out;
}

Schedule homogeneous_schedule(int n, StateType state, int sj, const BoxDims& dims, int offj, Region& region,
                              const FillConfig& fill) {
  Schedule s = schedule_boxes(ghost_pins(n, state, sj, dims, offj, fill.j_dir), dims, region, fill);
  s.kind = homogeneous_kind(state);
  return s;
}

Schedule spare_array(int n, StateType state, int sj, const BoxDims& dims, Region& region, const FillConfig& fill) {
  if (n < 0) throw std::invalid_argument("spare_array: negative count");
  Schedule s;
  s.kind = homogeneous_kind(state);
  s.fill = fill;
  if (n == 0) return s;
  const int per_row = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  for (int placed = 0; placed < n; placed += per_row) {
    Schedule row = homogeneous_schedule(std::min(per_row, n - placed), state, sj, dims, 0, region, fill);
    s.boxes.insert(s.boxes.end(), row.boxes.begin(), row.boxes.end());
  }
  return s;
}

FailureReport simulate_failures(std::vector<BoxInstance>& boxes, const std::vector<PinPair>& pairs,
                                double success_rate, Rng& rng) {
  if (!(success_rate >= 0.0 && success_rate <= 1.0)) {
    throw std::invalid_argument("simulate_failures: success rate must lie in [0, 1]");
  }
  FailureReport report;
  std::vector<int> unserved;
  for (StateType state : {StateType::A, StateType::Y}) {
    TypeFailureStats& stats = state == StateType::A ? report.a : report.y;
    std::vector<int> queue;
    for (bool spare : {false, true}) {
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (boxes[b].dim.state == state && boxes[b].spare == spare) queue.push_back(static_cast<int>(b));
      }
    }
    stats.boxes = static_cast<int>(queue.size());
    std::size_t next = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (pairs[k].state != state || pairs[k].ghost) continue;
      bool served = false;
      while (next < queue.size()) {
        const int b = queue[next++];
        BoxInstance& box = boxes[static_cast<std::size_t>(b)];
        ++stats.tested;
        if (rng.uniform() < success_rate) {
          box.status = BoxStatus::Success;
          report.assignments.push_back({b, static_cast<int>(k)});
          if (box.spare) ++stats.served_by_spare;
          served = true;
          break;
        }
        box.status = BoxStatus::Failed;
        ++(box.spare ? stats.failed_spare : stats.failed_initial);
      }
      if (!served) unserved.push_back(static_cast<int>(k));
    }
  }
  if (!unserved.empty()) {
    std::string list;
    for (int k : unserved) list += (list.empty() ? "" : ", ") + std::to_string(k);
    throw SynthesisError("distillation boxes exhausted; unserved pin pairs: " + list, unserved);
  }
  return report;
}

std::vector<Segment> connect_pins(const Pin& box_pin, const Pin& circuit_pin) {
  if (box_pin.kind != circuit_pin.kind) throw std::invalid_argument("connect_pins: pin kinds differ");
  const DefectKind kind = box_pin.kind;
  Coord ep1 = box_pin.coord;
  ep1.t = circuit_pin.coord.t;
  Coord ep2 = ep1;
  ep2.i = circuit_pin.coord.i;
  std::vector<Segment> out;
  for (const auto& [a, b] : {std::pair{box_pin.coord, ep1}, std::pair{ep1, ep2}, std::pair{ep2, circuit_pin.coord}}) {
    if (!(a == b)) out.push_back({kind, a, b});
  }
  return out;
}

int spare_count(int needed, double success_rate, double epsilon) {
  if (needed < 0) throw std::invalid_argument("spare_count: negative demand");
  if (!(success_rate >= 0.0 && success_rate <= 1.0)) throw std::invalid_argument("spare_count: rate outside [0, 1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("spare_count: epsilon outside (0, 1)");
  if (needed == 0) return 0;
  if (success_rate == 0.0) throw std::invalid_argument("spare_count: no spare count suffices at success rate 0");
  if (success_rate == 1.0) return 0;
  const double lp = std::log(success_rate);
  const double lq = std::log1p(-success_rate);
  constexpr int kLimit = 1 << 20;
  for (int n = 0; n < kLimit; ++n) {
    const int total = needed + n;
    // P[X < needed] summed directly; it is the small side for large n
    double below = 0.0;
    for (int k = 0; k < needed; ++k) {
      const double log_pmf = std::lgamma(total + 1.0) - std::lgamma(k + 1.0) - std::lgamma(total - k + 1.0) +
                             k * lp + (total - k) * lq;
      below += std::exp(log_pmf);
    }
    if (below <= epsilon) return n;
  }
  throw std::invalid_argument("spare_count: no count below the search limit");
}

}  // namespace tqec
