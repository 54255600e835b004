#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "tqec/geometry.hpp"

namespace tqec {

/// Distillation ran out of boxes before every circuit pin pair was served.
class SynthesisError : public Error {
 public:
  SynthesisError(const std::string& what, std::vector<int> unserved)
      : Error(what), unserved_(std::move(unserved)) {}
  /// Indices of the pin pairs left without a box.
  const std::vector<int>& unserved() const noexcept { return unserved_; }

 private:
  std::vector<int> unserved_;
};

/// A box could not be placed inside the region bounds.
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// Box footprint in the (j, i) plane, half-open on both axes.
struct Rect {
  int i0 = 0;
  int j0 = 0;
  int ispan = 0;
  int jspan = 0;

  int i1() const { return i0 + ispan; }
  int j1() const { return j0 + jspan; }
  bool intersects(const Rect& o) const { return i0 < o.i1() && o.i0 < i1() && j0 < o.j1() && o.j0 < j1(); }
};

/// Free-space bookkeeping for the layer that holds the boxes.
class Region {
 public:
  explicit Region(int i_min = 0, int i_max = std::numeric_limits<int>::max() / 2) : i_min_(i_min), i_max_(i_max) {}

  bool is_free(const Rect& r) const;
  /// Marks r as used. Throws std::logic_error if it overlaps a used rect.
  void occupy(const Rect& r);
  /// First i (lowest for i_dir = +1, highest for -1) at which a box of the
  /// given spans fits at j, starting the search from start_i.
  std::optional<int> find_i(int j, int ispan, int jspan, int start_i, int i_dir) const;

  const std::vector<Rect>& occupied() const { return occupied_; }
  int i_min() const { return i_min_; }
  int i_max() const { return i_max_; }

 private:
  int i_min_;
  int i_max_;
  std::vector<Rect> occupied_;
};

struct BoxDims {
  BoxDim y{StateType::Y, 4, 4, 8};
  BoxDim a{StateType::A, 8, 8, 12};

  const BoxDim& of(StateType state) const;
  /// t of the face all boxes share toward the circuit.
  int t_face() const { return std::max(y.tspan, a.tspan); }
  /// Throws std::invalid_argument for odd or non-positive spans, or when
  /// the A box is not wider in j than the Y box.
  void validate() const;
};

/// Two pins of an injection (or a ghost) that one box serves.
struct PinPair {
  StateType state = StateType::Y;
  std::array<Pin, 2> pins;
  std::array<int, 2> circuit_pins{-1, -1};  // Geometry::pins indices, -1 for ghosts
  bool ghost = false;

  int j() const { return pins[0].coord.j; }
};

struct FillConfig {
  int start_i = 0;
  int j_dir = 1;  // +1 low-to-high, -1 high-to-low
  int i_dir = 1;
};

enum class ScheduleKind { Heterogeneous, HomogeneousA, HomogeneousY };

struct Schedule {
  ScheduleKind kind = ScheduleKind::Heterogeneous;
  FillConfig fill;
  std::vector<BoxInstance> boxes;
};

/// The pin pairs of every injection in a geometry, in injection order.
std::vector<PinPair> injection_pairs(const Geometry& geometry);

/// Places one box per pair at the pair's j and the first free i. Boxes
/// whose j-intervals overlap end up stacked along i.
Schedule schedule_boxes(const std::vector<PinPair>& pairs, const BoxDims& dims, Region& region,
                        const FillConfig& fill = {});

/// n ghost pairs at j = sj + j_dir * (idx * jspan) + offj.
std::vector<PinPair> ghost_pins(int n, StateType state, int sj, const BoxDims& dims, int offj, int j_dir = 1);

/// One row of n spare boxes. Calling it again with the same coordinates on
/// the same region adds the next row of an array.
Schedule homogeneous_schedule(int n, StateType state, int sj, const BoxDims& dims, int offj, Region& region,
                              const FillConfig& fill = {});

/// Spares arranged as an array with ceil(sqrt(n)) boxes per row.
Schedule spare_array(int n, StateType state, int sj, const BoxDims& dims, Region& region, const FillConfig& fill = {});

/// Seeded generator for failure draws. Uses mt19937_64 and maps the top
/// 53 bits of each output to [0, 1).
class Rng {
 public:
  static constexpr std::string_view kId = "mt19937_64/u53";
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

struct Assignment {
  int box = -1;   // index into the box list passed to simulate_failures
  int pair = -1;  // index into the circuit pair list
};

struct TypeFailureStats {
  int boxes = 0;
  int tested = 0;
  int failed_initial = 0;
  int failed_spare = 0;
  int served_by_spare = 0;
};

struct FailureReport {
  std::vector<Assignment> assignments;
  TypeFailureStats a;
  TypeFailureStats y;
};

/// For each circuit pair, pops boxes of its type until one succeeds
/// (draw < success_rate). Non-spare boxes are queued before spares and the
/// A queue is processed before the Y queue. Updates box statuses; boxes
/// never popped stay pending. Throws SynthesisError when a queue runs dry.
FailureReport simulate_failures(std::vector<BoxInstance>& boxes, const std::vector<PinPair>& pairs,
                                double success_rate, Rng& rng);

/// Up to three axis-aligned segments from the box pin to the circuit pin:
/// along t, then i, then j. Zero-length legs are skipped.
std::vector<Segment> connect_pins(const Pin& box_pin, const Pin& circuit_pin);

/// Smallest n with P[Binomial(needed + n, success_rate) >= needed] >= 1 - epsilon.
int spare_count(int needed, double success_rate, double epsilon);

}  // namespace tqec
