#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tqec/analysis.hpp"
#include "tqec/circuit.hpp"
#include "tqec/decompose.hpp"
#include "tqec/geometry.hpp"
#include "tqec/scheduling.hpp"

namespace tqec {

inline constexpr int kDocumentVersion = 1;

struct SparePolicy {
  std::optional<int> y;  // explicit counts override the binomial policy
  std::optional<int> a;
  double epsilon = 0.01;
};

struct PipelineConfig {
  std::string source;
  double success_rate = 1.0;
  std::uint64_t seed = 0;
  SparePolicy spares;
  LayoutParams layout;
  BoxDims dims;
  FillConfig fill;
  int distance = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Reads the keys success_rate, seed, spares_y, spares_a, spare_epsilon,
/// distance, box_dims, layout and fill; unknown keys are rejected.
void apply_config(PipelineConfig& config, const nlohmann::json& doc);

/// {"Y": {"ispan":..,"jspan":..,"tspan":..}, "A": {...}}; missing entries
/// keep the current values.
BoxDims parse_box_dims(const nlohmann::json& doc, BoxDims base = {});

struct PipelineResult {
  Circuit circuit;
  Circuit decomposed;
  IcmCircuit icm;
  Geometry geometry;
  std::vector<PinPair> pairs;
  int spares_y = 0;
  int spares_a = 0;
  FailureReport failures;
  std::optional<DistanceReport> distance;
  std::optional<VolumeReport> volume;
};

/// parse, decompose, ICM, geometry, schedule, failure simulation, routing
/// and analysis. Errors leave with the failing stage recorded on them.
PipelineResult run_pipeline(const PipelineConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Hash of the source text and every configuration value.
std::string config_hash(const PipelineConfig& config);

nlohmann::json to_document(const PipelineResult& result, const PipelineConfig& config);

enum class ExportFormat { Json, Obj, Csv };

/// Throws std::invalid_argument for unknown names.
ExportFormat parse_format(std::string_view name);

std::string export_document(const nlohmann::json& doc, ExportFormat format);

/// Every segment endpoint pair of a document, defects first.
struct DocSegment {
  std::string kind;
  Coord a;
  Coord b;
};
std::vector<DocSegment> document_segments(const nlohmann::json& doc);

struct VerifyEntry {
  std::string subject;  // "template:t", "decomposition:toffoli", ...
  int gate = -1;        // gate index in the circuit the subject came from
  double infidelity = 0.0;
  bool pass = true;
};

struct VerifyReport {
  double tolerance = 1e-10;
  std::vector<VerifyEntry> entries;

  bool ok() const;
};

/// Checks each composite gate of the source against its decomposition and
/// each template instance of the ICM form against its rotation.
VerifyReport verify(const PipelineConfig& config, int trials = 8);

nlohmann::json to_json(const VerifyReport& report);

}  // namespace tqec
