#include "tqec/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tqec/oracle_sim.hpp"

namespace tqec {

using nlohmann::json;

void PipelineConfig::validate() const {
  if (!(success_rate >= 0.0 && success_rate <= 1.0)) throw std::invalid_argument("success rate must lie in [0, 1]");
  if (spares.y && *spares.y < 0) throw std::invalid_argument("explicit Y spare count must be >= 0");
  if (spares.a && *spares.a < 0) throw std::invalid_argument("explicit A spare count must be >= 0");
  if (!(spares.epsilon > 0.0 && spares.epsilon < 1.0)) throw std::invalid_argument("spare epsilon must lie in (0, 1)");
  if (distance < 1) throw std::invalid_argument("distance must be >= 1");
  if (fill.start_i < 0) throw std::invalid_argument("fill start_i must be >= 0");
  if (std::abs(fill.j_dir) != 1 || std::abs(fill.i_dir) != 1) throw std::invalid_argument("fill directions must be +1 or -1");
  layout.validate();
  dims.validate();
}

namespace {

template <class T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

void read_dim(const json& doc, BoxDim& dim) {
  if (!doc.is_object()) throw std::invalid_argument("box dims entry must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (k == "ispan") {
      dim.ispan = get_as<int>(doc, "ispan");
    } else if (k == "jspan") {
      dim.jspan = get_as<int>(doc, "jspan");
    } else if (k == "tspan") {
      dim.tspan = get_as<int>(doc, "tspan");
    } else {
      throw std::invalid_argument("unknown box dims key '" + k + "'");
    }
  }
}

}  // namespace

BoxDims parse_box_dims(const json& doc, BoxDims base) {
  if (!doc.is_object()) throw std::invalid_argument("box dims must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (k == "Y" || k == "y") {
      read_dim(v, base.y);
    } else if (k == "A" || k == "a") {
      read_dim(v, base.a);
    } else {
      throw std::invalid_argument("unknown box type '" + k + "' (expected Y or A)");
    }
  }
  return base;
}

void apply_config(PipelineConfig& config, const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (k == "success_rate") {
      config.success_rate = get_as<double>(doc, "success_rate");
    } else if (k == "seed") {
      config.seed = get_as<std::uint64_t>(doc, "seed");
    } else if (k == "spares_y") {
      config.spares.y = get_as<int>(doc, "spares_y");
    } else if (k == "spares_a") {
      config.spares.a = get_as<int>(doc, "spares_a");
    } else if (k == "spare_epsilon") {
      config.spares.epsilon = get_as<double>(doc, "spare_epsilon");
    } else if (k == "distance") {
      config.distance = get_as<int>(doc, "distance");
    } else if (k == "box_dims") {
      config.dims = parse_box_dims(v, config.dims);
    } else if (k == "layout") {
      if (!v.is_object()) throw std::invalid_argument("layout must be an object");
      std::map<std::string, int*> fields = {{"i_inner", &config.layout.i_inner}, {"i_outer", &config.layout.i_outer},
                                            {"j0", &config.layout.j0},           {"j_pitch", &config.layout.j_pitch},
                                            {"t_pitch", &config.layout.t_pitch}};
      for (const auto& [lk, lv] : v.items()) {
        auto it = fields.find(lk);
        if (it == fields.end()) throw std::invalid_argument("unknown layout key '" + lk + "'");
        *it->second = get_as<int>(v, lk.c_str());
      }
    } else if (k == "fill") {
      if (!v.is_object()) throw std::invalid_argument("fill must be an object");
      std::map<std::string, int*> fields = {
          {"start_i", &config.fill.start_i}, {"j_dir", &config.fill.j_dir}, {"i_dir", &config.fill.i_dir}};
      for (const auto& [fk, fv] : v.items()) {
        auto it = fields.find(fk);
        if (it == fields.end()) throw std::invalid_argument("unknown fill key '" + fk + "'");
        *it->second = get_as<int>(v, fk.c_str());
      }
    } else {
      throw std::invalid_argument("unknown config key '" + k + "'");
    }
  }
}

namespace {

template <class F>
auto run_stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  } catch (const std::exception& e) {
    throw Error(e.what(), name);
  }
}

int per_row(int n) { return n == 0 ? 0 : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))); }

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] {
    config.validate();
    return 0;
  });
  PipelineResult res;
  res.circuit = run_stage("parse", [&] { return parse_circuit(config.source); });
  res.decomposed = run_stage("decompose", [&] { return decompose_gates(res.circuit); });
  res.icm = run_stage("icm", [&] { return to_icm(res.decomposed); });

  int need_a = 0;
  int need_y = 0;
  for (const TemplateInstance& inst : res.icm.instances) {
    for (const auto& [row, state] : inst.injections()) ++(state == InitBasis::A ? need_a : need_y);
  }
  run_stage("schedule", [&] {
    auto policy = [&](std::optional<int> fixed, int needed) {
      if (fixed) return *fixed;
      if (config.success_rate == 0.0) return 0;  // no count helps; the failure simulation reports it
      return spare_count(needed, config.success_rate, config.spares.epsilon);
    };
    res.spares_y = policy(config.spares.y, need_y);
    res.spares_a = policy(config.spares.a, need_a);
    return 0;
  });

  // Y spares take the low-j side, so the circuit starts past their array
  const int sj_y = config.layout.j0;
  LayoutParams layout = config.layout;
  layout.j0 = sj_y + per_row(res.spares_y) * config.dims.y.jspan;
  layout.t_in = config.dims.t_face() + 3;

  res.geometry = run_stage("geometry", [&] { return generate_geometry(to_matrix(res.icm.circuit), layout); });
  Geometry& g = res.geometry;

  std::vector<BoxInstance> boxes = run_stage("schedule", [&] {
    Region region;
    res.pairs = injection_pairs(g);
    std::vector<BoxInstance> out = schedule_boxes(res.pairs, config.dims, region, config.fill).boxes;
    const Schedule ys = spare_array(res.spares_y, StateType::Y, sj_y, config.dims, region, config.fill);
    int top = g.rows > 0 ? layout.row_j(g.rows - 1) + 1 : layout.j0;
    for (const Rect& r : region.occupied()) top = std::max(top, r.j1());
    const Schedule as = spare_array(res.spares_a, StateType::A, top % 2 == 0 ? top + 1 : top, config.dims, region,
                                    config.fill);
    out.insert(out.end(), ys.boxes.begin(), ys.boxes.end());
    out.insert(out.end(), as.boxes.begin(), as.boxes.end());
    return out;
  });

  run_stage("fail-sim", [&] {
    Rng rng(config.seed);
    res.failures = simulate_failures(boxes, res.pairs, config.success_rate, rng);
    return 0;
  });
  g.boxes = std::move(boxes);

  run_stage("connect", [&] {
    for (const Assignment& a : res.failures.assignments) {
      const BoxInstance& box = g.boxes[static_cast<std::size_t>(a.box)];
      const PinPair& pair = res.pairs[static_cast<std::size_t>(a.pair)];
      for (int m = 0; m < 2; ++m) {
        Connection c;
        c.box = a.box;
        c.box_pin = m;
        c.circuit_pin = pair.circuit_pins[static_cast<std::size_t>(m)];
        c.segments = connect_pins(box.pins[static_cast<std::size_t>(m)], g.pins[static_cast<std::size_t>(c.circuit_pin)]);
        g.connections.push_back(std::move(c));
      }
    }
    return 0;
  });

  run_stage("analyse", [&] {
    if (!g.defects.empty()) res.distance = min_code_distance(g, config.distance);
    if (!g.empty()) res.volume = volume_units(g, config.distance);
    return 0;
  });
  return res;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

json coord(const Coord& c) { return json::array({c.i, c.j, c.t}); }

json config_json(const PipelineConfig& c) {
  json j;
  j["success_rate"] = c.success_rate;
  j["seed"] = c.seed;
  j["spares"] = {{"policy", c.spares.y || c.spares.a ? "explicit" : "binomial"}, {"epsilon", c.spares.epsilon}};
  if (c.spares.y) j["spares"]["y"] = *c.spares.y;
  if (c.spares.a) j["spares"]["a"] = *c.spares.a;
  j["distance"] = c.distance;
  j["layout"] = {{"i_inner", c.layout.i_inner}, {"i_outer", c.layout.i_outer}, {"j0", c.layout.j0},
                 {"j_pitch", c.layout.j_pitch}, {"t_pitch", c.layout.t_pitch}};
  auto dim = [](const BoxDim& d) { return json{{"ispan", d.ispan}, {"jspan", d.jspan}, {"tspan", d.tspan}}; };
  j["box_dims"] = {{"Y", dim(c.dims.y)}, {"A", dim(c.dims.a)}};
  j["fill"] = {{"start_i", c.fill.start_i}, {"j_dir", c.fill.j_dir}, {"i_dir", c.fill.i_dir}};
  return j;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json stats_json(const TypeFailureStats& s) {
  return {{"boxes", s.boxes},
          {"tested", s.tested},
          {"failed_initial", s.failed_initial},
          {"failed_spare", s.failed_spare},
          {"served_by_spare", s.served_by_spare}};
}

}  // namespace

std::string config_hash(const PipelineConfig& config) {
  json j = config_json(config);
  j["source"] = config.source;
  return "fnv1a64:" + hex64(fnv1a(j.dump()));
}

json to_document(const PipelineResult& r, const PipelineConfig& config) {
  const Geometry& g = r.geometry;
  json doc;
  doc["format"] = "tqec-geometry";
  doc["version"] = kDocumentVersion;

  json meta = config_json(config);
  meta["rng"] = Rng::kId;
  meta["config_hash"] = config_hash(config);
  doc["metadata"] = std::move(meta);

  doc["circuit"] = {{"qubits", r.circuit.qubit_count()},
                    {"gates", r.circuit.gates.size()},
                    {"decomposed_gates", r.decomposed.gates.size()},
                    {"icm_rows", r.icm.circuit.qubit_count()},
                    {"cnots", r.icm.circuit.cnot_count()},
                    {"input_rows", r.icm.input_rows},
                    {"output_rows", r.icm.output_rows}};

  json templates = json::array();
  for (const TemplateInstance& inst : r.icm.instances) {
    json injections = json::array();
    for (const auto& [row, state] : inst.injections()) injections.push_back({{"row", row}, {"state", to_string(state)}});
    templates.push_back({{"gate", to_string(inst.gate)},
                         {"source_gate", inst.source_gate},
                         {"logical_qubit", inst.logical_qubit},
                         {"rows", inst.rows},
                         {"first_cnot", inst.first_cnot},
                         {"cnot_count", inst.cnot_count},
                         {"injections", std::move(injections)}});
  }
  doc["templates"] = std::move(templates);

  json segments = json::array();
  json defects = json::array();
  for (std::size_t d = 0; d < g.defects.size(); ++d) {
    const Defect& def = g.defects[d];
    defects.push_back({{"id", d}, {"kind", to_string(def.kind)}, {"closed", def.closed}, {"segments", def.segments.size()}});
    for (const Segment& s : def.segments) {
      segments.push_back({{"defect", d}, {"kind", to_string(s.kind)}, {"a", coord(s.a)}, {"b", coord(s.b)}});
    }
  }
  doc["segments"] = std::move(segments);
  doc["defects"] = std::move(defects);

  auto pin_id = [](int k) { return "p" + std::to_string(k); };
  json pins = json::array();
  for (std::size_t k = 0; k < g.pins.size(); ++k) {
    const Pin& p = g.pins[k];
    pins.push_back({{"id", pin_id(static_cast<int>(k))},
                    {"coord", coord(p.coord)},
                    {"kind", to_string(p.kind)},
                    {"role", to_string(p.role)},
                    {"state", to_string(p.state)},
                    {"row", p.row}});
  }
  doc["pins"] = std::move(pins);

  json injections = json::array();
  for (const Injection& inj : g.injections) {
    injections.push_back({{"vertex", coord(inj.vertex)},
                          {"state", to_string(inj.state)},
                          {"pins", {pin_id(inj.pins[0]), pin_id(inj.pins[1])}},
                          {"row", inj.row}});
  }
  doc["injections"] = std::move(injections);

  json ports = json::array();
  for (const IOPort& p : g.ports) {
    static constexpr const char* kBasis[] = {"Z", "X", "open", "injection_A", "injection_Y"};
    ports.push_back({{"role", p.role == PortRole::Input ? "input" : "output"},
                     {"basis", kBasis[static_cast<int>(p.basis)]},
                     {"template", to_string(p.tag)},
                     {"pins", {pin_id(p.pins[0]), pin_id(p.pins[1])}},
                     {"row", p.qubit_row}});
  }
  doc["ioports"] = std::move(ports);

  auto box_pin_id = [](int b, int m) { return "b" + std::to_string(b) + "." + std::to_string(m); };
  json boxes = json::array();
  for (std::size_t b = 0; b < g.boxes.size(); ++b) {
    const BoxInstance& box = g.boxes[b];
    json bp = json::array();
    for (int m = 0; m < 2; ++m) {
      bp.push_back({{"id", box_pin_id(static_cast<int>(b), m)}, {"coord", coord(box.pins[static_cast<std::size_t>(m)].coord)}});
    }
    boxes.push_back({{"id", "b" + std::to_string(b)},
                     {"state", to_string(box.dim.state)},
                     {"origin", coord(box.origin)},
                     {"span", {box.dim.ispan, box.dim.jspan, box.dim.tspan}},
                     {"status", to_string(box.status)},
                     {"spare", box.spare},
                     {"pins", std::move(bp)}});
  }
  doc["boxes"] = std::move(boxes);

  json connections = json::array();
  for (const Connection& c : g.connections) {
    json segs = json::array();
    for (const Segment& s : c.segments) segs.push_back({{"kind", to_string(s.kind)}, {"a", coord(s.a)}, {"b", coord(s.b)}});
    connections.push_back({{"box_pin", box_pin_id(c.box, c.box_pin)},
                           {"circuit_pin", pin_id(c.circuit_pin)},
                           {"segments", std::move(segs)}});
  }
  doc["connections"] = std::move(connections);

  json reports;
  if (r.distance) {
    const DistanceReport& d = *r.distance;
    reports["distance"] = {{"defect_diameter", d.defect_diameter},
                           {"min_separation", d.min_separation ? json(*d.min_separation) : json(nullptr)},
                           {"ring_length", d.ring_length},
                           {"chain_length", d.chain_length ? json(*d.chain_length) : json(nullptr)},
                           {"code_distance", d.code_distance}};
  } else {
    reports["distance"] = nullptr;
  }
  if (r.volume) {
    const BoundingBox bb = bounding_box(g);
    reports["bounding_box"] = {{"min", coord(bb.min)}, {"max", coord(bb.max)}, {"extent", coord(bb.extent())}};
    reports["volume"] = {{"cube_side", r.volume->cube_side},
                         {"bbox_cubes", coord(r.volume->bbox_cubes)},
                         {"units", coord(r.volume->units)},
                         {"volume_units", r.volume->volume_units}};
  } else {
    reports["bounding_box"] = nullptr;
    reports["volume"] = nullptr;
  }
  int initial_a = 0, initial_y = 0;
  for (const BoxInstance& b : g.boxes) {
    if (!b.spare) ++(b.dim.state == StateType::A ? initial_a : initial_y);
  }
  reports["schedule"] = {{"boxes", g.boxes.size()},
                         {"initial", {{"A", initial_a}, {"Y", initial_y}}},
                         {"spares", {{"A", r.spares_a}, {"Y", r.spares_y}}},
                         {"assignments", r.failures.assignments.size()},
                         {"A", stats_json(r.failures.a)},
                         {"Y", stats_json(r.failures.y)}};
  doc["reports"] = std::move(reports);
  return doc;
}

ExportFormat parse_format(std::string_view name) {
  if (name == "json") return ExportFormat::Json;
  if (name == "obj") return ExportFormat::Obj;
  if (name == "csv") return ExportFormat::Csv;
  throw std::invalid_argument("unknown export format '" + std::string(name) + "'");
}

namespace {

Coord coord_of(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()}; }

/// Prints twice-scaled integers as decimals with at most one .5 digit.
std::string half(int twice) {
  const int whole = twice / 2;
  if (twice % 2 == 0) return std::to_string(whole);
  if (twice < 0) return (whole == 0 ? "-0" : std::to_string(whole)) + ".5";
  return std::to_string(whole) + ".5";
}

void cuboid(std::ostringstream& out, int& base, const std::string& name, Coord lo2, Coord hi2) {
  out << "o " << name << '\n';
  for (int k = 0; k < 8; ++k) {
    const int i = k & 1 ? hi2.i : lo2.i;
    const int j = k & 2 ? hi2.j : lo2.j;
    const int t = k & 4 ? hi2.t : lo2.t;
    out << "v " << half(i) << ' ' << half(j) << ' ' << half(t) << '\n';
  }
  static constexpr int kFaces[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& f : kFaces) {
    out << 'f';
    for (int v : f) out << ' ' << base + v;
    out << '\n';
  }
  base += 8;
}

}  // namespace

std::vector<DocSegment> document_segments(const json& doc) {
  std::vector<DocSegment> out;
  for (const json& s : doc.at("segments")) {
    out.push_back({s.at("kind").get<std::string>(), coord_of(s.at("a")), coord_of(s.at("b"))});
  }
  for (const json& c : doc.at("connections")) {
    for (const json& s : c.at("segments")) {
      out.push_back({s.at("kind").get<std::string>(), coord_of(s.at("a")), coord_of(s.at("b"))});
    }
  }
  return out;
}

std::string export_document(const json& doc, ExportFormat format) {
  switch (format) {
    case ExportFormat::Json:
      return doc.dump(2) + "\n";
    case ExportFormat::Csv: {
      std::ostringstream out;
      out << "kind,i1,j1,t1,i2,j2,t2\n";
      for (const DocSegment& s : document_segments(doc)) {
        out << s.kind << ',' << s.a.i << ',' << s.a.j << ',' << s.a.t << ',' << s.b.i << ',' << s.b.j << ',' << s.b.t
            << '\n';
      }
      return out.str();
    }
    case ExportFormat::Obj: {
      std::ostringstream out;
      out << "# tqec geometry, one cuboid per segment and box\n";
      int base = 1;
      int k = 0;
      for (const DocSegment& s : document_segments(doc)) {
        // segment cells widened by half a cell on every side
        const Coord lo2{2 * std::min(s.a.i, s.b.i) - 1, 2 * std::min(s.a.j, s.b.j) - 1, 2 * std::min(s.a.t, s.b.t) - 1};
        const Coord hi2{2 * std::max(s.a.i, s.b.i) + 1, 2 * std::max(s.a.j, s.b.j) + 1, 2 * std::max(s.a.t, s.b.t) + 1};
        cuboid(out, base, s.kind + "_segment_" + std::to_string(k++), lo2, hi2);
      }
      for (const json& b : doc.at("boxes")) {
        const Coord o = coord_of(b.at("origin"));
        const Coord span = coord_of(b.at("span"));
        cuboid(out, base, b.at("state").get<std::string>() + "_box_" + b.at("id").get<std::string>(),
               {2 * o.i, 2 * o.j, 2 * o.t}, {2 * (o.i + span.i), 2 * (o.j + span.j), 2 * (o.t + span.t)});
      }
      return out.str();
    }
  }
  throw std::invalid_argument("unknown export format");
}

bool VerifyReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.pass; });
}

VerifyReport verify(const PipelineConfig& config, int trials) {
  VerifyReport report;
  const Circuit circuit = run_stage("parse", [&] { return parse_circuit(config.source); });
  run_stage("verify", [&] {
    std::map<GateKind, double> decomposition_cache;
    for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
      const GateKind kind = circuit.gates[gi].kind;
      if (kind != GateKind::H && kind != GateKind::Toffoli) continue;
      auto it = decomposition_cache.find(kind);
      if (it == decomposition_cache.end()) {
        Circuit local(kind == GateKind::H ? 1 : 3);
        local.gates.push_back(kind == GateKind::H ? Gate::single(kind, 0) : Gate::toffoli(0, 1, 2));
        it = decomposition_cache.emplace(kind, check_equivalence(local, decompose_gates(local), trials, config.seed)).first;
      }
      report.entries.push_back({"decomposition:" + std::string(to_string(kind)), static_cast<int>(gi), it->second,
                                it->second <= report.tolerance});
    }
    const Circuit decomposed = decompose_gates(circuit);
    std::map<GateKind, double> template_cache;
    for (std::size_t gi = 0; gi < decomposed.gates.size(); ++gi) {
      const GateKind kind = decomposed.gates[gi].kind;
      if (kind == GateKind::Cnot) continue;
      auto it = template_cache.find(kind);
      if (it == template_cache.end()) {
        Circuit local(1);
        local.gates.push_back(Gate::single(kind, 0));
        it = template_cache.emplace(kind, check_equivalence(local, to_icm(local), trials, config.seed)).first;
      }
      report.entries.push_back({"template:" + std::string(to_string(kind)), static_cast<int>(gi), it->second,
                                it->second <= report.tolerance});
    }
    return 0;
  });
  return report;
}

json to_json(const VerifyReport& report) {
  json entries = json::array();
  for (const VerifyEntry& e : report.entries) {
    entries.push_back({{"subject", e.subject}, {"gate", e.gate}, {"infidelity", e.infidelity}, {"pass", e.pass}});
  }
  return {{"tolerance", report.tolerance}, {"ok", report.ok()}, {"entries", std::move(entries)}};
}

}  // namespace tqec
