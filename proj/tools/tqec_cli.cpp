// Command-line front end: synth, verify, metrics and slice.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqec/pipeline.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitSynthesis = 3;
constexpr int kExitVerify = 4;

struct Options {
  std::string input;
  std::string config_file;
  std::string box_dims_file;
  std::string out;
  std::vector<std::string> formats;
  std::optional<double> success_rate;
  std::optional<std::uint64_t> seed;
  std::optional<int> spares_y;
  std::optional<int> spares_a;
  std::optional<double> spare_epsilon;
  std::optional<int> distance;
  int trials = 8;
};

std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << bytes;
}

/// Defaults, then TQEC_SEED, then the config file, then explicit flags.
tqec::PipelineConfig build_config(const Options& o) {
  tqec::PipelineConfig c;
  if (const char* env = std::getenv("TQEC_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("TQEC_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (!o.config_file.empty()) tqec::apply_config(c, read_json(o.config_file));
  if (!o.box_dims_file.empty()) c.dims = tqec::parse_box_dims(read_json(o.box_dims_file), c.dims);
  if (o.success_rate) c.success_rate = *o.success_rate;
  if (o.seed) c.seed = *o.seed;
  if (o.spares_y) c.spares.y = *o.spares_y;
  if (o.spares_a) c.spares.a = *o.spares_a;
  if (o.spare_epsilon) c.spares.epsilon = *o.spare_epsilon;
  if (o.distance) c.distance = *o.distance;
  c.source = read_file(o.input);
  return c;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "Circuit file ('-' for stdin)")->required();
  cmd->add_option("--config", o.config_file, "JSON config file; flags override its values");
  cmd->add_option("--success-rate", o.success_rate, "Distillation success rate in [0, 1]");
  cmd->add_option("--seed", o.seed, "Seed for failure draws (falls back to TQEC_SEED)");
  cmd->add_option("--spares-y", o.spares_y, "Explicit number of spare Y boxes");
  cmd->add_option("--spares-a", o.spares_a, "Explicit number of spare A boxes");
  cmd->add_option("--spare-epsilon", o.spare_epsilon, "Shortfall probability for the binomial spare policy");
  cmd->add_option("--distance", o.distance, "Cube side d used by the reports");
  cmd->add_option("--box-dims", o.box_dims_file, "JSON file with Y and A box spans");
  cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
}

int run_synth(const Options& o) {
  const tqec::PipelineConfig config = build_config(o);
  std::vector<tqec::ExportFormat> formats;
  for (const std::string& f : o.formats) formats.push_back(tqec::parse_format(f));
  if (formats.empty()) formats.push_back(tqec::ExportFormat::Json);
  if (formats.size() > 1 && (o.out.empty() || o.out == "-")) {
    throw std::runtime_error("several --format values need --out as a file stem");
  }
  const json doc = tqec::to_document(tqec::run_pipeline(config), config);
  if (formats.size() == 1) {
    write_output(o.out, tqec::export_document(doc, formats.front()));
    return kExitOk;
  }
  for (std::size_t k = 0; k < formats.size(); ++k) {
    write_output(o.out + "." + o.formats[k], tqec::export_document(doc, formats[k]));
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  const tqec::PipelineConfig config = build_config(o);
  const tqec::VerifyReport report = tqec::verify(config, o.trials);
  write_output(o.out, tqec::to_json(report).dump(2) + "\n");
  return report.ok() ? kExitOk : kExitVerify;
}

int run_metrics(const Options& o) {
  const tqec::PipelineConfig config = build_config(o);
  const json doc = tqec::to_document(tqec::run_pipeline(config), config);
  json out = doc.at("reports");
  out["circuit"] = doc.at("circuit");
  write_output(o.out, out.dump(2) + "\n");
  return kExitOk;
}

int run_slice(const Options& o) {
  const tqec::PipelineConfig config = build_config(o);
  const tqec::PipelineResult r = tqec::run_pipeline(config);
  const auto layers = tqec::slice_layers(r.geometry, tqec::default_extent(r.geometry));
  const auto stream = tqec::execution_schedule(layers);
  std::ostringstream out;
  tqec::write_instruction_stream(out, layers, stream);
  write_output(o.out, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesises TQEC geometries from Clifford+T circuits"};
  app.require_subcommand(1);
  Options o;

  CLI::App* synth = app.add_subcommand("synth", "Run the pipeline and export the geometry");
  add_common(synth, o);
  synth->add_option("--format", o.formats, "json, obj or csv; repeat for several")
      ->check(CLI::IsMember({"json", "obj", "csv"}));
  CLI::App* verify = app.add_subcommand("verify", "Check decompositions and templates with the simulator");
  add_common(verify, o);
  verify->add_option("--trials", o.trials, "Random input states per check")->check(CLI::PositiveNumber);
  CLI::App* metrics = app.add_subcommand("metrics", "Print distance, volume and schedule reports");
  add_common(metrics, o);
  CLI::App* slice = app.add_subcommand("slice", "Emit the layer-by-layer instruction stream as JSON lines");
  add_common(slice, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitOther;
  }

  try {
    if (*synth) return run_synth(o);
    if (*verify) return run_verify(o);
    if (*metrics) return run_metrics(o);
    return run_slice(o);
  } catch (const tqec::ParseError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return kExitParse;
  } catch (const tqec::SynthesisError& e) {
    json report = {{"error", e.what()}, {"stage", e.stage()}, {"unserved_pairs", e.unserved()}};
    std::cerr << report.dump(2) << '\n';
    return kExitSynthesis;
  } catch (const tqec::Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
