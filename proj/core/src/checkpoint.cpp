#include "seqpareto/checkpoint.hpp"

#include <fstream>

#include "seqpareto/error.hpp"

namespace seqpareto {

nlohmann::json checkpoint(const CampaignState& state) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& p : state.hv_trace) {
    trace.push_back({{"iteration", p.iteration}, {"hv", p.hv}, {"phv", p.phv}, {"points_used", p.points_used}});
  }
  nlohmann::json kernels = nlohmann::json::array();
  for (const auto& k : state.kernel_params) {
    kernels.push_back({{"length_scale", k.length_scale},
                       {"signal_variance", k.signal_variance},
                       {"noise_variance", k.noise_variance}});
  }
  return nlohmann::json{{"schema_version", kCheckpointSchemaVersion},
                        {"kind", "seqpareto-checkpoint"},
                        {"config", state.config},
                        {"pool_digest", state.pool_digest},
                        {"seed", state.seed},
                        {"iteration", state.iteration},
                        {"consumed", state.consumed},
                        {"consumed_objectives", state.consumed_objectives},
                        {"front_indices", state.front.indices},
                        {"hv_trace", trace},
                        {"kernel_params", kernels}};
}

CampaignState restore_state(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw MigrationError("not a checkpoint document");
  }
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kCheckpointSchemaVersion) {
    throw MigrationError("unsupported checkpoint schema version " + doc["schema_version"].dump());
  }
  try {
    if (doc.at("kind").get<std::string>() != "seqpareto-checkpoint") throw MigrationError("wrong document kind");
    CampaignState s;
    s.config = doc.at("config").get<RunConfig>();
    doc.at("pool_digest").get_to(s.pool_digest);
    doc.at("seed").get_to(s.seed);
    doc.at("iteration").get_to(s.iteration);
    doc.at("consumed").get_to(s.consumed);
    doc.at("consumed_objectives").get_to(s.consumed_objectives);
    doc.at("front_indices").get_to(s.front.indices);
    for (const auto& p : doc.at("hv_trace")) {
      s.hv_trace.push_back({p.at("iteration").get<std::size_t>(), p.at("hv").get<double>(),
                            p.at("phv").get<double>(), p.at("points_used").get<std::size_t>()});
    }
    for (const auto& k : doc.at("kernel_params")) {
      s.kernel_params.push_back({k.at("length_scale").get<double>(), k.at("signal_variance").get<double>(),
                                 k.at("noise_variance").get<double>()});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw MigrationError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw MigrationError(std::string("malformed checkpoint: ") + e.what());
  }
}

Campaign restore(const nlohmann::json& document, const CandidatePool& source) {
  return Campaign(source, restore_state(document));
}

void save_checkpoint(const CampaignState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out << checkpoint(state).dump(2) << "\n";
}

nlohmann::json load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw MigrationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace seqpareto
