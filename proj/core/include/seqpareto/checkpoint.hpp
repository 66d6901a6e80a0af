#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "seqpareto/campaign.hpp"

namespace seqpareto {

inline constexpr int kCheckpointSchemaVersion = 1;

/// Versioned JSON document holding a CampaignState.
nlohmann::json checkpoint(const CampaignState& state);

/// Inverse of checkpoint(). Throws MigrationError on a version mismatch or
/// a malformed document; nothing is returned in that case.
CampaignState restore_state(const nlohmann::json& document);

/// Restores a campaign against the source pool it was started from.
Campaign restore(const nlohmann::json& document, const CandidatePool& source);

void save_checkpoint(const CampaignState& state, const std::filesystem::path& path);
nlohmann::json load_document(const std::filesystem::path& path);

}  // namespace seqpareto
