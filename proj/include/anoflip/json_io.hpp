#pragma once

#include <string>

#include <json.hpp>

#include "anoflip/flow_numerics.hpp"
#include "anoflip/manifold_assembly.hpp"
#include "anoflip/seifert_piece.hpp"

namespace anoflip {

inline constexpr int kSchemaVersion = 1;

nlohmann::json fatgraph_to_json(const FatGraph& g);
FatGraph fatgraph_from_json(const nlohmann::json& j);

nlohmann::json piece_to_json(const SeifertPiece& p);
SeifertPiece piece_from_json(const nlohmann::json& j);

nlohmann::json flow_to_json(const GluedFlow& f);
GluedFlow flow_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const EquivalenceCertificate& c);
EquivalenceCertificate certificate_from_json(const nlohmann::json& j);

nlohmann::json itineraries_to_json(const std::vector<Itinerary>& its);
nlohmann::json cone_report_to_json(const ConeReport& r);
nlohmann::json checklist_to_json(const BlockChecklist& c);

std::string trajectory_csv(const Trajectory& t);
std::string cone_report_csv(const ConeReport& r);

}  // namespace anoflip
