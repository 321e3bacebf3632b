#pragma once

#include "minionlab/advantage.hpp"
#include "minionlab/minions.hpp"
#include "minionlab/quantum.hpp"
#include "minionlab/relaxations.hpp"
#include "minionlab/sdp.hpp"
#include "minionlab/structures.hpp"

#include <json.hpp>

#include <string>

namespace minionlab {

using Json = nlohmann::ordered_json;

// Structures: {"signature":[{"name":..,"arity":..}],"domain":n,
//              "relations":{name:[[i,...],...]}}; tuples 0-based.
Json structure_to_json(const Structure& s);
Structure structure_from_json(const Json& j);

Json space_config_to_json(const SpaceConfig& c);
SpaceConfig space_config_from_json(const Json& j);

// Matrix payloads are row-major; complex entries are [re, im] pairs, real
// ones plain numbers.
Json matrix_to_json(const Matrix& m, Field field);
Matrix matrix_from_json(const Json& j, Field field, int rows, int cols);

Json qelement_to_json(const QElement& q);
QElement qelement_from_json(const Json& j);

// Certificates key matrices by "x:y".
Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

Json dictator_to_json(const DictatorElement& e);
DictatorElement dictator_from_json(const Json& j);
Json sdp_element_to_json(const SdpElement& e);
SdpElement sdp_element_from_json(const Json& j);
Json skeletal_to_json(const SkeletalElement& e);
SkeletalElement skeletal_from_json(const Json& j);

Json hom_result_to_json(const HomSearchResult& r);
Json bipartite_to_json(const BipartiteReport& r);
Json certificate_report_to_json(const CertificateReport& r);
Json free_relation_report_to_json(const FreeRelationReport& r);
Json check_report_to_json(const CheckReport& r);
Json clp_report_to_json(const ClpReport& r, const Structure& x, const Structure& y);
Json consistency_report_to_json(const ConsistencyReport& r);
Json sdp_report_to_json(const SdpReport& r);
Json advantage_to_json(const AdvantageVerdict& v);
Json dictator_search_to_json(const DictatorSearchResult& r);

std::string verdict_name(Verdict v);

} // namespace minionlab
