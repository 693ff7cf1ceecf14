#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "caplab/capillary.hpp"
#include "caplab/geometry.hpp"
#include "caplab/heintze_karcher.hpp"
#include "caplab/torsion.hpp"

namespace caplab {

using json = nlohmann::ordered_json;

// Orientation and sign conventions in force; attached to every emitted report.
json convention_ledger();

json to_json(const GeometryReport& g);
json to_json(const DeficitReport& d);
json to_json(const ClassicalHkReport& r);
json to_json(const MontielRosReport& r);
json to_json(const CoverageReport& r);
json to_json(const LinfCheckReport& r);
json to_json(const ReillyReport& r);
json to_json(const StabilityChainReport& r);
json to_json(const DeficitBoundReport& r);
json to_json(const WettedBoundsReport& r);
json to_json(const SubstrateTermBoundReport& r);
json to_json(const DropletSolution& s);
json to_json(const WedgeGapReport& r);
json to_json(const std::vector<ScalingRow>& rows);

void write_json_file(const json& j, const std::string& path);

}  // namespace caplab
