#pragma once
// JSON (ordered, schema-tagged) and CSV interchange for every public record
// type.  Reports are timestamp-free so identical inputs serialize to
// byte-identical bytes.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "flowembed/flows.hpp"
#include "flowembed/phi.hpp"
#include "flowembed/signals.hpp"
#include "flowembed/theta.hpp"
#include "flowembed/tiling.hpp"

namespace flowembed {

using ojson = nlohmann::ordered_json;

// NaN/inf are not valid JSON; reports map them to null via this helper.
ojson json_num(double v);

ojson marker_to_json(const MarkerSequence& m);
MarkerSequence marker_from_json(const ojson& j);

ojson tiling_to_json(const IntervalTiling& t);
ojson geometry_to_json(const GeometryReport& g);

ojson params_to_json(const EmbeddingParams& p);
EmbeddingParams params_from_json(const ojson& j);
ojson param_report_to_json(const ParamReport& r);

ojson signal_header_json(const BandLimitedSignal& s);
void signal_to_csv(const BandLimitedSignal& s, std::ostream& out);

ojson spectrum_to_json(const SpectrumReport& r);
ojson zeros_to_json(const ZeroReport& r);
ojson rigidity_to_json(const RigidityResult& r);
ojson perturb_to_json(const PerturbReport& r);
ojson iterate_to_json(const IterateReport& r);

ojson boundary_to_json(const BoundaryReport& r);
ojson roundtrip_to_json(const RoundtripReport& r);
ojson strong_to_json(const StrongEmbedReport& r);

void write_json_file(const ojson& j, const std::string& path);
ojson read_json_file(const std::string& path);

}  // namespace flowembed
