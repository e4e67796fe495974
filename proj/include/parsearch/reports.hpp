// Artifact I/O: CSV field/policy/boundary exports, JSON reports wrapped
// in a {meta, data} envelope (timestamps only in meta, so payloads are
// byte-reproducible), readers for the simulate command, and a small
// structural validator for the shipped JSON schemas.

#ifndef PARSEARCH_REPORTS_HPP
#define PARSEARCH_REPORTS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "parsearch/free_boundary.hpp"
#include "parsearch/monte_carlo.hpp"
#include "parsearch/solver.hpp"

namespace parsearch {

using json = nlohmann::json;

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Floats serialized with 17 significant digits.
std::string format_double(double v);

void write_field_csv(const std::string& path, const ScalarField& u, const ScalarField& g,
                     const ContactMask& mask);
void write_policy_csv(const std::string& path, const PolicyField& policy);
void write_boundary_nodes_csv(const std::string& path, const GridSpec& grid,
                              const std::vector<std::size_t>& nodes,
                              const ContactMask& mask);

json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const json& j);

json diagnostics_to_json(const SolveDiagnostics& diag);
json sim_estimate_to_json(const SimEstimate& est);

// {"meta": {tool, version, timestamp, ...}, "data": payload}. Volatile
// values (timestamps, wall times) belong in extra_meta so the data
// payload is byte-reproducible for identical configurations.
json report_envelope(json payload, json extra_meta = json::object());
void write_report(const std::string& path, const json& envelope);
json read_report(const std::string& path);

// Readers for artifacts produced by the solve command.
ScalarField read_field_csv(const std::string& path, const GridSpec& grid, ScalarField* g_out,
                           ContactMask* mask_out);
PolicyField read_policy_csv(const std::string& path, const GridSpec& grid);

// Structural validation against the subset of JSON Schema used under
// schemas/: type, properties, required, items, enum, minimum.
// Returns human-readable problems; empty means valid.
std::vector<std::string> schema_validate(const json& doc, const json& schema);

}  // namespace parsearch

#endif
