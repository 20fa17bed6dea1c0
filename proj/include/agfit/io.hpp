#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "agfit/graph.hpp"
#include "agfit/models.hpp"
#include "agfit/sim.hpp"

namespace agfit {

struct DatasetManifest {
  std::string name;
  int node_count = 0;
  long long edge_count = 0;
  long long ordered_pair_count = 0;  // node_count^2
  long long positive_attribute_count = 0;
};

DatasetManifest make_manifest(const std::string& name, const AttributedGraph& g);

// Edge list: one "u v" pair per line, 0-based ids, '#' comments and blank
// lines ignored.  Node count comes from `node_count` when >= 0, otherwise
// from max id + 1.  Duplicate edges collapse with a warning on `warnings`;
// self loops are rejected.
AttributedGraph load_edge_list(const std::string& path, int node_count,
                               const std::vector<std::uint8_t>& attributes,
                               std::ostream* warnings = nullptr);

// Attribute file: one "node_id value" per line, value in {0,1}; every node
// must be covered exactly once.
std::vector<std::uint8_t> load_attributes(const std::string& path,
                                          int node_count);

// Minimal undirected GML subset: graph [ node [ id .. value .. ] edge
// [ source .. target .. value .. ] ].  Node attributes binarize as
// value > threshold.  Directed graphs and malformed structure raise
// ParseError.  Node ids may be arbitrary integers; they are remapped to
// 0..n-1 in file order.
AttributedGraph load_gml(const std::string& path, double value_threshold = 0.0,
                         std::ostream* warnings = nullptr);

void save_edge_list(const std::string& path, const AttributedGraph& g);
void save_attributes(const std::string& path, const AttributedGraph& g);
void save_gml(const std::string& path, const AttributedGraph& g);

// Model files are JSON: {"kind": "er"|"sbm"|"gf"|"custom", "n": ..,
// "params": {..}}.  GF models store parameters and regenerate their matrix
// deterministically on load.
void save_model(const std::string& path, const EdgeProbabilityModel& model);
EdgeProbabilityModel load_model(const std::string& path);

// Shortest round-trip decimal form, locale independent; NaN prints "nan".
std::string format_double(double v);

// CSV writers; header row first, '\n' line endings, '.' decimal marks.
void write_rho_csv(std::ostream& os, const RhoDistribution& dist);
void write_landscape_csv(std::ostream& os, const std::vector<LandscapeRow>& rows);
void write_select_k_csv(std::ostream& os, const std::vector<int>& ks,
                        const std::vector<double>& probability_lower_bound);
void write_report_csv(std::ostream& os, const RepresentationReport& report);
void write_verdicts_csv(std::ostream& os,
                        const std::vector<BoundednessVerdict>& verdicts);

}  // namespace agfit
