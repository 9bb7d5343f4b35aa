#pragma once

// File formats: flow CSV in/out, node geometry, result JSON, matrix and
// membership CSV, SVG heatmaps and GeoJSON rich-club layers.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "richclub/scan.hpp"
#include "richclub/synthetic.hpp"
#include "richclub/temporal_graph.hpp"

namespace richclub {

inline constexpr int kResultSchemaVersion = 1;

// Header must name the columns timestamp, origin, destination, weight (any order).
// Fields may be double-quoted. Throws InputError with the offending line.
std::vector<FlowRecord> read_flow_csv(std::istream& in);
std::vector<FlowRecord> read_flow_csv_file(const std::string& path);

// One row per temporal edge; weights are written in shortest round-trip form,
// so ingesting the output reproduces the network exactly (nodes and timestamps
// without any edge cannot be represented and are dropped).
void write_flow_csv(std::ostream& out, const TemporalNetwork& net);

struct NodeGeometry {
    std::string node;
    double lon = 0.0;
    double lat = 0.0;
};

// Header `node,lon,lat`; one row per node, coordinates in range.
std::vector<NodeGeometry> read_geometry_csv(std::istream& in);

nlohmann::json config_to_json(const ScanConfig& config);
ScanConfig config_from_json(const nlohmann::json& j);

// Undefined values are JSON null with a parallel `defined_mask`.
nlohmann::json to_json(const ScanResult& result);
ScanResult scan_result_from_json(const nlohmann::json& j);

enum class MatrixField { coefficient, observed, null_mean, p_value, t_start };

// First row: corner label then delta values; first column: thresholds.
// Values use 12 significant digits; undefined values are written as NA.
void write_matrix_csv(std::ostream& out, const ScanResult& result, MatrixField field);

// `k,node_id,richness` for every threshold and rich member.
void write_membership_csv(std::ostream& out, const ScanResult& result);

// Cell text uses the same 12-digit formatting as write_matrix_csv.
std::string format_cell(const ScanResult& result, std::size_t k, std::size_t d, MatrixField field);

// SVG 1.1 heatmap of coefficients. Each cell carries a <title> with the exact
// matrix CSV value and a short visible label.
std::string render_heatmap_svg(const ScanResult& result);

// GeoJSON FeatureCollection for one cell: a Point per rich member (richness)
// and a LineString per rich-rich pair with positive mean weight over the
// cell's argmax window (whole period for static metrics or undefined cells).
// Throws GeometryError naming the rich nodes without coordinates.
nlohmann::json make_geojson(const ScanResult& result, CellIndex cell, const TemporalNetwork& net,
                            const std::vector<NodeGeometry>& geometry, std::vector<std::string>* warnings = nullptr);

// Aggregate graph dumps: `source,target,weight,snapshots` and `node,degree,temporal_edge_count`.
void write_aggregate_edges_csv(std::ostream& out, const TemporalNetwork& net, const AggregateGraph& agg);
void write_aggregate_nodes_csv(std::ostream& out, const TemporalNetwork& net, const AggregateGraph& agg);

nlohmann::json to_json(const GroundTruth& truth, const PlantedSpec& spec);

std::string format_number_12(double v);
std::string format_roundtrip(double v);

}  // namespace richclub
