#ifndef DIRCLUST_IO_HPP
#define DIRCLUST_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dirclust/core.hpp"
#include "dirclust/properties.hpp"
#include "dirclust/representable.hpp"

namespace dirclust::io {

enum class NetworkFormat { Auto, Csv, Json };

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Labels plus a dense matrix, as read from a CSV whose first row holds the
/// labels and whose remaining rows hold the entries. No validation beyond
/// shape and numeric syntax.
struct LabeledMatrix {
  std::vector<std::string> labels;
  Matrix<double> values;
};

LabeledMatrix parse_matrix_csv(const std::string& text, const std::string& source);

/// Dense CSV: header row of labels, then n rows of n entries.
Networkd parse_network_csv(const std::string& text, const std::string& source);

/// {"nodes": [...], "edges": [{"from", "to", "weight"}]} with every ordered
/// off-diagonal pair present.
Networkd parse_network_json(const std::string& text, const std::string& source);

Networkd load_network(const std::string& path, NetworkFormat format = NetworkFormat::Auto);

std::string matrix_to_csv(const std::vector<std::string>& labels, const Matrix<double>& values);
std::string network_to_csv(const Networkd& network);

/// {"representers": [{"nodes": [...], "arcs": [{"from", "to", "weight"}]}]}
RepresenterFamilyd parse_representers_json(const std::string& text, const std::string& source);
RepresenterFamilyd load_representers(const std::string& path);
nlohmann::json representers_to_json(const RepresenterFamilyd& family);

/// Ultrametric tree: leaves sit at height 0, every internal node is labelled
/// with its merge resolution, and branch lengths are parent minus child
/// height. Example: "((a:1,b:1)1:1,c:2)2;".
std::string to_newick(const Dendrogramd& dendrogram);

/// Reads a Newick tree written by to_newick (internal labels are read as
/// heights; when absent, heights are recovered from branch lengths). The
/// result is canonical, identical to dendrogram_from_ultrametric of the tree's
/// ultrametric. `leaf_order`, when given, fixes the leaf indexing.
Dendrogramd parse_newick(const std::string& text,
                         const std::optional<std::vector<std::string>>& leaf_order = std::nullopt);

nlohmann::json dendrogram_to_json(const Dendrogramd& dendrogram);
Dendrogramd dendrogram_from_json(const nlohmann::json& doc);

nlohmann::json partition_to_json(const Partitiond& partition);

enum class ZeroUsePolicy { Error, Cap };

struct ZeroUse {
  ZeroUsePolicy policy = ZeroUsePolicy::Error;
  double cap = 0.0;
};

/// Parses "error" or "cap=VALUE".
ZeroUse parse_zero_use(const std::string& text);

/// Input-output uses table to a dissimilarity network: A(i, i') is the
/// inverse of the share of sector i' inputs supplied by sector i. Column sums
/// include the diagonal.
Networkd normalize_uses_table(const Matrix<double>& uses, const std::vector<std::string>& labels,
                              const ZeroUse& zero_use = {});

nlohmann::json network_to_json(const Networkd& network);
nlohmann::json report_to_json(const CheckReport<double>& report);

}  // namespace dirclust::io

#endif  // DIRCLUST_IO_HPP
