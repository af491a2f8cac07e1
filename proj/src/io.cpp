#include "dirclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace dirclust::io {

using nlohmann::json;

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string at(const std::string& source, std::size_t line, std::size_t field) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(field);
}

double parse_field(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec == std::errc::result_out_of_range)
    throw Error(ErrorKind::NonFinite, where + ": '" + field + "' is out of range");
  if (result.ec != std::errc() || result.ptr != end || field.empty())
    throw Error(ErrorKind::ParseError, where + ": '" + field + "' is not a number");
  if (!std::isfinite(value))
    throw Error(ErrorKind::NonFinite, where + ": '" + field + "' is not finite");
  return value;
}

// Re-raises core validation errors with the file name attached.
template <typename F>
auto with_source(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what(), e.indices());
  }
}

}  // namespace

LabeledMatrix parse_matrix_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  LabeledMatrix out;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (header) {
      out.labels = fields;
      for (std::size_t f = 0; f < fields.size(); ++f)
        if (fields[f].empty())
          throw Error(ErrorKind::ParseError, at(source, line_no, f + 1) + ": empty label");
      header = false;
      continue;
    }
    if (fields.size() != out.labels.size())
      throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(out.labels.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    auto& row = rows.emplace_back();
    for (std::size_t f = 0; f < fields.size(); ++f)
      row.push_back(parse_field(fields[f], at(source, line_no, f + 1)));
  }
  if (header) throw Error(ErrorKind::ParseError, source + ": missing header row");
  if (rows.size() != out.labels.size())
    throw Error(ErrorKind::ParseError, source + ": expected " + std::to_string(out.labels.size()) +
                                           " rows, got " + std::to_string(rows.size()));
  const Index n = static_cast<Index>(rows.size());
  out.values.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out.values(i, j) = rows[i][j];
  return out;
}

Networkd parse_network_csv(const std::string& text, const std::string& source) {
  LabeledMatrix m = parse_matrix_csv(text, source);
  return with_source(source, [&] { return validate_network(std::move(m.labels), m.values); });
}

namespace {

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
}

template <typename T>
T field(const json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key))
    throw Error(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  try {
    return node.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::ParseError, where + ": field '" + key + "' has the wrong type");
  }
}

std::map<std::string, Index> positions(const std::vector<std::string>& labels,
                                       const std::string& where) {
  std::map<std::string, Index> pos;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!pos.emplace(labels[i], static_cast<Index>(i)).second)
      throw Error(ErrorKind::DuplicateLabel, where + ": label '" + labels[i] + "' appears twice");
  return pos;
}

Index lookup(const std::map<std::string, Index>& pos, const std::string& label,
             const std::string& where) {
  auto it = pos.find(label);
  if (it == pos.end())
    throw Error(ErrorKind::UnknownLabel, where + ": unknown node '" + label + "'");
  return it->second;
}

double finite_number(const json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key))
    throw Error(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  const json& v = node.at(key);
  if (!v.is_number()) {
    // JSON has no infinity literal; string spellings of it are reported as such.
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "Infinity" || s == "-inf" || s == "nan" || s == "NaN")
        throw Error(ErrorKind::NonFinite, where + ": field '" + key + "' is not finite");
    }
    throw Error(ErrorKind::ParseError, where + ": field '" + key + "' is not a number");
  }
  return v.get<double>();
}

}  // namespace

Networkd parse_network_json(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  const auto labels = field<std::vector<std::string>>(doc, "nodes", source);
  const auto pos = positions(labels, source);
  const Index n = static_cast<Index>(labels.size());
  if (n < 1) throw Error(ErrorKind::ShapeMismatch, source + ": no nodes");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw Error(ErrorKind::ParseError, source + ": missing array 'edges'");

  Matrix<double> a = Matrix<double>::Zero(n, n);
  Matrix<char> seen = Matrix<char>::Zero(n, n);
  std::size_t e = 0;
  for (const json& edge : doc["edges"]) {
    const std::string where = source + ": edges[" + std::to_string(e++) + "]";
    const Index i = lookup(pos, field<std::string>(edge, "from", where), where);
    const Index j = lookup(pos, field<std::string>(edge, "to", where), where);
    if (seen(i, j)) throw Error(ErrorKind::ParseError, where + ": duplicate edge");
    seen(i, j) = 1;
    a(i, j) = finite_number(edge, "weight", where);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && !seen(i, j))
        throw Error(ErrorKind::ParseError, source + ": incomplete edge list, missing (" +
                                               labels[i] + ", " + labels[j] + ")");
  return with_source(source, [&] { return validate_network(labels, a); });
}

Networkd load_network(const std::string& path, NetworkFormat format) {
  if (format == NetworkFormat::Auto) {
    const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    format = is_json ? NetworkFormat::Json : NetworkFormat::Csv;
  }
  const std::string text = read_file(path);
  return format == NetworkFormat::Json ? parse_network_json(text, path)
                                       : parse_network_csv(text, path);
}

std::string matrix_to_csv(const std::vector<std::string>& labels, const Matrix<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += labels[i];
  }
  out += '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_number(values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string network_to_csv(const Networkd& network) {
  return matrix_to_csv(network.labels(), network.dissim());
}

RepresenterFamilyd parse_representers_json(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  if (!doc.is_object() || !doc.contains("representers") || !doc["representers"].is_array())
    throw Error(ErrorKind::ParseError, source + ": missing array 'representers'");
  std::vector<Representerd> members;
  std::size_t r = 0;
  for (const json& entry : doc["representers"]) {
    const std::string where = source + ": representers[" + std::to_string(r++) + "]";
    auto nodes = field<std::vector<std::string>>(entry, "nodes", where);
    if (!entry.contains("arcs") || !entry["arcs"].is_array())
      throw Error(ErrorKind::ParseError, where + ": missing array 'arcs'");
    std::vector<LabeledArc<double>> arcs;
    std::size_t a = 0;
    for (const json& arc : entry["arcs"]) {
      const std::string arc_where = where + ".arcs[" + std::to_string(a++) + "]";
      arcs.push_back({field<std::string>(arc, "from", arc_where),
                      field<std::string>(arc, "to", arc_where),
                      finite_number(arc, "weight", arc_where)});
    }
    members.push_back(
        with_source(where, [&] { return validate_representer(std::move(nodes), arcs); }));
  }
  return with_source(source, [&] { return make_family(std::move(members)); });
}

RepresenterFamilyd load_representers(const std::string& path) {
  return parse_representers_json(read_file(path), path);
}

json representers_to_json(const RepresenterFamilyd& family) {
  json members = json::array();
  for (const auto& rep : family.members()) {
    json arcs = json::array();
    for (const auto& arc : rep.arcs())
      arcs.push_back({{"from", rep.nodes()[arc.from]}, {"to", rep.nodes()[arc.to]},
                      {"weight", arc.weight}});
    members.push_back({{"nodes", rep.nodes()}, {"arcs", std::move(arcs)}});
  }
  return {{"representers", std::move(members)}};
}

// ---------------------------------------------------------------------------
// Newick

namespace {

bool needs_quotes(const std::string& label) {
  if (label.empty()) return true;
  return label.find_first_of(" \t\r\n()[]':;,") != std::string::npos;
}

std::string quote_label(const std::string& label) {
  if (!needs_quotes(label)) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

struct TreeNode {
  std::string label;          // leaves only
  std::optional<double> height;
  std::optional<double> length;
  std::vector<std::size_t> children;
};

class NewickReader {
 public:
  explicit NewickReader(const std::string& text) : text_(text) {}

  std::vector<TreeNode> read() {
    skip_space();
    subtree();
    skip_space();
    if (!consume(';')) fail("expected ';'");
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return std::move(nodes_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, "newick offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string label() {
    skip_space();
    std::string out;
    if (consume('\'')) {
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        const char c = text_[pos_++];
        if (c == '\'') {
          if (consume('\'')) out += '\'';
          else break;
        } else {
          out += c;
        }
      }
      return out;
    }
    while (pos_ < text_.size() && std::string_view("()[]':;, \t\r\n").find(text_[pos_]) ==
                                      std::string_view::npos)
      out += text_[pos_++];
    return out;
  }

  double number(const std::string& token, const char* what) {
    double value = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || result.ec != std::errc() || result.ptr != token.data() + token.size() ||
        !std::isfinite(value))
      fail(std::string("bad ") + what + " '" + token + "'");
    return value;
  }

  std::size_t subtree() {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    skip_space();
    if (consume('(')) {
      do {
        const std::size_t child = subtree();
        nodes_[id].children.push_back(child);
        skip_space();
      } while (consume(','));
      if (!consume(')')) fail("expected ')'");
      const std::string annotation = label();
      if (!annotation.empty()) nodes_[id].height = number(annotation, "height");
    } else {
      nodes_[id].label = label();
      if (nodes_[id].label.empty()) fail("empty leaf label");
      nodes_[id].height = 0.0;
    }
    skip_space();
    if (consume(':')) {
      skip_space();
      std::string token;
      while (pos_ < text_.size() && std::string_view("(),:;[] \t\r\n").find(text_[pos_]) ==
                                        std::string_view::npos)
        token += text_[pos_++];
      nodes_[id].length = number(token, "branch length");
    }
    return id;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::string to_newick(const Dendrogramd& dendrogram) {
  const Index n = static_cast<Index>(dendrogram.leaves.size());
  if (n < 1) throw Error(ErrorKind::ShapeMismatch, "dendrogram has no leaves");
  // Validates the merge sequence as a side effect.
  ultrametric_from_dendrogram(dendrogram);

  struct Node {
    double height;
    Index leaf;  // -1 for internal nodes
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> node_of(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    node_of[i] = nodes.size();
    nodes.push_back({0.0, i, {}});
  }
  for (const auto& merge : dendrogram.merges) {
    Node parent{merge.resolution, -1, {}};
    auto blocks = merge.blocks;
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
      return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
    });
    for (const auto& block : blocks) parent.children.push_back(node_of[block.front()]);
    const std::size_t id = nodes.size();
    nodes.push_back(std::move(parent));
    for (const auto& block : blocks)
      for (Index leaf : block) node_of[leaf] = id;
  }

  std::string out;
  auto emit = [&](auto&& self, std::size_t id, std::optional<double> parent_height) -> void {
    const Node& node = nodes[id];
    if (node.leaf >= 0) {
      out += quote_label(dendrogram.leaves[node.leaf]);
    } else {
      out += '(';
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        if (c) out += ',';
        self(self, node.children[c], node.height);
      }
      out += ')';
      out += format_number(node.height);
    }
    if (parent_height) {
      out += ':';
      out += format_number(*parent_height - node.height);
    }
  };
  emit(emit, nodes.size() - 1, std::nullopt);
  out += ";";
  return out;
}

Dendrogramd parse_newick(const std::string& text,
                         const std::optional<std::vector<std::string>>& leaf_order) {
  std::vector<TreeNode> tree = NewickReader(text).read();

  // Heights bottom-up; nodes are stored in preorder, so a reverse sweep sees
  // children before parents.
  for (std::size_t id = tree.size(); id-- > 0;) {
    TreeNode& node = tree[id];
    if (node.children.empty()) continue;
    if (!node.height) {
      double height = 0.0;
      for (std::size_t c : node.children) {
        const TreeNode& child = tree[c];
        if (!child.length)
          throw Error(ErrorKind::ParseError,
                      "newick: internal node without height or branch lengths");
        height = std::max(height, *child.height + *child.length);
      }
      node.height = height;
    }
    for (std::size_t c : node.children) {
      const TreeNode& child = tree[c];
      if (!child.length) continue;
      const double reached = *child.height + *child.length;
      if (std::abs(reached - *node.height) > Tolerance<double>::slack(reached, *node.height))
        throw Error(ErrorKind::ParseError,
                    "newick: branch lengths disagree with node heights (not ultrametric)");
    }
  }

  std::vector<std::string> leaves;
  for (const TreeNode& node : tree)
    if (node.children.empty()) leaves.push_back(node.label);
  if (leaf_order) {
    std::vector<std::string> a = leaves, b = *leaf_order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw Error(ErrorKind::ParseError, "newick leaves do not match the given labels");
    leaves = *leaf_order;
  }
  const Index n = static_cast<Index>(leaves.size());
  const auto pos = positions(leaves, "newick");

  // Leaf sets per node, then the ultrametric: children of a node meet at its
  // height.
  std::vector<std::vector<Index>> members(tree.size());
  Matrix<double> u = Matrix<double>::Zero(n, n);
  for (std::size_t id = tree.size(); id-- > 0;) {
    const TreeNode& node = tree[id];
    if (node.children.empty()) {
      members[id] = {lookup(pos, node.label, "newick")};
      continue;
    }
    if (node.children.size() < 2)
      throw Error(ErrorKind::MalformedMergeSequence, "newick: internal node with one child");
    if (!(*node.height > 0.0))
      throw Error(ErrorKind::MalformedMergeSequence, "newick: internal height must be positive");
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      const auto& ca = members[node.children[a]];
      if (*tree[node.children[a]].height > *node.height)
        throw Error(ErrorKind::MalformedMergeSequence, "newick: child above its parent");
      for (std::size_t b = a + 1; b < node.children.size(); ++b)
        for (Index x : ca)
          for (Index y : members[node.children[b]]) u(x, y) = u(y, x) = *node.height;
      members[id].insert(members[id].end(), ca.begin(), ca.end());
    }
  }
  return dendrogram_from_ultrametric(validate_ultrametric(leaves, u));
}

json dendrogram_to_json(const Dendrogramd& dendrogram) {
  json merges = json::array();
  for (const auto& merge : dendrogram.merges) {
    json blocks = json::array();
    for (const auto& block : merge.blocks) {
      json names = json::array();
      for (Index leaf : block) names.push_back(dendrogram.leaves[leaf]);
      blocks.push_back(std::move(names));
    }
    merges.push_back({{"resolution", merge.resolution}, {"blocks", std::move(blocks)}});
  }
  return {{"leaves", dendrogram.leaves}, {"merges", std::move(merges)}};
}

Dendrogramd dendrogram_from_json(const json& doc) {
  const std::string where = "dendrogram";
  Dendrogramd dendrogram;
  dendrogram.leaves = field<std::vector<std::string>>(doc, "leaves", where);
  const auto pos = positions(dendrogram.leaves, where);
  if (!doc.contains("merges") || !doc["merges"].is_array())
    throw Error(ErrorKind::ParseError, where + ": missing array 'merges'");
  for (const json& entry : doc["merges"]) {
    Merge<double> merge{finite_number(entry, "resolution", where), {}};
    for (const auto& names : field<std::vector<std::vector<std::string>>>(entry, "blocks", where)) {
      auto& block = merge.blocks.emplace_back();
      for (const auto& name : names) block.push_back(lookup(pos, name, where));
    }
    dendrogram.merges.push_back(std::move(merge));
  }
  ultrametric_from_dendrogram(dendrogram);
  return dendrogram;
}

json partition_to_json(const Partitiond& partition) {
  return {{"resolution", partition.resolution}, {"blocks", partition.block_labels()}};
}

// ---------------------------------------------------------------------------
// Uses table

ZeroUse parse_zero_use(const std::string& text) {
  if (text == "error") return {};
  if (text.rfind("cap=", 0) == 0) {
    const double cap = parse_field(text.substr(4), "--zero-use");
    if (!(cap > 0.0)) throw Error(ErrorKind::ParseError, "--zero-use cap must be positive");
    return {ZeroUsePolicy::Cap, cap};
  }
  throw Error(ErrorKind::ParseError, "--zero-use expects 'error' or 'cap=VALUE'");
}

Networkd normalize_uses_table(const Matrix<double>& uses, const std::vector<std::string>& labels,
                              const ZeroUse& zero_use) {
  if (uses.rows() != uses.cols() || uses.rows() < 1)
    throw Error(ErrorKind::ShapeMismatch, "uses table must be square and non-empty");
  const Index n = uses.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!std::isfinite(uses(i, j)) || uses(i, j) < 0.0)
        throw Error(ErrorKind::NonFinite, "use entry (" + std::to_string(i) + ", " +
                                              std::to_string(j) + ") must be finite and >= 0",
                    {i, j});
  Matrix<double> a = Matrix<double>::Zero(n, n);
  for (Index col = 0; col < n; ++col) {
    const double total = uses.col(col).sum();
    if (!(total > 0.0))
      throw Error(ErrorKind::ZeroColumn, "sector '" + labels.at(col) + "' has no inputs", {col});
    for (Index row = 0; row < n; ++row) {
      if (row == col) continue;
      if (uses(row, col) == 0.0) {
        if (zero_use.policy == ZeroUsePolicy::Error)
          throw Error(ErrorKind::ZeroUseEntry,
                      "sector '" + labels.at(row) + "' supplies nothing to '" + labels.at(col) + "'",
                      {row, col});
        a(row, col) = zero_use.cap;
      } else {
        a(row, col) = 1.0 / (uses(row, col) / total);
      }
    }
  }
  return validate_network(labels, a);
}

// ---------------------------------------------------------------------------
// Reports

json network_to_json(const Networkd& network) {
  json rows = json::array();
  for (Index i = 0; i < network.size(); ++i) {
    json row = json::array();
    for (Index j = 0; j < network.size(); ++j) row.push_back(network(i, j));
    rows.push_back(std::move(row));
  }
  return {{"nodes", network.labels()}, {"matrix", std::move(rows)}};
}

json report_to_json(const CheckReport<double>& report) {
  json out = {{"property", report.property},
              {"passed", report.passed},
              {"trials", report.trials},
              {"witness", nullptr}};
  if (report.witness) {
    const auto& w = *report.witness;
    json values = json::object();
    for (const auto& [name, value] : w.values) values[name] = value;
    json instance = json::array();
    for (const auto& network : w.instance) instance.push_back(network_to_json(network));
    out["witness"] = {{"seed", w.seed ? json(*w.seed) : json(nullptr)},
                      {"detail", w.detail},
                      {"values", std::move(values)},
                      {"instance", std::move(instance)}};
  }
  return out;
}

}  // namespace dirclust::io
