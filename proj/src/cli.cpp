#include "dirclust/cli.hpp"

#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "dirclust/core.hpp"
#include "dirclust/io.hpp"
#include "dirclust/method_spec.hpp"
#include "dirclust/methods.hpp"
#include "dirclust/metric.hpp"
#include "dirclust/properties.hpp"
#include "dirclust/representable.hpp"

namespace dirclust::cli {

namespace {

using nlohmann::json;

struct MethodOptions {
  std::string method = "reciprocal";
  std::optional<long> t;
  std::optional<double> beta;
  std::string representers;
  std::string family;
  double ratio = 3.0;
  std::optional<long> max_len;
  std::optional<unsigned long long> budget;
};

struct InputOptions {
  std::string input;
  std::string input_format = "auto";
  std::string output;
};

void add_method_options(CLI::App* cmd, MethodOptions& m) {
  cmd->add_option("--method", m.method, "Clustering method")
      ->check(CLI::IsMember({"reciprocal", "nonreciprocal", "semireciprocal", "grafting",
                             "single-linkage", "representable"}));
  cmd->add_option("--t", m.t, "Semi-reciprocal chain length bound (nodes per chain)");
  cmd->add_option("--beta", m.beta, "Grafting threshold");
  cmd->add_option("--representers", m.representers, "Representer family file (JSON)");
  cmd->add_option("--family", m.family, "Built-in representer family")
      ->check(CLI::IsMember({"reciprocal", "cycle3", "cycles"}));
  cmd->add_option("--ratio", m.ratio, "Reverse-arc ratio for --family cycle3");
  cmd->add_option("--max-len", m.max_len,
                  "Longest cycle for --family cycles (default: max(2, 2n-2))");
  cmd->add_option("--budget", m.budget,
                  "Maximum node maps per representer (env DIRCLUST_BUDGET)");
}

void add_input_options(CLI::App* cmd, InputOptions& in, bool required = true) {
  auto* opt = cmd->add_option("--input,-i", in.input, "Input file");
  if (required) opt->required();
  cmd->add_option("--input-format", in.input_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  cmd->add_option("--output,-o", in.output, "Write data here instead of standard output");
}

io::NetworkFormat network_format(const std::string& name) {
  if (name == "csv") return io::NetworkFormat::Csv;
  if (name == "json") return io::NetworkFormat::Json;
  return io::NetworkFormat::Auto;
}

unsigned long long budget_of(const MethodOptions& m) {
  if (m.budget) return *m.budget;
  if (const char* env = std::getenv("DIRCLUST_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "DIRCLUST_BUDGET is not a number");
    }
  }
  return kDefaultBudget;
}

/// A method ready to run, plus what the reports say about it.
struct BuiltMethod {
  ClusteringMethod<double> run;
  json description;
  double lipschitz = 1.0;
};

// Resolves the representer family flags. A null family with `per_network`
// set means the cycle family sized to each input.
struct FamilyChoice {
  std::shared_ptr<const RepresenterFamilyd> family;
  bool cycles_per_network = false;
  json description;
};

FamilyChoice choose_family(const MethodOptions& m) {
  FamilyChoice choice;
  if (!m.representers.empty() && !m.family.empty())
    throw Error(ErrorKind::ParseError, "give either --representers or --family, not both");
  if (!m.representers.empty()) {
    choice.family = std::make_shared<RepresenterFamilyd>(io::load_representers(m.representers));
    choice.description = {{"file", m.representers}};
  } else if (m.family == "reciprocal") {
    choice.family = std::make_shared<RepresenterFamilyd>(
        make_family(std::vector<Representerd>{reciprocal_representer<double>()}));
    choice.description = {{"builtin", "reciprocal"}};
  } else if (m.family == "cycle3") {
    if (!(m.ratio > 0.0) || !std::isfinite(m.ratio))
      throw Error(ErrorKind::InvalidRatio, "--ratio must be positive");
    choice.family = std::make_shared<RepresenterFamilyd>(
        make_family(std::vector<Representerd>{cycle3_representer<double>(m.ratio)}));
    choice.description = {{"builtin", "cycle3"}, {"ratio", m.ratio}};
  } else if (m.family == "cycles") {
    if (m.max_len) {
      choice.family = std::make_shared<RepresenterFamilyd>(cycle_family<double>(*m.max_len));
      choice.description = {{"builtin", "cycles"}, {"max_len", *m.max_len}};
    } else {
      choice.cycles_per_network = true;
      choice.description = {{"builtin", "cycles"}, {"max_len", "2n-2"}};
    }
  } else {
    throw Error(ErrorKind::EmptyFamily, "representable needs --representers or --family");
  }
  if (choice.family) {
    choice.description["sep"] = choice.family->sep();
    choice.description["d_max"] = choice.family->d_max();
  }
  return choice;
}

BuiltMethod build_method(const MethodOptions& m) {
  BuiltMethod built;
  built.description = {{"kind", m.method}};
  if (m.method == "reciprocal") {
    built.run = as_function(MethodSpec<double>::reciprocal());
  } else if (m.method == "nonreciprocal") {
    built.run = as_function(MethodSpec<double>::nonreciprocal());
  } else if (m.method == "single-linkage") {
    built.run = as_function(MethodSpec<double>::single_linkage());
  } else if (m.method == "semireciprocal") {
    if (!m.t) throw Error(ErrorKind::InvalidHopBound, "semireciprocal needs --t");
    if (*m.t < 2)
      throw Error(ErrorKind::InvalidHopBound,
                  "chains need at least 2 nodes, got " + std::to_string(*m.t));
    built.run = as_function(MethodSpec<double>::semi_reciprocal(*m.t));
    built.description["t"] = *m.t;
  } else if (m.method == "grafting") {
    if (!m.beta) throw Error(ErrorKind::NonPositiveBeta, "grafting needs --beta");
    if (!(*m.beta > 0.0) || !std::isfinite(*m.beta))
      throw Error(ErrorKind::NonPositiveBeta, "grafting threshold must be positive and finite");
    built.run = as_function(MethodSpec<double>::grafting(*m.beta));
    built.description["beta"] = *m.beta;
  } else if (m.method == "representable") {
    const unsigned long long budget = budget_of(m);
    FamilyChoice choice = choose_family(m);
    built.description["family"] = choice.description;
    if (choice.cycles_per_network) {
      built.run = [budget](const Networkd& n) {
        return representable_cluster(cycle_family<double>(nonreciprocal_cycle_length(n.size())),
                                     n, budget);
      };
      built.lipschitz = 1.0;
    } else {
      built.lipschitz = stability_constant(*choice.family);
      built.run = as_function(MethodSpec<double>::representable(choice.family, budget));
    }
    built.description["stability_constant"] = built.lipschitz;
  }
  return built;
}

void emit(const std::string& data, const std::string& path, std::ostream& out) {
  if (path.empty()) out << data;
  else io::write_file(path, data);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ComplexityGuard:
    case ErrorKind::TooLargeForExact:
      return kComplexity;
    case ErrorKind::Io:
      return kIo;
    default:
      return kValidation;
  }
}

// ---------------------------------------------------------------------------

int cmd_cluster(const InputOptions& in, const MethodOptions& m, const std::string& format,
                const std::string& ultrametric_path, std::ostream& out) {
  const BuiltMethod method = build_method(m);
  const Networkd network = io::load_network(in.input, network_format(in.input_format));
  const Ultrametricd u = method.run(network);
  const Dendrogramd dendrogram = dendrogram_from_ultrametric(u);
  std::string data;
  if (format == "newick") {
    data = io::to_newick(dendrogram) + "\n";
  } else if (format == "json") {
    json doc = io::dendrogram_to_json(dendrogram);
    doc["method"] = method.description;
    data = doc.dump(2) + "\n";
  } else {
    data = io::matrix_to_csv(u.labels(), u.values());
  }
  emit(data, in.output, out);
  if (!ultrametric_path.empty())
    io::write_file(ultrametric_path, io::matrix_to_csv(u.labels(), u.values()));
  return kOk;
}

int cmd_cut(const InputOptions& in, const MethodOptions& m, const std::string& ultrametric_input,
            double delta, const std::string& format, std::ostream& out) {
  std::optional<Ultrametricd> u;
  if (!ultrametric_input.empty()) {
    io::LabeledMatrix lm = io::parse_matrix_csv(io::read_file(ultrametric_input), ultrametric_input);
    u = validate_ultrametric(std::move(lm.labels), lm.values);
  } else {
    if (in.input.empty()) throw Error(ErrorKind::ParseError, "cut needs --input or --ultrametric-input");
    const BuiltMethod method = build_method(m);
    u = method.run(io::load_network(in.input, network_format(in.input_format)));
  }
  const Partitiond partition = cut_at_resolution(*u, delta);
  std::string data;
  if (format == "csv") {
    data = "label,block\n";
    for (std::size_t b = 0; b < partition.blocks.size(); ++b)
      for (Index i : partition.blocks[b]) data += partition.labels[i] + "," + std::to_string(b) + "\n";
  } else {
    data = io::partition_to_json(partition).dump(2) + "\n";
  }
  emit(data, in.output, out);
  return kOk;
}

int cmd_distance(const std::vector<std::string>& files, const std::string& input_format,
                 Index max_bits, const std::string& output, std::ostream& out) {
  if (files.size() != 2) throw Error(ErrorKind::ParseError, "distance needs exactly two networks");
  const Networkd a = io::load_network(files[0], network_format(input_format));
  const Networkd b = io::load_network(files[1], network_format(input_format));
  emit(io::format_number(network_distance_exact(a, b, max_bits)) + "\n", output, out);
  return kOk;
}

int cmd_symmetrize(const InputOptions& in, const MethodOptions& m, const std::string& format,
                   std::ostream& out) {
  const Networkd network = io::load_network(in.input, network_format(in.input_format));
  Matrix<double> lambda;
  if (m.family == "cycle3" && m.representers.empty()) {
    lambda = fast_lambda_cycle3(network, m.ratio);
  } else {
    MethodOptions fam = m;
    if (fam.family == "cycles" && !fam.max_len) fam.max_len = nonreciprocal_cycle_length(network.size());
    const FamilyChoice choice = choose_family(fam);
    lambda = lambda_family(*choice.family, network, budget_of(m));
  }
  const Networkd sym(unchecked, network.labels(), lambda);
  const std::string data =
      format == "json" ? io::network_to_json(sym).dump(2) + "\n" : io::network_to_csv(sym);
  emit(data, in.output, out);
  return kOk;
}

int cmd_normalize(const InputOptions& in, const std::string& zero_use, std::ostream& out) {
  const io::LabeledMatrix table = io::parse_matrix_csv(io::read_file(in.input), in.input);
  const Networkd network =
      io::normalize_uses_table(table.values, table.labels, io::parse_zero_use(zero_use));
  emit(io::network_to_csv(network), in.output, out);
  return kOk;
}

struct CheckOptions {
  std::string property;
  std::string other;
  std::vector<std::string> map;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  double alpha = 2.0;
  std::optional<double> delta;
  std::optional<double> lipschitz;
  Index nodes = 4;
};

// Trial i of a randomized check draws from seed + i, so any witness replays
// from its own seed.
CheckReport<double> run_check(const CheckOptions& c, const InputOptions& in,
                              const BuiltMethod& method) {
  const ClusteringMethod<double>& run = method.run;
  const double lipschitz = c.lipschitz.value_or(method.lipschitz);
  std::optional<Networkd> given;
  if (!in.input.empty()) given = io::load_network(in.input, network_format(in.input_format));
  std::optional<Networkd> other;
  if (!c.other.empty()) other = io::load_network(c.other, network_format(in.input_format));
  if (c.nodes < 2) throw Error(ErrorKind::InvalidSize, "--nodes must be at least 2");

  auto on_network = [&](const Networkd& n) -> CheckReport<double> {
    if (c.property == "excisive")
      return c.delta ? check_excisiveness(run, n, *c.delta) : check_excisiveness_sweep(run, n);
    if (c.property == "scale") return check_scale_preservation(run, n, c.alpha);
    if (c.property == "sandwich") return check_sandwich(run, n);
    return check_validity(run, n);
  };

  if (c.property == "transformation" && given) {
    if (!other) throw Error(ErrorKind::ParseError, "transformation check needs --other");
    if (c.map.size() != static_cast<std::size_t>(given->size()))
      throw Error(ErrorKind::NotReducing, "--map must name an image for every input node");
    std::vector<Index> phi;
    for (const auto& label : c.map) phi.push_back(other->index_of(label));
    return check_transformation_axiom(run, *given, *other, phi);
  }
  if (c.property == "stability" && given) {
    if (!other) throw Error(ErrorKind::ParseError, "stability check needs --other");
    return check_stability(run, *given, *other, lipschitz);
  }
  if (given && c.property != "value") return on_network(*given);

  CheckReport<double> total{c.property, true, 0, std::nullopt};
  for (std::size_t trial = 0; trial < c.trials && total.passed; ++trial) {
    const std::uint64_t seed = c.seed + trial;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> size(2, c.nodes);
    CheckReport<double> report;
    if (c.property == "value") {
      std::uniform_real_distribution<double> w(kRandomLow, kRandomHigh);
      const double a = w(rng), b = w(rng);
      report = check_value_axiom(run, a, b);
    } else if (c.property == "transformation") {
      const Index ny = std::uniform_int_distribution<Index>(1, c.nodes)(rng);
      const Index nx = std::uniform_int_distribution<Index>(ny, c.nodes)(rng);
      const auto instance = generate_reducing_pair<double>(seed, ny, nx);
      report = check_transformation_axiom(run, instance.nx, instance.ny, instance.phi);
    } else if (c.property == "stability") {
      const Networkd a = random_network<double>(rng, c.nodes);
      Matrix<double> perturbed = a.dissim();
      std::uniform_real_distribution<double> jitter(-1.0, 1.0);
      for (Index i = 0; i < a.size(); ++i)
        for (Index j = 0; j < a.size(); ++j)
          if (i != j) perturbed(i, j) = std::max(kRandomLow, perturbed(i, j) + jitter(rng));
      report = check_stability(run, a, validate_network(a.labels(), perturbed), lipschitz);
    } else {
      report = on_network(random_network<double>(rng, size(rng)));
    }
    if (!report.passed && report.witness) report.witness->seed = seed;
    total.absorb(report);
  }
  return total;
}

int cmd_check(const CheckOptions& c, const InputOptions& in, const MethodOptions& m,
              std::ostream& out) {
  const BuiltMethod method = build_method(m);
  const CheckReport<double> report = run_check(c, in, method);
  json doc = io::report_to_json(report);
  doc["method"] = method.description;
  if (in.input.empty() || c.property == "value") doc["seed"] = c.seed;
  emit(doc.dump(2) + "\n", in.output, out);
  return report.passed ? kOk : kPropertyFailed;
}

int cmd_validate(const InputOptions& in, const std::string& kind, std::ostream& out) {
  std::string summary;
  if (kind == "network") {
    const Networkd n = io::load_network(in.input, network_format(in.input_format));
    summary = "valid network with " + std::to_string(n.size()) + " nodes";
  } else if (kind == "ultrametric") {
    io::LabeledMatrix lm = io::parse_matrix_csv(io::read_file(in.input), in.input);
    const Ultrametricd u = validate_ultrametric(std::move(lm.labels), lm.values);
    summary = "valid ultrametric with " + std::to_string(u.size()) + " nodes";
  } else if (kind == "representers") {
    const RepresenterFamilyd family = io::load_representers(in.input);
    summary = "valid family of " + std::to_string(family.members().size()) +
              " representers, sep " + io::format_number(family.sep()) + ", d_max " +
              io::format_number(family.d_max());
  } else {
    const std::string text = io::read_file(in.input);
    const bool is_json = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                         text[text.find_first_not_of(" \t\r\n")] == '{';
    Dendrogramd d;
    if (is_json) {
      try {
        d = io::dendrogram_from_json(json::parse(text));
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, in.input + ": " + e.what());
      }
    } else {
      d = io::parse_newick(text);
    }
    summary = "valid dendrogram with " + std::to_string(d.leaves.size()) + " leaves and " +
              std::to_string(d.merges.size()) + " merges";
  }
  emit("ok: " + summary + "\n", in.output, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical clustering of directed networks", "dirclust"};
  app.require_subcommand(1);

  InputOptions in;
  MethodOptions method;

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a network and emit its dendrogram");
  std::string cluster_format = "newick", ultrametric_path;
  add_input_options(cluster_cmd, in);
  add_method_options(cluster_cmd, method);
  cluster_cmd->add_option("--format", cluster_format, "Output format")
      ->check(CLI::IsMember({"newick", "json", "csv"}));
  cluster_cmd->add_option("--ultrametric", ultrametric_path,
                          "Also write the ultrametric matrix (CSV) here");

  auto* cut_cmd = app.add_subcommand("cut", "Partition at a resolution");
  std::string cut_format = "json", ultrametric_input;
  double delta = 0.0;
  add_input_options(cut_cmd, in, false);
  add_method_options(cut_cmd, method);
  cut_cmd->add_option("--ultrametric-input", ultrametric_input,
                      "Cut this ultrametric (CSV) instead of clustering --input");
  cut_cmd->add_option("--delta", delta, "Resolution")->required();
  cut_cmd->add_option("--format", cut_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* distance_cmd = app.add_subcommand("distance", "Exact network distance between two networks");
  std::vector<std::string> distance_files;
  Index max_bits = kDefaultRelationBits;
  std::string distance_format = "auto", distance_output;
  distance_cmd->add_option("networks", distance_files, "Two network files")->expected(2)->required();
  distance_cmd->add_option("--input-format", distance_format)
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  distance_cmd->add_option("--max-bits", max_bits, "Cap on |X|*|Y| for exact enumeration");
  distance_cmd->add_option("--output,-o", distance_output);

  auto* sym_cmd = app.add_subcommand("symmetrize", "Emit the optimal-multiple matrix of a family");
  std::string sym_format = "csv";
  add_input_options(sym_cmd, in);
  add_method_options(sym_cmd, method);
  sym_cmd->add_option("--format", sym_format)->check(CLI::IsMember({"csv", "json"}));

  auto* norm_cmd = app.add_subcommand("normalize-uses", "Turn an input-output uses table into a network");
  std::string zero_use = "error";
  add_input_options(norm_cmd, in);
  norm_cmd->add_option("--zero-use", zero_use, "Off-diagonal zero uses: error | cap=VALUE");

  auto* check_cmd = app.add_subcommand("check", "Check an axiom or robustness property");
  CheckOptions check;
  add_input_options(check_cmd, in, false);
  add_method_options(check_cmd, method);
  check_cmd->add_option("--property", check.property, "Property to check")
      ->required()
      ->check(CLI::IsMember({"value", "transformation", "excisive", "scale", "stability",
                             "sandwich", "ultrametric"}));
  check_cmd->add_option("--other", check.other, "Second network (stability, transformation)");
  check_cmd->add_option("--map", check.map, "Image label in --other of each --input node");
  check_cmd->add_option("--seed", check.seed, "Seed for random instances");
  check_cmd->add_option("--trials", check.trials, "Number of random instances");
  check_cmd->add_option("--alpha", check.alpha, "Scale factor for the scale check");
  check_cmd->add_option("--delta", check.delta, "Single resolution for the excisiveness check");
  check_cmd->add_option("--lipschitz", check.lipschitz, "Stability constant L");
  check_cmd->add_option("--nodes", check.nodes, "Largest random network size");

  auto* validate_cmd = app.add_subcommand("validate", "Validate an input file");
  std::string kind = "network";
  add_input_options(validate_cmd, in);
  validate_cmd->add_option("--kind", kind)
      ->check(CLI::IsMember({"network", "ultrametric", "representers", "dendrogram"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    if (cluster_cmd->parsed()) return cmd_cluster(in, method, cluster_format, ultrametric_path, out);
    if (cut_cmd->parsed()) return cmd_cut(in, method, ultrametric_input, delta, cut_format, out);
    if (distance_cmd->parsed())
      return cmd_distance(distance_files, distance_format, max_bits, distance_output, out);
    if (sym_cmd->parsed()) return cmd_symmetrize(in, method, sym_format, out);
    if (norm_cmd->parsed()) return cmd_normalize(in, zero_use, out);
    if (check_cmd->parsed()) return cmd_check(check, in, method, out);
    if (validate_cmd->parsed()) return cmd_validate(in, kind, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kValidation;
}

}  // namespace dirclust::cli
