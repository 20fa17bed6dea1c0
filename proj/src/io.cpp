#include "agfit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace agfit {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw ParseError("failed writing " + path);
}

bool parse_int(const std::string& token, long long& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

DatasetManifest make_manifest(const std::string& name,
                              const AttributedGraph& g) {
  DatasetManifest m;
  m.name = name;
  m.node_count = g.node_count;
  m.edge_count = static_cast<long long>(g.edge_count());
  m.ordered_pair_count =
      static_cast<long long>(g.node_count) * g.node_count;
  m.positive_attribute_count = 0;
  for (std::uint8_t a : g.attributes) m.positive_attribute_count += a;
  return m;
}

AttributedGraph load_edge_list(const std::string& path, int node_count,
                               const std::vector<std::uint8_t>& attributes,
                               std::ostream* warnings) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  int max_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;  // blank line
    if (!(fields >> b) || (fields >> extra))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected exactly two node ids");
    long long u, v;
    if (!parse_int(a, u) || !parse_int(b, v) || u < 0 || v < 0)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": node ids must be non-negative integers");
    if (u == v)
      throw ParseError(path + ":" + std::to_string(line_no) + ": self loop " +
                       std::to_string(u));
    if (u > v) std::swap(u, v);
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_id = std::max(max_id, static_cast<int>(v));
  }

  int n = node_count;
  if (n < 0) n = static_cast<int>(attributes.size());
  if (n <= 0) n = max_id + 1;
  if (max_id >= n)
    throw ParseError(path + ": node id " + std::to_string(max_id) +
                     " exceeds declared node count " + std::to_string(n));

  std::sort(edges.begin(), edges.end());
  const auto unique_end = std::unique(edges.begin(), edges.end());
  const auto dropped = edges.end() - unique_end;
  if (dropped > 0 && warnings)
    *warnings << "warning: " << path << ": collapsed " << dropped
              << " duplicate edge(s)\n";
  edges.erase(unique_end, edges.end());

  std::vector<std::uint8_t> attrs = attributes;
  if (attrs.empty()) attrs.assign(static_cast<std::size_t>(n), 0);
  return AttributedGraph(n, std::move(edges), std::move(attrs));
}

std::vector<std::uint8_t> load_attributes(const std::string& path,
                                          int node_count) {
  std::istringstream in(read_file(path));
  std::vector<int> values(static_cast<std::size_t>(node_count), -1);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'node_id value'");
    long long id, value;
    if (!parse_int(a, id) || !parse_int(b, value))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected integers");
    if (id < 0 || id >= node_count)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": node id out of range");
    if (value != 0 && value != 1)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": attribute values must be 0 or 1");
    if (values[static_cast<std::size_t>(id)] != -1)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate attribute for node " + std::to_string(id));
    values[static_cast<std::size_t>(id)] = static_cast<int>(value);
  }
  std::vector<std::uint8_t> attrs(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) {
    if (values[static_cast<std::size_t>(i)] == -1)
      throw ParseError(path + ": missing attribute for node " +
                       std::to_string(i));
    attrs[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(values[static_cast<std::size_t>(i)]);
  }
  return attrs;
}

// ---------------------------------------------------------------------------
// GML subset parser.
// ---------------------------------------------------------------------------

namespace {

struct GmlToken {
  enum Kind { Key, Number, String, Open, Close, End } kind = End;
  std::string text;
  double number = 0.0;
};

class GmlLexer {
 public:
  explicit GmlLexer(const std::string& text) : text_(text) {}

  GmlToken next() {
    while (pos_ < text_.size() &&
           (std::isspace(static_cast<unsigned char>(text_[pos_])) != 0))
      ++pos_;
    if (pos_ >= text_.size()) return {GmlToken::End, "", 0.0};
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      return {GmlToken::Open, "[", 0.0};
    }
    if (c == ']') {
      ++pos_;
      return {GmlToken::Close, "]", 0.0};
    }
    if (c == '"') {
      std::string s;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') s += text_[pos_++];
      if (pos_ >= text_.size()) throw ParseError("unterminated GML string");
      ++pos_;
      return {GmlToken::String, s, 0.0};
    }
    std::string word;
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])) == 0 &&
           text_[pos_] != '[' && text_[pos_] != ']')
      word += text_[pos_++];
    double value = 0.0;
    const char* first = word.data();
    const char* last = word.data() + word.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last) return {GmlToken::Number, word, value};
    return {GmlToken::Key, word, 0.0};
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

// Skip a value (scalar or bracketed block) after an unrecognized key.
void gml_skip_value(GmlLexer& lex, const GmlToken& value) {
  if (value.kind != GmlToken::Open) return;
  int depth = 1;
  while (depth > 0) {
    const GmlToken t = lex.next();
    if (t.kind == GmlToken::End) throw ParseError("unbalanced GML brackets");
    if (t.kind == GmlToken::Open) ++depth;
    if (t.kind == GmlToken::Close) --depth;
  }
}

}  // namespace

AttributedGraph load_gml(const std::string& path, double value_threshold,
                         std::ostream* warnings) {
  const std::string text = read_file(path);
  GmlLexer lex(text);

  GmlToken t = lex.next();
  while (t.kind == GmlToken::Key && t.text != "graph") {
    gml_skip_value(lex, lex.next());
    t = lex.next();
  }
  if (t.kind != GmlToken::Key || t.text != "graph")
    throw ParseError(path + ": no graph block");
  if (lex.next().kind != GmlToken::Open)
    throw ParseError(path + ": expected '[' after graph");

  struct GmlNode {
    long long id = 0;
    bool has_id = false;
    double value = 0.0;
    bool has_value = false;
  };
  std::vector<GmlNode> nodes;
  std::vector<std::pair<long long, long long>> raw_edges;
  bool any_node_value = false;

  auto parse_block = [&lex, &path](auto&& handle_field) {
    if (lex.next().kind != GmlToken::Open)
      throw ParseError(path + ": expected '['");
    while (true) {
      const GmlToken key = lex.next();
      if (key.kind == GmlToken::Close) break;
      if (key.kind != GmlToken::Key)
        throw ParseError(path + ": malformed block");
      const GmlToken value = lex.next();
      if (!handle_field(key.text, value)) gml_skip_value(lex, value);
    }
  };

  while (true) {
    t = lex.next();
    if (t.kind == GmlToken::Close) break;
    if (t.kind == GmlToken::End)
      throw ParseError(path + ": unterminated graph block");
    if (t.kind != GmlToken::Key) throw ParseError(path + ": malformed graph");

    if (t.text == "directed") {
      const GmlToken v = lex.next();
      if (v.kind == GmlToken::Number && v.number != 0.0)
        throw ParseError(path + ": directed graphs are not supported");
      continue;
    }
    if (t.text == "node") {
      GmlNode node;
      parse_block([&node](const std::string& key, const GmlToken& v) {
        if (key == "id" && v.kind == GmlToken::Number) {
          node.id = static_cast<long long>(v.number);
          node.has_id = true;
          return true;
        }
        if (key == "value" && v.kind == GmlToken::Number) {
          node.value = v.number;
          node.has_value = true;
          return true;
        }
        return v.kind != GmlToken::Open;  // skip nested blocks
      });
      if (!node.has_id) throw ParseError(path + ": node without id");
      any_node_value = any_node_value || node.has_value;
      nodes.push_back(node);
      continue;
    }
    if (t.text == "edge") {
      long long source = 0, target = 0;
      bool has_source = false, has_target = false;
      parse_block([&](const std::string& key, const GmlToken& v) {
        if (key == "source" && v.kind == GmlToken::Number) {
          source = static_cast<long long>(v.number);
          has_source = true;
          return true;
        }
        if (key == "target" && v.kind == GmlToken::Number) {
          target = static_cast<long long>(v.number);
          has_target = true;
          return true;
        }
        return v.kind != GmlToken::Open;
      });
      if (!has_source || !has_target)
        throw ParseError(path + ": edge without source/target");
      raw_edges.emplace_back(source, target);
      continue;
    }
    gml_skip_value(lex, lex.next());
  }

  if (nodes.empty()) throw ParseError(path + ": graph has no nodes");

  std::map<long long, int> index_of;
  for (const GmlNode& node : nodes) {
    if (index_of.count(node.id))
      throw ParseError(path + ": duplicate node id " + std::to_string(node.id));
    index_of[node.id] = static_cast<int>(index_of.size());
  }

  std::vector<std::uint8_t> attrs(nodes.size(), 0);
  if (any_node_value) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].has_value)
        throw ParseError(path + ": node " + std::to_string(nodes[i].id) +
                         " is missing the value attribute");
      attrs[i] = nodes[i].value > value_threshold ? 1 : 0;
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (const auto& [source, target] : raw_edges) {
    const auto su = index_of.find(source);
    const auto sv = index_of.find(target);
    if (su == index_of.end() || sv == index_of.end())
      throw ParseError(path + ": edge references unknown node");
    int u = su->second, v = sv->second;
    if (u == v)
      throw ParseError(path + ": self loop at node " + std::to_string(source));
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());
  const auto unique_end = std::unique(edges.begin(), edges.end());
  const auto dropped = edges.end() - unique_end;
  if (dropped > 0 && warnings)
    *warnings << "warning: " << path << ": collapsed " << dropped
              << " duplicate edge(s)\n";
  edges.erase(unique_end, edges.end());

  return AttributedGraph(static_cast<int>(nodes.size()), std::move(edges),
                         std::move(attrs));
}

void save_edge_list(const std::string& path, const AttributedGraph& g) {
  std::ostringstream out;
  out << "# " << g.node_count << " nodes, " << g.edge_count() << " edges\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
  write_file(path, out.str());
}

void save_attributes(const std::string& path, const AttributedGraph& g) {
  std::ostringstream out;
  for (int i = 0; i < g.node_count; ++i)
    out << i << " " << static_cast<int>(g.attributes[i]) << "\n";
  write_file(path, out.str());
}

void save_gml(const std::string& path, const AttributedGraph& g) {
  std::ostringstream out;
  out << "graph [\n  directed 0\n";
  for (int i = 0; i < g.node_count; ++i)
    out << "  node [\n    id " << i << "\n    value "
        << static_cast<int>(g.attributes[i]) << "\n  ]\n";
  for (const auto& [u, v] : g.edges)
    out << "  edge [\n    source " << u << "\n    target " << v << "\n  ]\n";
  out << "]\n";
  write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// Model files.
// ---------------------------------------------------------------------------

void save_model(const std::string& path, const EdgeProbabilityModel& model) {
  nlohmann::json j;
  j["n"] = model.node_count;
  switch (model.kind) {
    case ModelKind::Er: {
      j["kind"] = "er";
      j["params"] = {{"p", std::get<ErParams>(model.params).p}};
      break;
    }
    case ModelKind::Sbm: {
      const auto& sbm = std::get<SbmParams>(model.params);
      j["kind"] = "sbm";
      j["params"] = {{"k", sbm.k},
                     {"assignment", sbm.assignment},
                     {"theta", sbm.theta}};
      break;
    }
    case ModelKind::Gf: {
      const auto& gf = std::get<GfParams>(model.params);
      j["kind"] = "gf";
      j["params"] = {{"alpha", gf.alpha},       {"beta", gf.beta},
                     {"gamma", gf.gamma},       {"iterations", gf.iterations},
                     {"truncation", gf.truncation}, {"seed", gf.seed}};
      break;
    }
    case ModelKind::Custom: {
      j["kind"] = "custom";
      j["params"] = {{"prob", model.prob}};
      break;
    }
  }
  write_file(path, j.dump(2) + "\n");
}

EdgeProbabilityModel load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json& params = j.at("params");
    if (kind == "er") return er_model(n, params.at("p").get<double>());
    if (kind == "sbm") {
      SbmParams sbm;
      sbm.k = params.at("k").get<int>();
      sbm.assignment = params.at("assignment").get<std::vector<int>>();
      sbm.theta = params.at("theta").get<std::vector<double>>();
      if (static_cast<int>(sbm.assignment.size()) != n ||
          sbm.theta.size() != static_cast<std::size_t>(sbm.k) * sbm.k)
        throw ParseError(path + ": inconsistent sbm model");
      EdgeProbabilityModel m;
      m.node_count = n;
      m.kind = ModelKind::Sbm;
      m.prob.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int jj = i + 1; jj < n; ++jj)
          m.set_p(i, jj,
                  sbm.theta[static_cast<std::size_t>(sbm.assignment[i]) * sbm.k +
                            sbm.assignment[jj]]);
      m.params = std::move(sbm);
      m.validate();
      return m;
    }
    if (kind == "gf") {
      GfParams gf;
      gf.alpha = params.at("alpha").get<double>();
      gf.beta = params.at("beta").get<double>();
      gf.gamma = params.at("gamma").get<double>();
      gf.iterations = params.at("iterations").get<long long>();
      gf.truncation = params.at("truncation").get<int>();
      gf.seed = params.at("seed").get<std::uint64_t>();
      return gf_model(gf, n);
    }
    if (kind == "custom")
      return custom_model(n, params.at("prob").get<std::vector<double>>());
    throw ParseError(path + ": unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV output.
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_rho_csv(std::ostream& os, const RhoDistribution& dist) {
  os << "trial,rho\n";
  for (std::size_t t = 0; t < dist.rho.size(); ++t)
    os << t << "," << format_double(dist.rho[t]) << "\n";
}

void write_landscape_csv(std::ostream& os,
                         const std::vector<LandscapeRow>& rows) {
  os << "m11,m01,phi,sampling_probability,feasible\n";
  for (const LandscapeRow& row : rows)
    os << row.m11 << "," << row.m01 << "," << format_double(row.phi) << ","
       << format_double(row.sampling_probability) << ","
       << (row.feasible ? 1 : 0) << "\n";
}

void write_select_k_csv(std::ostream& os, const std::vector<int>& ks,
                        const std::vector<double>& probability_lower_bound) {
  os << "k,probability_lower_bound\n";
  for (std::size_t i = 0; i < ks.size(); ++i)
    os << ks[i] << "," << format_double(probability_lower_bound[i]) << "\n";
}

void write_report_csv(std::ostream& os, const RepresentationReport& report) {
  os << "rho_in,epsilon,delta,probability_lower_bound,tau1,tau3,mu,"
        "rho_ceiling,vacuous\n";
  os << format_double(report.rho_in) << "," << format_double(report.epsilon)
     << "," << format_double(report.delta) << ","
     << format_double(report.probability_lower_bound) << ","
     << format_double(report.tau1) << "," << format_double(report.tau3) << ","
     << format_double(report.mu) << "," << format_double(report.rho_ceiling())
     << "," << (report.vacuous ? 1 : 0) << "\n";
}

void write_verdicts_csv(std::ostream& os,
                        const std::vector<BoundednessVerdict>& verdicts) {
  os << "param_index,pi,same_label_rate,n,kl,n_kl,triggered,regime,ceiling\n";
  for (const BoundednessVerdict& v : verdicts) {
    const char* regime = v.regime == BoundRegime::Below   ? "below"
                         : v.regime == BoundRegime::Above ? "above"
                                                          : "none";
    os << v.param_index << "," << format_double(v.pi) << ","
       << format_double(v.same_label_rate) << "," << v.n << ","
       << format_double(v.kl) << ","
       << format_double(static_cast<double>(v.n) * v.kl) << ","
       << (v.triggered ? 1 : 0) << "," << regime << ","
       << format_double(v.ceiling) << "\n";
  }
}

}  // namespace agfit
