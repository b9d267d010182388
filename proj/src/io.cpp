#include "fliplab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fliplab {

using nlohmann::json;

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
      column_(column) {}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write to '" + path + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename onto '" + path + "'");
}

namespace {

// Serializer with doubles at 17 significant digits; scalar arrays stay on one line.
void emit(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const json& x) { return !x.is_object() && !x.is_array(); };
  switch (j.type()) {
    case json::value_t::number_float: out += format_double(j.get<double>()); return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  " + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (std::all_of(j.begin(), j.end(), scalar)) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          emit(j[k], out, 0);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad + "  ";
        emit(j[k], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string dump(const json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse(const std::string& text, const std::string& source, std::size_t line_offset = 0) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(source, line + line_offset, col, e.what());
  }
}

// Field access that reports structural errors against the source.
struct Reader {
  std::string source;
  std::size_t line = 1;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, 1, what); }

  const json& field(const json& j, const char* key) const {
    if (!j.is_object()) fail("expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
  }
  template <class T>
  T get(const json& j, const char* key) const {
    return as<T>(field(j, key), key);
  }
  template <class T>
  T as(const json& v, const std::string& what) const {
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      fail("field '" + what + "': " + e.what());
    }
  }
  double number(const json& v, const std::string& what) const {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      double x = 0;
      auto r = std::from_chars(s.data(), s.data() + s.size(), x);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail("field '" + what + "': not a decimal '" + s + "'");
      return x;
    }
    if (!v.is_number()) fail("field '" + what + "': expected a number");
    return v.get<double>();
  }
  const json& array(const json& j, const char* key) const {
    const json& v = field(j, key);
    if (!v.is_array()) fail(std::string("field '") + key + "' must be an array");
    return v;
  }
};

template <class F>
auto guarded(const Reader& r, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

json move_json(const Move& m) { return m.is_two() ? json::array({m.a, m.b}) : json::array({m.a}); }

Move move_from(const Reader& r, const json& v) {
  if (!v.is_array() || v.empty() || v.size() > 2) r.fail("a move is [u] or [u, v]");
  const auto a = r.as<NodeId>(v[0], "move");
  if (v.size() == 1) return Move::one(a);
  const auto b = r.as<NodeId>(v[1], "move");
  if (a == b) r.fail("a 2-move needs two distinct nodes");
  return Move::two(a, b);
}

json window_json(Window w) { return {{"start", w.start}, {"length", w.length}}; }
Window window_from(const Reader& r, const json& v) {
  return Window{r.get<std::size_t>(v, "start"), r.get<std::size_t>(v, "length")};
}

json diagnostic_json(const Diagnostic& d) { return {{"stage", d.stage}, {"message", d.message}}; }

json moves_json(const MoveSequence& s) {
  json a = json::array();
  for (const Move& m : s) a.push_back(move_json(m));
  return a;
}

json certificate_json(const TriangularCertificate& c) {
  json j;
  j["window"] = window_json(c.window);
  json items = json::array(), vectors = json::array();
  for (std::size_t k = 0; k < c.items.size(); ++k) {
    const auto& it = c.items[k];
    items.push_back({{"kind", to_string(it.kind)},
                     {"steps", it.steps},
                     {"nodes", it.nodes},
                     {"coefficients", it.coefficients},
                     {"witness", {it.witness.lo, it.witness.hi}}});
    json entries = json::array();
    for (const auto& [e, x] : it.vector.entries()) entries.push_back({e.lo, e.hi, x});
    const std::string label = k < c.matrix.col_labels.size() ? c.matrix.col_labels[k] : to_string(it.kind);
    vectors.push_back({{"label", label}, {"entries", entries}});
  }
  j["items"] = items;
  j["vectors"] = vectors;
  json rows = json::array();
  for (std::size_t r = 0; r < c.matrix.rows; ++r) {
    json row = json::array();
    for (std::size_t col = 0; col < c.matrix.cols; ++col) row.push_back(c.matrix.at(r, col));
    rows.push_back(row);
  }
  j["matrix"] = {{"rows", c.matrix.row_labels}, {"cols", c.matrix.col_labels}, {"data", rows}};
  j["rank"] = c.rank;
  if (c.stopped) j["stopped"] = diagnostic_json(*c.stopped);
  return j;
}

TriangularCertificate certificate_from(const Reader& r, const json& j) {
  TriangularCertificate c;
  c.window = window_from(r, r.field(j, "window"));
  const json& items = r.array(j, "items");
  const json& vectors = r.array(j, "vectors");
  if (items.size() != vectors.size()) r.fail("items and vectors differ in length");
  for (std::size_t k = 0; k < items.size(); ++k) {
    CertificateItem it;
    it.kind = guarded(r, [&] { return parse_certificate_kind(r.get<std::string>(items[k], "kind")); });
    it.steps = r.get<std::vector<std::size_t>>(items[k], "steps");
    it.nodes = r.get<std::vector<NodeId>>(items[k], "nodes");
    it.coefficients = r.get<std::vector<int>>(items[k], "coefficients");
    const auto wit = r.get<std::vector<NodeId>>(items[k], "witness");
    if (wit.size() != 2 || wit[0] == wit[1]) r.fail("witness must be two distinct nodes");
    it.witness = EdgeKey::of(wit[0], wit[1]);
    for (const json& e : r.array(vectors[k], "entries")) {
      const auto t = r.as<std::vector<std::int64_t>>(e, "entries");
      if (t.size() != 3 || t[0] == t[1]) r.fail("vector entries are [u, v, x] with u != v");
      it.vector.add(EdgeKey::of(static_cast<NodeId>(t[0]), static_cast<NodeId>(t[1])), t[2]);
    }
    c.items.push_back(std::move(it));
  }
  const json& m = r.field(j, "matrix");
  c.matrix.row_labels = r.get<std::vector<std::string>>(m, "rows");
  c.matrix.col_labels = r.get<std::vector<std::string>>(m, "cols");
  const auto data = r.get<std::vector<std::vector<std::int64_t>>>(m, "data");
  c.matrix.rows = data.size();
  c.matrix.cols = data.empty() ? 0 : data[0].size();
  for (const auto& row : data) {
    if (row.size() != c.matrix.cols) r.fail("matrix rows differ in length");
    c.matrix.data.insert(c.matrix.data.end(), row.begin(), row.end());
  }
  c.rank = r.get<std::size_t>(j, "rank");
  if (j.contains("stopped")) {
    const json& s = j["stopped"];
    c.stopped = Diagnostic{r.get<std::string>(s, "stage"), r.get<std::string>(s, "message")};
  }
  return c;
}

json params_json(const AnalysisParams& p) {
  json j = {{"delta", p.delta},
            {"t_low", p.t_low},
            {"t_high", p.t_high},
            {"d_min", p.d_min},
            {"one_move_frac", p.one_move_frac},
            {"bucket_base", p.bucket_base},
            {"min_occurrences", p.min_occurrences},
            {"ledger_cap_divisor", p.ledger_cap_divisor}};
  j["cycle_ledger_cap"] = p.cycle_ledger_cap ? json(*p.cycle_ledger_cap) : json(nullptr);
  return j;
}

json edges_json(const std::vector<AuxEdge>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back({e.e.lo, e.e.hi, e.step});
  return a;
}

}  // namespace

std::string instance_to_json(const EdgeWeights& w) {
  json edges = json::array();
  for (std::size_t k = 0; k < edge_count(w.n()); ++k) {
    const EdgeKey e = edge_at(w.n(), k);
    edges.push_back({e.lo, e.hi, w.at(e)});
  }
  return dump({{"n", w.n()}, {"edges", edges}});
}

EdgeWeights instance_from_json(const std::string& text, const std::string& source) {
  const json j = parse(text, source);
  Reader r{source};
  const auto n = r.get<std::size_t>(j, "n");
  const json& edges = r.array(j, "edges");
  return guarded(r, [&] {
    EdgeWeights w(n);
    std::vector<char> seen(edge_count(n), 0);
    for (const json& e : edges) {
      if (!e.is_array() || e.size() != 3) r.fail("edges are [u, v, weight]");
      const auto u = r.as<NodeId>(e[0], "edges"), v = r.as<NodeId>(e[1], "edges");
      if (u == v || u < 0 || v < 0 || static_cast<std::size_t>(std::max(u, v)) >= n) {
        r.fail("edge (" + std::to_string(u) + "," + std::to_string(v) + ") is not a pair of distinct nodes below n");
      }
      const EdgeKey key = EdgeKey::of(u, v);
      auto& s = seen[edge_index(n, key)];
      if (s) r.fail("edge " + edge_label(key) + " listed twice");
      s = 1;
      w.set(key, r.number(e[2], "edges"));
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) r.fail("instance must list all n(n-1)/2 edges");
    return w;
  });
}

std::string model_to_json(const PerturbationModel& m) {
  json means = json::array();
  for (const auto& [e, x] : m.means) means.push_back({e.lo, e.hi, x});
  return dump({{"n", m.n}, {"family", to_string(m.family)}, {"phi", m.phi}, {"means", means}, {"seed", m.seed}});
}

PerturbationModel model_from_json(const std::string& text, const std::string& source) {
  const json j = parse(text, source);
  Reader r{source};
  PerturbationModel m;
  m.n = r.get<std::size_t>(j, "n");
  m.family = guarded(r, [&] { return parse_noise_family(r.get<std::string>(j, "family")); });
  m.phi = r.number(r.field(j, "phi"), "phi");
  m.seed = r.get<std::uint64_t>(j, "seed");
  if (j.contains("means")) {
    for (const json& e : r.array(j, "means")) {
      if (!e.is_array() || e.size() != 3) r.fail("means are [u, v, m]");
      const auto u = r.as<NodeId>(e[0], "means"), v = r.as<NodeId>(e[1], "means");
      if (u == v || u < 0 || v < 0 || static_cast<std::size_t>(std::max(u, v)) >= m.n) r.fail("mean for an invalid pair");
      m.means[EdgeKey::of(u, v)] = r.number(e[2], "means");
    }
  }
  return m;
}

std::string trace_to_jsonl(const Trace& t) {
  json header = {{"n", t.n},
                 {"gamma0", t.gamma0.to_vector()},
                 {"engine", to_string(t.engine)},
                 {"rule", t.rule},
                 {"seed", t.seed},
                 {"status", to_string(t.status)}};
  std::string out = header.dump() + "\n";
  for (const Step& s : t.steps) {
    out += "{\"move\":" + move_json(s.move).dump() + ",\"delta\":" + format_double(s.delta) + "}\n";
  }
  return out;
}

Trace trace_from_jsonl(const std::string& text, const std::string& source) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = parse(line, source, lineno - 1);
    Reader r{source, lineno};
    if (!have_header) {
      t.n = r.get<std::size_t>(j, "n");
      auto g = r.get<std::vector<int>>(j, "gamma0");
      if (g.size() != t.n) r.fail("gamma0 has " + std::to_string(g.size()) + " entries, expected n");
      t.gamma0 = guarded(r, [&] { return Configuration(std::move(g)); });
      t.engine = guarded(r, [&] { return parse_engine(r.get<std::string>(j, "engine")); });
      t.rule = r.get<std::string>(j, "rule");
      guarded(r, [&] { return PivotRule::parse(t.rule); });
      t.seed = r.get<std::uint64_t>(j, "seed");
      if (j.contains("status")) t.status = guarded(r, [&] { return parse_status(r.get<std::string>(j, "status")); });
      have_header = true;
      continue;
    }
    const Move m = move_from(r, r.field(j, "move"));
    if (static_cast<std::size_t>(m.max_node()) >= t.n || m.a < 0) r.fail("move names a node outside 0..n-1");
    t.steps.push_back({m, r.number(r.field(j, "delta"), "delta")});
  }
  if (!have_header) throw ParseError(source, lineno + 1, 1, "missing header line");
  return t;
}

std::string bfop_to_json(const BFOPInstance& inst) {
  json fs = json::array(), us = json::array();
  for (const auto& f : inst.functions) {
    fs.push_back({{"args", {f.x, f.y}}, {"table", f.table}, {"weight", f.weight}});
  }
  for (const auto& f : inst.unary) us.push_back({{"arg", f.x}, {"table", f.table}, {"weight", f.weight}});
  return dump({{"n", inst.n}, {"d", inst.d}, {"functions", fs}, {"unary", us}});
}

BFOPInstance bfop_from_json(const std::string& text, const std::string& source) {
  const json j = parse(text, source);
  Reader r{source};
  BFOPInstance inst;
  inst.n = r.get<std::size_t>(j, "n");
  inst.d = r.get<std::int64_t>(j, "d");
  for (const json& f : r.array(j, "functions")) {
    const auto args = r.get<std::vector<NodeId>>(f, "args");
    const auto table = r.get<std::vector<std::int64_t>>(f, "table");
    if (args.size() != 2) r.fail("function args must be [i, j]");
    if (table.size() != 4) r.fail("function table must have 4 entries");
    BinaryFunction b{args[0], args[1], {table[0], table[1], table[2], table[3]}, r.number(r.field(f, "weight"), "weight")};
    inst.functions.push_back(b);
  }
  if (j.contains("unary")) {
    for (const json& f : r.array(j, "unary")) {
      const auto table = r.get<std::vector<std::int64_t>>(f, "table");
      if (table.size() != 2) r.fail("unary table must have 2 entries");
      inst.unary.push_back({r.get<NodeId>(f, "arg"), {table[0], table[1]}, r.number(r.field(f, "weight"), "weight")});
    }
  }
  guarded(r, [&] {
    inst.validate();
    return 0;
  });
  return inst;
}

std::string certificate_to_json(const TriangularCertificate& c) { return dump(certificate_json(c)); }

TriangularCertificate certificate_from_json(const std::string& text, const std::string& source) {
  const json j = parse(text, source);
  return certificate_from(Reader{source}, j);
}

std::string report_to_json(const AnalysisReport& rep) {
  json j;
  j["case"] = to_string(rep.kind);
  j["params"] = params_json(rep.params);
  j["sequence_length"] = rep.sequence_length;
  j["one_move_fraction"] = rep.one_move_fraction;
  j["window"] = window_json(rep.certificate.window);
  j["window_moves"] = moves_json(rep.window_moves);
  j["rank"] = rep.rank;
  j["ratio"] = rep.ratio;
  j["certificate"] = certificate_json(rep.certificate);
  json stages = json::object();
  if (rep.arcs) {
    const auto& a = *rep.arcs;
    json buckets = json::array();
    for (const auto& [b, c] : a.buckets) buckets.push_back({b, c});
    stages["arcs"] = {{"buckets", buckets}, {"bucket", a.bucket}, {"window", window_json(a.window)}, {"v2", a.v2}};
  }
  if (rep.selection) {
    const auto& s = *rep.selection;
    json hist = json::array();
    for (const auto& [ell, c] : s.ell_histogram) hist.push_back({ell, c});
    stages["selection"] = {{"found", s.found},        {"window", window_json(s.window)}, {"ell", s.ell},
                           {"length_two_moves", s.length}, {"qualifying", s.qualifying},     {"ell_histogram", hist}};
  }
  if (rep.cycles) {
    const auto& h = *rep.cycles;
    stages["auxiliary_graph"] = {{"nodes", h.aux.nodes.size()}, {"edges", h.aux.edges.size()}};
    stages["core"] = {{"v1", h.core.v1},
                      {"v2", h.core.v2},
                      {"v_low", h.core.v_low},
                      {"v_high", h.core.v_high},
                      {"crossing_edges", h.core.eprime.size()},
                      {"low_incident_edges", h.core.low_incident},
                      {"t_high_prime", h.core.t_high_prime}};
    stages["signs"] = {{"majority", to_string(h.signs.majority)},
                       {"same", h.signs.same.size()},
                       {"different", h.signs.different.size()}};
    stages["two_cycles"] = {{"d", h.two_cycles.d},
                            {"h_star", edges_json(h.two_cycles.h_star)},
                            {"certificate", certificate_json(h.two_cycles.certificate)}};
    json hs = json::array();
    for (const auto& s : h.stages) {
      hs.push_back({{"ledger_size", s.ledger_size},
                    {"split_nodes", s.split_nodes},
                    {"split_edges", s.split_edges},
                    {"pruned_nodes", s.pruned_nodes},
                    {"pruned_edges", s.pruned_edges}});
    }
    stages["harvest"] = hs;
    stages["tree_certificate"] = certificate_json(h.certificate);
  }
  j["stages"] = stages;
  json diags = json::array();
  for (const auto& d : rep.diagnostics) diags.push_back(diagnostic_json(d));
  j["diagnostics"] = diags;
  return dump(j);
}

ReportFile report_from_json(const std::string& text, const std::string& source) {
  const json j = parse(text, source);
  Reader r{source};
  ReportFile f;
  f.kind = r.get<std::string>(j, "case");
  f.window = window_from(r, r.field(j, "window"));
  for (const json& m : r.array(j, "window_moves")) f.window_moves.push_back(move_from(r, m));
  f.certificate = certificate_from(r, r.field(j, "certificate"));
  f.rank = r.get<std::size_t>(j, "rank");
  f.ratio = r.number(r.field(j, "ratio"), "ratio");
  return f;
}

}  // namespace fliplab
