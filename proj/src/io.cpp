#include "pcl/io.hpp"

#include <fstream>
#include <sstream>

#include "pcl/errors.hpp"

namespace pcl::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::size_t as_index(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::uint8_t as_bit(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected 0 or 1");
  auto v = j.get<std::int64_t>();
  if (v != 0 && v != 1) fail(field, "expected 0 or 1");
  return static_cast<std::uint8_t>(v);
}

double as_double(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

std::vector<std::size_t> index_list(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_index(j[i], idx(field, i)));
  return out;
}

Example example_from(const Json& j, const std::string& field, std::size_t n) {
  if (!j.is_array() || j.size() != 2) fail(field, "expected [x, y]");
  Example e{as_index(j[0], idx(field, 0)), as_bit(j[1], idx(field, 1))};
  if (e.x >= n) fail(idx(field, 0), "point outside the domain");
  return e;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

ClassFile class_from_json(const Json& j) {
  const Json& nj = need(j, "domain_size", "");
  std::size_t n = as_index(nj, "domain_size");
  if (n == 0 || n > kMaxDomain) fail("domain_size", "must be in 1..64");
  const Json& cj = need(j, "concepts", "");
  if (!cj.is_array() || cj.empty()) fail("concepts", "expected a nonempty array");
  std::vector<PartialConcept> concepts;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    std::string f = idx("concepts", i);
    if (!cj[i].is_string()) fail(f, "expected a string over 0, 1, *");
    auto s = cj[i].get<std::string>();
    if (s.size() != n) fail(f, "length differs from domain_size");
    try {
      concepts.push_back(PartialConcept::from_string(s));
    } catch (const Error& e) {
      fail(f, e.what());
    }
  }
  ClassFile out{PartialConceptClass(n, std::move(concepts)), {}};
  if (auto it = j.find("names"); it != j.end()) {
    if (!it->is_array() || it->size() != n) fail("names", "expected domain_size strings");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(*it)[i].is_string()) fail(idx("names", i), "expected a string");
      out.names.push_back((*it)[i].get<std::string>());
    }
  }
  return out;
}

Json to_json(const PartialConceptClass& cls, const std::vector<std::string>& names) {
  Json j;
  j["domain_size"] = cls.domain_size();
  j["concepts"] = cls.to_strings();
  if (!names.empty()) j["names"] = names;
  return j;
}

LabeledSample sample_from_json(const Json& j, std::size_t domain_size) {
  if (!j.is_array()) fail("sample", "expected an array of [x, y]");
  LabeledSample s;
  for (std::size_t i = 0; i < j.size(); ++i) s.push_back(example_from(j[i], idx("sample", i), domain_size));
  return s;
}

Json to_json(const LabeledSample& sample) {
  Json j = Json::array();
  for (const auto& e : sample) j.push_back({e.x, e.y});
  return j;
}

FiniteDistribution distribution_from_json(const Json& j, std::size_t domain_size) {
  const Json& aj = need(j, "atoms", "");
  if (!aj.is_array() || aj.empty()) fail("atoms", "expected a nonempty array");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    std::string f = idx("atoms", i);
    if (!aj[i].is_array() || aj[i].size() != 3) fail(f, "expected [x, y, \"p/q\"]");
    Json pair = Json::array({aj[i][0], aj[i][1]});
    Example e = example_from(pair, f, domain_size);
    Rational w;
    if (aj[i][2].is_string()) {
      try {
        w = parse_rational(aj[i][2].get<std::string>());
      } catch (const Error& err) {
        fail(idx(f, 2), err.what());
      }
    } else if (aj[i][2].is_number_integer()) {
      w = Rational(aj[i][2].get<std::int64_t>());
    } else {
      fail(idx(f, 2), "expected a rational string \"p/q\"");
    }
    atoms.push_back({e, w});
  }
  try {
    return FiniteDistribution(domain_size, std::move(atoms));
  } catch (const ContractViolation& e) {
    fail("atoms", e.what());
  }
}

Json to_json(const FiniteDistribution& p) {
  Json atoms = Json::array();
  for (const auto& a : p.atoms()) atoms.push_back({a.example.x, a.example.y, to_string(a.weight)});
  return Json{{"atoms", atoms}};
}

BicliqueInstance graph_from_json(const Json& j) {
  BicliqueInstance g;
  g.vertices = as_index(need(j, "vertices", ""), "vertices");
  const Json& ej = need(j, "edges", "");
  if (!ej.is_array()) fail("edges", "expected an array");
  for (std::size_t i = 0; i < ej.size(); ++i) {
    auto e = index_list(ej[i], idx("edges", i));
    if (e.size() != 2) fail(idx("edges", i), "expected [u, v]");
    g.edges.emplace_back(e[0], e[1]);
  }
  const Json& pj = need(j, "partition", "");
  if (!pj.is_array()) fail("partition", "expected an array");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    std::string f = idx("partition", i);
    if (!pj[i].is_array() || pj[i].size() != 2) fail(f, "expected [L, R]");
    g.partition.emplace_back(index_list(pj[i][0], idx(f, 0)), index_list(pj[i][1], idx(f, 1)));
  }
  return g;
}

Json to_json(const BicliqueInstance& g) {
  Json edges = Json::array(), part = Json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  for (const auto& [l, r] : g.partition) part.push_back({l, r});
  return Json{{"vertices", g.vertices}, {"edges", edges}, {"partition", part}};
}

CompressionOutput compression_from_json(const Json& j, std::size_t domain_size) {
  CompressionOutput c;
  const Json& sj = need(j, "subsample", "");
  if (!sj.is_array()) fail("subsample", "expected an array");
  for (std::size_t i = 0; i < sj.size(); ++i)
    c.subsample.push_back(example_from(sj[i], idx("subsample", i), domain_size));
  const Json& bj = need(j, "bits", "");
  if (!bj.is_string()) fail("bits", "expected a hex string");
  std::size_t len = as_index(need(j, "bit_length", ""), "bit_length");
  try {
    c.bits = bits_from_hex(bj.get<std::string>(), len);
  } catch (const ParseError& e) {
    fail("bits", e.what());
  }
  return c;
}

Json to_json(const CompressionOutput& c) {
  return Json{{"subsample", to_json(c.subsample)},
              {"bits", bits_to_hex(c.bits)},
              {"bit_length", c.bits.size()},
              {"size", c.size()}};
}

geometry::EuclideanDataset euclidean_from_json(const Json& j) {
  geometry::EuclideanDataset d;
  const Json& pj = need(j, "points", "");
  if (!pj.is_array() || pj.empty()) fail("points", "expected a nonempty array of vectors");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    std::string f = idx("points", i);
    if (!pj[i].is_array() || pj[i].empty()) fail(f, "expected a nonempty array of numbers");
    geometry::Vector v(static_cast<Eigen::Index>(pj[i].size()));
    for (std::size_t k = 0; k < pj[i].size(); ++k) v(static_cast<Eigen::Index>(k)) = as_double(pj[i][k], idx(f, k));
    if (i > 0 && v.size() != d.points[0].size()) fail(f, "dimension differs from points[0]");
    d.points.push_back(std::move(v));
  }
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array() || it->size() != d.points.size()) fail("labels", "expected one bit per point");
    for (std::size_t i = 0; i < it->size(); ++i) d.labels.push_back(as_bit((*it)[i], idx("labels", i)));
  }
  if (auto it = j.find("R"); it != j.end()) d.radius = as_double(*it, "R");
  if (auto it = j.find("gamma"); it != j.end()) d.gamma = as_double(*it, "gamma");
  try {
    d.validate();
  } catch (const ContractViolation& e) {
    fail("points", e.what());
  }
  return d;
}

Json to_json(const geometry::EuclideanDataset& d) {
  Json pts = Json::array();
  for (const auto& p : d.points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  return Json{{"points", pts}, {"labels", d.labels}, {"R", d.radius}, {"gamma", d.gamma}};
}

Json to_json(const LittlestoneTree& t) { return Json{{"depth", t.depth}, {"nodes", t.nodes}}; }

Json to_json(const DimensionReport& r) {
  Json j{{"measure", r.measure}, {"value", r.value}};
  if (r.shattered_set) j["shattered_set"] = *r.shattered_set;
  if (r.tree) j["tree"] = to_json(*r.tree);
  if (r.chain) j["chain"] = Json{{"points", r.chain->points}, {"concepts", r.chain->concepts}};
  return j;
}

Json to_json(const Disambiguation& d) {
  Json j{{"mode", d.mode == DisambiguationMode::Strong ? "strong" : "weak"},
         {"totals", to_json(d.totals.as_partial())}};
  if (!d.sources.empty()) {
    Json ext = Json::array();
    for (std::size_t i = 0; i < d.sources.size(); ++i) {
      Json e{{"source", d.sources[i].to_string()}, {"extension", d.extensions[i].to_string()}};
      if (i < d.updates.size()) e["updates"] = d.updates[i];
      ext.push_back(std::move(e));
    }
    j["extensions"] = std::move(ext);
  }
  Json stats = Json::object();
  for (const auto& [k, v] : d.stats) stats[k] = v;
  j["stats"] = std::move(stats);
  return j;
}

Json to_json(const OnlineTranscript& t) {
  Json rounds = Json::array();
  for (const auto& r : t.rounds)
    rounds.push_back({{"x", r.x}, {"p", r.probability}, {"prediction", r.prediction}, {"y", r.y}, {"mistake", r.mistake}});
  return Json{{"rounds", rounds},
              {"mistakes", t.mistakes},
              {"expected_mistakes", t.expected_mistakes},
              {"best_in_class", t.best_in_class},
              {"regret", t.regret},
              {"expected_regret", t.expected_regret}};
}

Json to_json(const MonteCarloStats& s) {
  return Json{{"mean", s.mean}, {"stddev", s.stddev}, {"trials", s.trials}, {"standard_error", s.standard_error()}};
}

Json hypothesis_json(const Hypothesis& h) {
  Json j{{"labels", h.materialize().to_string()}, {"composite", h.is_composite()}};
  if (h.is_composite()) j["parts"] = h.parts();
  return j;
}

}  // namespace pcl::io
