// pcl: command-line harness for partial concept classes.
// Exit codes: 0 success, 1 a check failed, 2 usage or input error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/experiments.hpp"
#include "pcl/geometry.hpp"
#include "pcl/io.hpp"
#include "pcl/learners.hpp"
#include "pcl/online.hpp"

using pcl::io::Json;

namespace {

struct UsageError : pcl::Error {
  using Error::Error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("PCL_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  auto v = std::strtoull(env, &end, 0);
  if (*end) throw UsageError("PCL_SEED is not an integer: '" + std::string(env) + "'");
  return v;
}

void emit(const Json& j, const std::string& out) {
  std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    pcl::io::write_text_file(out, text);
}

pcl::PartialConceptClass load_class(const std::string& path) {
  return pcl::io::class_from_json(pcl::io::read_json_file(path)).cls;
}

struct Options {
  std::uint64_t seed = 0;
  std::string input, sample, out, measure = "vc", mode, algo, graph, data, table, grid_list;
  bool witness = false;
  double eps = 0.1, delta = 0.05, gamma = 1, radius = 1;
  std::size_t horizon = 10, depth = 1, trials = 1000, n = 20, m = 5, k = 0, grid = 5;
  std::size_t exp_trials = 0;
  std::vector<std::string> params;
  std::string experiment;
};

int cmd_dim(const Options& o) {
  auto cls = load_class(o.input);
  emit(pcl::io::to_json(pcl::compute_dimension(cls, o.measure, o.witness)), o.out);
  return 0;
}

int cmd_learn(const Options& o) {
  auto cls = load_class(o.input);
  auto sample = pcl::io::sample_from_json(pcl::io::read_json_file(o.sample), cls.domain_size());
  Json j{{"mode", o.mode}};
  if (o.mode == "realizable") {
    auto r = pcl::pac_learn_realizable(cls, sample, o.eps, o.delta);
    j["hypothesis"] = pcl::io::hypothesis_json(r.hypothesis);
    j["plan"] = {{"vc", r.plan.vc}, {"batches", r.plan.batches}, {"batch_size", r.plan.batch_size},
                 {"validation", r.plan.validation}, {"required", r.plan.required}};
    j["chosen"] = r.chosen;
  } else if (o.mode == "agnostic") {
    pcl::BoostOptions bo;
    bo.seed = o.seed;
    auto r = pcl::agnostic_learn(cls, sample, o.delta, bo);
    j["hypothesis"] = pcl::io::hypothesis_json(r.hypothesis);
    j["report"] = {{"empirical_error", pcl::to_string(r.report.empirical_error)},
                   {"class_error", pcl::to_string(r.report.class_error)},
                   {"realizable_indices", r.report.realizable_indices},
                   {"compression_size", r.report.compression_size},
                   {"constant", r.report.constant},
                   {"bound", r.report.bound}};
  } else if (o.mode == "compress") {
    pcl::BoostOptions bo;
    bo.seed = o.seed;
    auto r = pcl::alpha_boost_compress(cls, sample, bo);
    j["compression"] = pcl::io::to_json(r.compression);
    j["rounds"] = r.rounds;
    j["k"] = r.k;
    j["round_cap"] = r.round_cap;
    j["consistent"] = pcl::empirical_error(pcl::reconstruct(cls, r.compression), sample) == 0;
  } else if (o.mode == "ld-compress") {
    auto c = pcl::ld_compress(cls, sample);
    j["compression"] = pcl::io::to_json(c);
    j["consistent"] = pcl::empirical_error(pcl::reconstruct(cls, c), sample) == 0;
  } else {
    throw UsageError("unknown learn mode '" + o.mode + "'");
  }
  emit(j, o.out);
  return 0;
}

int cmd_online(const Options& o) {
  auto cls = load_class(o.input);
  Json j{{"mode", o.mode}};
  if (o.mode == "soa" || o.mode == "agnostic") {
    if (o.sample.empty()) throw UsageError("--sequence is required for this mode");
    auto seq = pcl::io::sample_from_json(pcl::io::read_json_file(o.sample), cls.domain_size());
    pcl::Rng rng(o.seed);
    std::unique_ptr<pcl::OnlineLearner> learner;
    if (o.mode == "soa")
      learner = std::make_unique<pcl::SoaLearner>(cls);
    else
      learner = pcl::agnostic_online_learn(cls, seq.size());
    j["transcript"] = pcl::io::to_json(pcl::play(*learner, cls, seq, rng));
  } else if (o.mode == "adversary-mistake") {
    pcl::SoaLearner soa(cls);
    auto tree = pcl::littlestone_tree(cls, o.depth);
    j["tree"] = pcl::io::to_json(tree);
    j["soa"] = pcl::io::to_json(pcl::mistake_game(soa, tree, o.trials, o.seed));
    pcl::ConstantLearner zero(0);
    j["constant-0"] = pcl::io::to_json(pcl::mistake_game(zero, tree, o.trials, o.seed));
  } else if (o.mode == "adversary-regret") {
    auto adv = pcl::regret_adversary(cls, o.depth, o.horizon);
    pcl::ConstantLearner zero(0);
    pcl::FollowTheLeaderLearner ftl(cls);
    j["horizon"] = o.horizon;
    j["depth"] = o.depth;
    j["constant-0"] = pcl::io::to_json(pcl::regret_game(zero, cls, adv, o.trials, o.seed));
    j["follow-the-leader"] = pcl::io::to_json(pcl::regret_game(ftl, cls, adv, o.trials, o.seed));
  } else {
    throw UsageError("unknown online mode '" + o.mode + "'");
  }
  emit(j, o.out);
  return 0;
}

int cmd_disambiguate(const Options& o) {
  auto cls = load_class(o.input);
  pcl::Disambiguation d = [&] {
    if (o.algo == "majority") return pcl::vc_majority_disambiguate(cls);
    if (o.algo == "weighted") return pcl::weighted_disambiguate(cls, pcl::vc_dimension(cls));
    if (o.algo == "support") return pcl::support_indicator_disambiguation(cls);
    if (o.algo == "compression") {
      std::size_t k = o.k ? o.k : static_cast<std::size_t>(std::max(pcl::littlestone_dimension(cls), 0));
      return pcl::compression_to_disambiguation(cls, pcl::ld_compression_scheme(cls), k);
    }
    throw UsageError("unknown algorithm '" + o.algo + "'");
  }();
  auto mode = d.mode == pcl::DisambiguationMode::Strong ? pcl::CheckMode::strong() : pcl::CheckMode::weak(4);
  auto chk = pcl::check_disambiguation(cls, d.totals, mode);
  Json j = pcl::io::to_json(d);
  j["verified"] = chk.ok;
  emit(j, o.out);
  return chk.ok ? 0 : 1;
}

int cmd_construct(const std::string& what, const Options& o) {
  namespace g = pcl::geometry;
  Json j{{"construction", what}};
  bool ok = true;
  if (what == "biclique") {
    auto inst = pcl::io::graph_from_json(pcl::io::read_json_file(o.graph));
    pcl::validate_biclique(inst);
    auto cls = pcl::biclique_class(inst);
    auto d = pcl::vc_majority_disambiguate(cls);
    auto cert = pcl::certify_coloring_lower_bound(inst, d);
    j["class"] = pcl::io::to_json(cls);
    j["vc"] = pcl::vc_dimension(cls);
    j["coloring"] = {{"proper", cert.is_proper}, {"colors", cert.colors_used}};
    ok = cert.is_proper;
  } else if (what == "margin") {
    if (!o.data.empty()) {
      auto d = pcl::io::euclidean_from_json(pcl::io::read_json_file(o.data));
      auto sep = g::separability(d);
      j["separability"] = {{"separable", sep.separable}, {"marginal", sep.marginal},
                           {"ball_radius", sep.ball_radius}, {"hull_distance", sep.hull_distance}};
      if (sep.separable) {
        auto rep = g::perceptron_run(d);
        j["perceptron"] = {{"mistakes", rep.mistakes}, {"bound", rep.bound}, {"formula", rep.formula},
                           {"converged", rep.converged}};
        ok = rep.converged && static_cast<double>(rep.mistakes) <= rep.bound;
      }
    } else {
      auto cert = g::certify_orthonormal_shattering(o.radius, o.gamma);
      j["orthonormal"] = {{"points", cert.points},         {"labelings", cert.labelings},
                          {"witness_ok", cert.witness_ok}, {"checker_ok", cert.checker_ok},
                          {"marginal", cert.marginal}};
      ok = cert.all_certified();
    }
  } else if (what == "gamma-boost") {
    pcl::TotalConceptClass base(load_class(o.input));
    auto sample = pcl::io::sample_from_json(pcl::io::read_json_file(o.sample), base.domain_size());
    auto rep = g::gamma_realizable_check(base, sample, o.gamma);
    j["value"] = pcl::to_string(rep.value);
    j["threshold"] = pcl::to_string(rep.threshold);
    j["realizable"] = rep.realizable;
    if (rep.realizable) {
      auto res = g::boosting_disambiguate_sample(base, sample, o.gamma);
      j["hypothesis"] = pcl::io::hypothesis_json(res.hypothesis);
      j["k"] = res.k;
      j["cap"] = res.cap;
      j["dual_vc"] = res.dual_vc;
      j["envelope"] = res.envelope;
    }
  } else if (what == "general-margin") {
    std::vector<g::Vector> pts;
    std::vector<pcl::Label> labels;
    if (!o.data.empty()) {
      auto d = pcl::io::euclidean_from_json(pcl::io::read_json_file(o.data));
      pts = d.points;
      for (auto y : d.labels) labels.push_back(static_cast<pcl::Label>(y));
    } else {
      pts = g::grid_points(o.grid);
    }
    auto packing = g::greedy_packing(pts, o.gamma);
    j["chosen"] = packing.chosen;
    j["cells"] = packing.cell;
    j["max_cell_diameter"] = g::max_cell_diameter(pts, packing);
    if (!labels.empty()) {
      if (!g::is_gamma_separated_labeling(pts, labels, o.gamma))
        throw UsageError("labels are not gamma-separated");
      auto ext = g::voronoi_disambiguate(packing, labels);
      j["extension"] = ext;
      for (std::size_t i = 0; i < labels.size(); ++i) ok = ok && ext[i] == static_cast<std::uint8_t>(labels[i]);
    }
  } else if (what == "erm-failure") {
    auto r = g::erm_failure_simulate(o.n, o.m, o.trials, o.seed);
    j["proper_mean"] = pcl::to_string(r.proper_mean);
    j["improper_mean"] = pcl::to_string(r.improper_mean);
    j["trials"] = r.trials;
  } else {
    throw UsageError("unknown construction '" + what + "'");
  }
  emit(j, o.out);
  return ok ? 0 : 1;
}

std::vector<std::size_t> parse_grid(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw UsageError("bad grid entry '" + item + "'");
    }
  }
  return out;
}

int cmd_experiment(const Options& o) {
  if (o.experiment == "scaling") {
    std::cout << pcl::experiments::emit_scaling_table(o.table, parse_grid(o.grid_list), o.seed);
    return 0;
  }
  pcl::experiments::ExperimentConfig cfg;
  cfg.name = o.experiment;
  cfg.seed = o.seed;
  cfg.trials = o.exp_trials;
  cfg.output = o.out;
  cfg.inputs = o.input.empty() ? std::vector<std::string>{} : std::vector<std::string>{o.input};
  for (const auto& kv : o.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
    try {
      cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--param value is not a number: '" + kv + "'");
    }
  }
  auto known = pcl::experiments::experiment_names();
  if (std::find(known.begin(), known.end(), cfg.name) == known.end())
    throw UsageError("unknown experiment '" + cfg.name + "'");
  auto report = pcl::experiments::run_experiment(cfg);
  pcl::experiments::write_report(cfg, report);
  if (o.out.empty()) std::cout << report.to_json().dump(2) << "\n";
  std::cerr << report.experiment << ": " << report.passed() << "/" << report.checks.size() << " checks passed\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial concept class toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string construct_what;
  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "random seed (default: PCL_SEED or 0)");
    c->add_option("--out", o.out, "output path (default: stdout)");
  };

  auto* dim = app.add_subcommand("dim", "compute a combinatorial dimension");
  dim->add_option("--input", o.input, "class JSON")->required();
  dim->add_option("--measure", o.measure, "vc|ld|td|strength|natarajan|graph|support-vc|dual");
  dim->add_flag("--witness", o.witness, "include a witness");
  add_common(dim);

  auto* learn = app.add_subcommand("learn", "batch learners and compression");
  learn->add_option("--input", o.input, "class JSON")->required();
  learn->add_option("--sample", o.sample, "sample JSON")->required();
  learn->add_option("--mode", o.mode, "realizable|agnostic|compress|ld-compress")->required();
  learn->add_option("--eps", o.eps);
  learn->add_option("--delta", o.delta);
  add_common(learn);

  auto* online = app.add_subcommand("online", "online learners and adversaries");
  online->add_option("--input", o.input, "class JSON")->required();
  online->add_option("--mode", o.mode, "soa|agnostic|adversary-mistake|adversary-regret")->required();
  online->add_option("--sequence", o.sample, "labeled sequence JSON");
  online->add_option("--T", o.horizon, "horizon");
  online->add_option("--d", o.depth, "tree depth");
  online->add_option("--trials", o.trials);
  add_common(online);

  auto* dis = app.add_subcommand("disambiguate", "build a disambiguation");
  dis->add_option("--input", o.input, "class JSON")->required();
  dis->add_option("--algo", o.algo, "majority|weighted|compression|support")->required();
  dis->add_option("--k", o.k, "subsample size for --algo compression");
  add_common(dis);

  auto* con = app.add_subcommand("construct", "geometric and lower-bound constructions");
  con->add_option("what", construct_what, "biclique|margin|gamma-boost|general-margin|erm-failure")->required();
  con->add_option("--graph", o.graph, "graph JSON (biclique)");
  con->add_option("--data", o.data, "Euclidean data JSON");
  con->add_option("--input", o.input, "base class JSON (gamma-boost)");
  con->add_option("--sample", o.sample, "sample JSON (gamma-boost)");
  con->add_option("--R", o.radius);
  con->add_option("--gamma", o.gamma);
  con->add_option("--grid", o.grid, "grid side for general-margin");
  con->add_option("--n", o.n);
  con->add_option("--m", o.m);
  con->add_option("--trials", o.trials);
  add_common(con);

  auto* exp = app.add_subcommand("experiment", "run a named check suite");
  exp->add_option("name", o.experiment, "suite name, or 'scaling'")->required();
  exp->add_option("--trials", o.exp_trials, "override the suite's main count");
  exp->add_option("--param", o.params, "key=value suite parameter");
  exp->add_option("--input", o.input);
  exp->add_option("--table", o.table, "scaling table: compression-size|disambiguation-size");
  exp->add_option("--grid", o.grid_list, "comma-separated grid for scaling tables");
  add_common(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*dim) return cmd_dim(o);
    if (*learn) return cmd_learn(o);
    if (*online) return cmd_online(o);
    if (*dis) return cmd_disambiguate(o);
    if (*con) return cmd_construct(construct_what, o);
    if (*exp) return cmd_experiment(o);
  } catch (const pcl::AlgorithmFailure& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  } catch (const pcl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
