#include "pcl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "pcl/dimensions.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/geometry.hpp"
#include "pcl/learners.hpp"
#include "pcl/online.hpp"
#include "pcl/subclass.hpp"

namespace pcl::experiments {

GeneratedClass generate_random_class(std::size_t n, std::size_t size, double star_prob,
                                     std::uint64_t seed) {
  if (n == 0 || n > 24) throw ContractViolation("n must be in 1..24");
  if (size == 0) throw ContractViolation("size must be positive");
  if (!(star_prob >= 0 && star_prob <= 1)) throw ContractViolation("star_prob must lie in [0,1]");
  if (star_prob >= 1) {
    return {PartialConceptClass(n, {PartialConcept(n, 0, 0)}), true};
  }
  double limit = star_prob > 0 ? std::pow(3.0, static_cast<double>(n)) : std::ldexp(1.0, static_cast<int>(n));
  if (static_cast<double>(size) > limit) throw ContractViolation("requested size exceeds the number of rows");
  Rng rng(seed);
  std::set<PartialConcept> rows;
  const std::size_t max_draws = 1000 * size + 10000;
  for (std::size_t draws = 0; rows.size() < size; ++draws) {
    if (draws == max_draws) throw BudgetError("could not reach the requested class size");
    Mask defined = 0, ones = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (rng.bernoulli(star_prob)) continue;
      defined |= bit(x);
      if (rng.coin()) ones |= bit(x);
    }
    rows.emplace(n, defined, ones);
  }
  GeneratedClass g{PartialConceptClass(n, {rows.begin(), rows.end()}), false};
  g.degenerate = std::all_of(g.cls.begin(), g.cls.end(), [](const PartialConcept& h) { return h.defined() == 0; });
  return g;
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));
}

io::Json Report::to_json() const {
  io::Json cs = io::Json::array();
  for (const auto& c : checks) {
    io::Json j{{"name", c.name}, {"reference", c.reference}, {"measured", c.measured},
               {"bound", c.bound}, {"relation", c.relation}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    cs.push_back(std::move(j));
  }
  return io::Json{{"schema", schema},
                  {"experiment", experiment},
                  {"seed", seed},
                  {"summary", {{"checks", checks.size()}, {"passed", passed()}, {"failed", failed()}}},
                  {"checks", cs}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "experiment,name,reference,measured,relation,bound,pass,detail\n";
  for (const auto& c : checks)
    os << csv_field(experiment) << ',' << csv_field(c.name) << ',' << csv_field(c.reference) << ','
       << fmt(c.measured) << ',' << csv_field(c.relation) << ',' << fmt(c.bound) << ','
       << (c.pass ? "pass" : "fail") << ',' << csv_field(c.detail) << '\n';
  return os.str();
}

void write_report(const ExperimentConfig& config, const Report& report) {
  if (config.output.empty()) return;
  io::write_text_file(config.output + ".json", report.to_json().dump(2) + "\n");
  io::write_text_file(config.output + ".csv", report.to_csv());
}

namespace {

using Suite = std::function<Report(const ExperimentConfig&)>;

Check make_check(std::string name, std::string ref, double measured, double bound, bool pass,
                 std::string detail = {}, std::string rel = "<=") {
  return Check{std::move(name), std::move(ref), measured, bound, std::move(rel), pass, std::move(detail)};
}

std::size_t count_or(const ExperimentConfig& c, const char* key, std::size_t fallback) {
  if (c.trials) return c.trials;
  return static_cast<std::size_t>(c.param(key, static_cast<double>(fallback)));
}

std::size_t size_param(const ExperimentConfig& c, const char* key, std::size_t fallback) {
  return static_cast<std::size_t>(c.param(key, static_cast<double>(fallback)));
}

// Runs body(i) for every instance in parallel and keeps the instance order.
template <class Body>
std::vector<Check> per_instance(std::size_t count, const Body& body) {
  std::vector<std::vector<Check>> out(count);
  std::vector<std::string> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      out[k] = body(k);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  std::vector<Check> flat;
  for (std::size_t k = 0; k < count; ++k) {
    if (!errors[k].empty())
      flat.push_back(make_check("instance " + std::to_string(k), "run completed", 0, 0, false, errors[k], "error"));
    for (auto& c : out[k]) flat.push_back(std::move(c));
  }
  return flat;
}

// Random class drawn until `accept` holds.
template <class Accept>
PartialConceptClass random_class(Rng& rng, std::size_t min_n, std::size_t max_n, std::size_t max_size,
                                 double max_star, const Accept& accept) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::size_t n = min_n + rng.below(max_n - min_n + 1);
    // 2^n rows are always reachable; 3^n is not when the drawn Star rate is tiny.
    double cap = std::ldexp(1.0, static_cast<int>(n));
    std::size_t size = 1 + rng.below(static_cast<std::uint64_t>(std::min<double>(static_cast<double>(max_size), cap)));
    double star = max_star * rng.uniform();
    auto g = generate_random_class(n, size, star, rng.next());
    if (accept(g.cls)) return g.cls;
  }
  throw BudgetError("no random class satisfied the constraints");
}

auto any_class = [](const PartialConceptClass&) { return true; };

// ---- suites ----

Report soa_mistake_bound(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 200);
  const std::size_t sequences = size_param(cfg, "sequences", 20);
  const std::size_t max_n = size_param(cfg, "max_n", 8);
  const std::size_t max_size = size_param(cfg, "max_size", 32);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "soa-mistake-bound", i);
    auto cls = random_class(rng, 1, max_n, max_size, 0.5, any_class);
    LittlestoneEngine engine(cls);
    const int ld = engine.ld();
    std::optional<LittlestoneTree> tree;
    if (ld > 0) tree = littlestone_tree(engine, static_cast<std::size_t>(ld));
    const ClassIndex& idx = engine.index();
    const std::size_t n = cls.domain_size();
    SoaLearner learner(cls);
    std::size_t worst = 0;
    for (std::size_t s = 0; s < sequences; ++s) {
      learner.reset();
      std::size_t mistakes = 0;
      if (tree && s % 2 == 0) {
        // Walk of the optimal mistake tree.
        for (const auto& ex : tree->path(rng.next())) {
          std::uint8_t p = learner.predict(ex.x) >= 0.5 ? 1 : 0;
          mistakes += p != ex.y;
          learner.observe(ex.x, ex.y);
        }
      } else {
        // Adaptive adversary: contradict the learner whenever that stays realizable.
        ConceptSet cur = idx.all();
        for (std::size_t t = 0; t < 3 * n; ++t) {
          std::size_t x = rng.below(n);
          std::uint8_t p = learner.predict(x) >= 0.5 ? 1 : 0;
          std::uint8_t y = static_cast<std::uint8_t>(1 - p);
          ConceptSet next = idx.restrict(cur, x, y);
          if (next.empty()) {
            y = p;
            next = idx.restrict(cur, x, y);
            if (next.empty()) continue;
          }
          mistakes += p != y;
          cur = std::move(next);
          learner.observe(x, y);
        }
      }
      worst = std::max(worst, mistakes);
    }
    return std::vector<Check>{make_check("class " + std::to_string(i), "SOA mistakes <= Littlestone dimension",
                                         static_cast<double>(worst), ld, static_cast<int>(worst) <= std::max(ld, 0),
                                         "n=" + std::to_string(n) + " |H|=" + std::to_string(cls.size()))};
  });
  return r;
}

Report one_inclusion_loo(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 100);
  const std::size_t max_n = size_param(cfg, "max_n", 6);
  const std::size_t max_size = size_param(cfg, "max_size", 32);
  const std::size_t max_len = size_param(cfg, "max_len", 5);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "one-inclusion-loo", i);
    auto cls = random_class(rng, 1, max_n, max_size, 0.5, any_class);
    const std::size_t n = cls.domain_size();
    const int vc = vc_dimension(cls, Parallelism::Serial);
    OneInclusionPredictor pred(cls);
    Rational worst = -1;
    std::size_t sequences = 0;
    bool ok = true;
    std::string where;
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::vector<std::size_t> pts(len, 0);
      while (true) {
        for (Mask labels = 0; labels < (Mask{1} << len); ++labels) {
          LabeledSample seq(len);
          for (std::size_t k = 0; k < len; ++k) seq[k] = {pts[k], static_cast<std::uint8_t>(labels >> k & 1)};
          if (!is_realizable(cls, seq)) continue;
          // Exact average over all orderings; distinct arrangements of the
          // multiset each occur equally often among the len! permutations.
          std::sort(seq.begin(), seq.end());
          std::uint64_t wrong = 0, total = 0;
          do {
            LabeledSample train(seq.begin(), seq.end() - 1);
            wrong += pred.predict(train, seq.back().x) != seq.back().y;
            ++total;
          } while (std::next_permutation(seq.begin(), seq.end()));
          ++sequences;
          Rational avg(static_cast<std::int64_t>(wrong), static_cast<std::int64_t>(total));
          Rational scaled = avg * static_cast<std::int64_t>(len);
          if (scaled > worst) worst = scaled;
          if (scaled > vc) {
            ok = false;
            if (where.empty()) where = "len=" + std::to_string(len) + " avg=" + to_string(avg);
          }
        }
        // Next non-decreasing point sequence.
        std::size_t k = len;
        while (k > 0 && pts[k - 1] == n - 1) --k;
        if (k == 0) break;
        ++pts[k - 1];
        for (std::size_t j = k; j < len; ++j) pts[j] = pts[k - 1];
      }
    }
    return std::vector<Check>{make_check("class " + std::to_string(i),
                                         "n * (permutation-averaged leave-one-out error) <= VC",
                                         worst < 0 ? 0 : to_double(worst), vc, ok,
                                         where.empty() ? std::to_string(sequences) + " sequences" : where)};
  });
  return r;
}

Report experts_regret(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 100);
  const std::size_t max_experts = size_param(cfg, "max_experts", 16);
  const std::size_t max_horizon = size_param(cfg, "max_horizon", 64);
  const std::size_t fixed_n = size_param(cfg, "experts", 0);
  const std::size_t fixed_t = size_param(cfg, "horizon", 0);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "experts-regret", i);
    std::size_t n = fixed_n ? fixed_n : 1 + rng.below(max_experts);
    std::size_t t = fixed_t ? fixed_t : 1 + rng.below(max_horizon);
    std::vector<std::vector<double>> preds(t, std::vector<double>(n));
    std::vector<double> outcomes(t);
    const bool binary = rng.coin();
    for (std::size_t s = 0; s < t; ++s) {
      for (auto& v : preds[s]) v = binary ? static_cast<double>(rng.coin()) : rng.uniform();
      outcomes[s] = rng.coin();
    }
    auto res = experts_aggregate(preds, outcomes);
    return std::vector<Check>{make_check("matrix " + std::to_string(i), "mixture loss - best expert <= sqrt((T/2) ln N)",
                                         res.regret, res.bound, res.regret <= res.bound,
                                         "N=" + std::to_string(n) + " T=" + std::to_string(t))};
  });
  return r;
}

Report agnostic_online_regret(const ExperimentConfig& cfg) {
  const std::size_t instances = size_param(cfg, "instances", 20);
  const std::size_t sequences = size_param(cfg, "sequences", 10);
  const std::size_t horizon = size_param(cfg, "horizon", 12);
  const std::size_t trials = cfg.trials ? cfg.trials : size_param(cfg, "block_trials", 10000);
  const std::size_t block_t = size_param(cfg, "block_horizon", 100);
  const double target = cfg.param("block_target", 2.5);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "agnostic-online-upper", i);
    auto cls = random_class(rng, 1, 6, 16, 0.4,
                            [](const PartialConceptClass& c) { return littlestone_dimension(c) <= 2; });
    const int ld = std::max(littlestone_dimension(cls), 0);
    AgnosticOnlineLearner learner(cls, horizon);
    const double bound = learner.regret_bound() + ld;
    double worst = -1e300;
    for (std::size_t s = 0; s < sequences; ++s) {
      LabeledSample seq;
      learner.reset();
      for (std::size_t t = 0; t < horizon; ++t) {
        std::size_t x = rng.below(cls.domain_size());
        double p = learner.predict(x);
        std::uint8_t y = s % 2 == 0 ? rng.coin() : (p < 0.5 ? 1 : 0);
        learner.observe(x, y);
        seq.push_back({x, y});
      }
      Rng play_rng = Rng::derive(cfg.seed, "agnostic-online-play", i * sequences + s);
      auto tr = play(learner, cls, seq, play_rng);
      worst = std::max(worst, tr.expected_regret);
    }
    return std::vector<Check>{make_check("class " + std::to_string(i),
                                         "expected regret <= sqrt((T/2) ln N) + LD", worst, bound,
                                         worst <= bound, "experts=" + std::to_string(learner.expert_count()))};
  });

  PartialConceptClass line = PartialConceptClass::from_strings({"0", "1"});
  RegretAdversary adversary = regret_adversary(line, 1, block_t);
  std::vector<std::unique_ptr<OnlineLearner>> baselines;
  baselines.push_back(std::make_unique<ConstantLearner>(0));
  baselines.push_back(std::make_unique<ConstantLearner>(1));
  baselines.push_back(std::make_unique<FollowTheLeaderLearner>(line));
  for (std::size_t b = 0; b < baselines.size(); ++b) {
    auto st = regret_game(*baselines[b], line, adversary, trials, splitmix64(cfg.seed ^ (b + 1)));
    double se = st.standard_error();
    std::ostringstream d;
    d << "z=" << std::setprecision(4) << (se > 0 ? (st.mean - target) / se : 0.0) << " se=" << se;
    r.checks.push_back(make_check("block adversary vs " + baselines[b]->name(),
                                  "mean regret >= target - 3 standard errors", st.mean, target - 3 * se,
                                  st.mean >= target - 3 * se, d.str(), ">="));
  }
  return r;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sum_{i <= 1 + d log2 n} C(n, i)
std::uint64_t placement_bound(std::size_t n, int d) {
  auto top = static_cast<std::size_t>(std::floor(1 + d * std::log2(static_cast<double>(n)) + 1e-12));
  std::uint64_t s = 0;
  for (std::size_t i = 0; i <= std::min(top, n); ++i) s += binomial(n, i);
  return s;
}

// u <= (d+1) log2 m + 2, decided in integers.
bool prefix_ok(std::size_t u, std::size_t m, int d) {
  if (u <= 2) return true;
  if (u - 2 >= 63) return false;
  std::uint64_t lhs = std::uint64_t{1} << (u - 2);
  std::uint64_t rhs = 1;
  for (int k = 0; k <= d; ++k) {
    rhs *= m;
    if (rhs >= lhs) return true;
  }
  return lhs <= rhs;
}

Report disambiguation_size(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 100);
  const std::size_t max_n = size_param(cfg, "max_n", 12);
  const int max_vc = static_cast<int>(cfg.param("max_vc", 3));
  const std::size_t max_size = size_param(cfg, "max_size", 24);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "disambiguation-size", i);
    auto cls = random_class(rng, 2, max_n, max_size, 0.7, [&](const PartialConceptClass& c) {
      return vc_dimension(c, Parallelism::Serial) <= max_vc;
    });
    const std::size_t n = cls.domain_size();
    const int vc = vc_dimension(cls, Parallelism::Serial);
    const std::uint64_t strength = shattering_strength(cls);
    std::vector<Check> out;
    std::string tag = "class " + std::to_string(i);

    Disambiguation d = vc_majority_disambiguate(cls, Parallelism::Serial);
    std::size_t max_u = 0;
    bool upd_ok = true;
    for (auto u : d.updates) {
      max_u = std::max(max_u, u);
      upd_ok = upd_ok && u < 64 && (std::uint64_t{1} << u) <= strength;
    }
    out.push_back(make_check(tag + " updates", "per-concept updates <= log2 s(H)", static_cast<double>(max_u),
                             std::log2(static_cast<double>(strength)), upd_ok));
    auto chk = check_disambiguation(cls, d.totals, CheckMode::strong());
    out.push_back(make_check(tag + " strong", "every concept has an agreeing total extension", chk.ok, 1, chk.ok,
                             {}, "=="));
    std::uint64_t bound = placement_bound(n, vc);
    out.push_back(make_check(tag + " size", "|totals| <= sum_{i <= 1 + d log2 n} C(n,i)",
                             static_cast<double>(d.totals.size()), static_cast<double>(bound),
                             d.totals.size() <= bound, "n=" + std::to_string(n) + " d=" + std::to_string(vc)));

    Disambiguation w = weighted_disambiguate(cls, vc, Parallelism::Serial);
    bool pref_ok = true;
    double worst_gap = -1e300;
    for (const auto& pu : w.prefix_updates)
      for (std::size_t m = 1; m <= pu.size(); ++m) {
        pref_ok = pref_ok && prefix_ok(pu[m - 1], m, vc);
        worst_gap = std::max(worst_gap, static_cast<double>(pu[m - 1]) - ((vc + 1) * std::log2(static_cast<double>(m)) + 2));
      }
    out.push_back(make_check(tag + " weighted prefix", "u(m) - ((d+1) log2 m + 2) <= 0", worst_gap, 0, pref_ok));
    auto wchk = check_disambiguation(cls, w.totals, CheckMode::strong());
    out.push_back(make_check(tag + " weighted strong", "every concept has an agreeing total extension", wchk.ok, 1,
                             wchk.ok, {}, "=="));
    return out;
  });
  return r;
}

Report biclique_lower_bound(const ExperimentConfig& cfg) {
  std::vector<std::size_t> sizes = {4, 6, 8};
  if (cfg.params.count("m")) sizes = {size_param(cfg, "m", 4)};
  Report r;
  for (std::size_t m : sizes) {
    auto inst = complete_graph_star_partition(m);
    validate_biclique(inst);
    auto cls = biclique_class(inst);
    std::string tag = "K_" + std::to_string(m);
    int vc = vc_dimension(cls);
    r.checks.push_back(make_check(tag + " vc", "VC of the biclique class == 1", vc, 1, vc == 1, {}, "=="));
    std::size_t worst = 0;
    const std::size_t n = cls.domain_size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        std::set<int> pats;
        for (const auto& h : cls)
          if (h.defined_at(a) && h.defined_at(b))
            pats.insert(static_cast<int>(h[a]) * 2 + static_cast<int>(h[b]));
        worst = std::max(worst, pats.size());
      }
    r.checks.push_back(make_check(tag + " pairs", "binary patterns per coordinate pair <= 2", static_cast<double>(worst),
                                  2, worst <= 2));
    std::vector<std::pair<std::string, Disambiguation>> algos;
    algos.emplace_back("majority", vc_majority_disambiguate(cls));
    algos.emplace_back("weighted", weighted_disambiguate(cls, vc));
    algos.emplace_back("support", support_indicator_disambiguation(cls));
    for (auto& [name, d] : algos) {
      if (!check_disambiguation(cls, d.totals, CheckMode::strong()).ok) continue;
      auto cert = certify_coloring_lower_bound(inst, d);
      r.checks.push_back(make_check(tag + " " + name, "proper coloring with >= m colors",
                                    static_cast<double>(cert.colors_used), static_cast<double>(m),
                                    cert.is_proper && cert.colors_used >= m,
                                    cert.is_proper ? "" : "conflict edge", ">="));
    }
  }
  return r;
}

Report compression(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 500);
  const std::size_t max_m = size_param(cfg, "max_m", 64);
  const int max_vc = static_cast<int>(cfg.param("max_vc", 3));
  const std::size_t max_n = size_param(cfg, "max_n", 12);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "compression", i);
    auto cls = random_class(rng, 2, max_n, 24, 0.5, [&](const PartialConceptClass& c) {
      if (vc_dimension(c, Parallelism::Serial) > max_vc) return false;
      return std::any_of(c.begin(), c.end(), [](const PartialConcept& h) { return h.defined() != 0; });
    });
    std::vector<std::size_t> nonempty;
    for (std::size_t k = 0; k < cls.size(); ++k)
      if (cls[k].defined()) nonempty.push_back(k);
    const PartialConcept& target = cls[nonempty[rng.below(nonempty.size())]];
    auto supp = target.support();
    std::size_t m = 1 + rng.below(max_m);
    LabeledSample sample;
    for (std::size_t t = 0; t < m; ++t) {
      std::size_t x = supp[rng.below(supp.size())];
      sample.push_back({x, static_cast<std::uint8_t>(target[x])});
    }
    const int vc = vc_dimension(cls, Parallelism::Serial);
    const int ld = std::max(littlestone_dimension(cls), 0);
    std::vector<Check> out;
    std::string tag = "sample " + std::to_string(i);

    BoostOptions opt;
    opt.seed = rng.next();
    auto res = alpha_boost_compress(cls, sample, opt);
    Hypothesis h = reconstruct(cls, res.compression);
    Rational err = empirical_error(h, sample);
    out.push_back(make_check(tag + " boost consistent", "reconstruction error on sample == 0", to_double(err), 0,
                             err == 0, {}, "=="));
    double env = static_cast<double>(3 * std::max(vc, 1) * boost_round_cap(m) + res.compression.bits.size());
    out.push_back(make_check(tag + " boost size", "size <= 3 VC ceil(72 ln(m+2)) + order bits",
                             static_cast<double>(res.compression.size()), env,
                             static_cast<double>(res.compression.size()) <= env, "m=" + std::to_string(m)));

    auto ldc = ld_compress(cls, sample);
    Hypothesis hl = reconstruct(cls, ldc);
    Rational lerr = empirical_error(hl, sample);
    out.push_back(make_check(tag + " ld size", "LD-compression size <= LD", static_cast<double>(ldc.size()), ld,
                             static_cast<int>(ldc.size()) <= ld && lerr == 0,
                             lerr == 0 ? "" : "inconsistent reconstruction"));
    return out;
  });
  return r;
}

// Small classes used where a realistic, hand-sized class is wanted.
std::vector<PartialConceptClass> desk_classes() {
  std::vector<PartialConceptClass> out;
  {
    std::vector<PartialConcept> th;  // thresholds on 8 points
    for (std::size_t t = 0; t <= 8; ++t) th.push_back(PartialConcept::total(8, low_bits(8) & ~low_bits(t)));
    out.emplace_back(8, th);
  }
  {
    std::vector<PartialConcept> iv;  // intervals on 6 points
    for (std::size_t a = 0; a <= 6; ++a)
      for (std::size_t b = a; b <= 6; ++b) iv.push_back(PartialConcept::total(6, low_bits(b) & ~low_bits(a)));
    out.emplace_back(6, iv);
  }
  out.push_back(PartialConceptClass::from_strings({"0*0*1", "1*1*0", "**01*", "0110*", "*1*10", "10**1"}));
  out.push_back(PartialConceptClass::from_strings({"00**", "**11", "0*1*", "*1*0", "1001"}));
  {
    std::vector<PartialConcept> st;  // singletons with Star elsewhere, plus all zeros
    for (std::size_t x = 0; x < 7; ++x) st.emplace_back(7, low_bits(7), bit(x));
    st.emplace_back(7, low_bits(7), 0);
    out.emplace_back(7, st);
  }
  return out;
}

Report pac_realizable(const ExperimentConfig& cfg) {
  const std::size_t dists = size_param(cfg, "distributions", 10);
  const std::size_t trials = cfg.trials ? cfg.trials : 2000;
  const double eps = cfg.param("epsilon", 0.2), delta = cfg.param("delta", 0.1);
  auto classes = desk_classes();
  Report r;
  for (std::size_t k = 0; k < dists; ++k) {
    Rng rng = Rng::derive(cfg.seed, "pac-realizable", k);
    const auto& cls = classes[k % classes.size()];
    std::vector<std::size_t> nonempty;
    for (std::size_t c = 0; c < cls.size(); ++c)
      if (cls[c].defined()) nonempty.push_back(c);
    const PartialConcept& target = cls[nonempty[rng.below(nonempty.size())]];
    std::vector<Atom> atoms;
    std::int64_t total = 0;
    auto supp = target.support();
    std::vector<std::int64_t> w;
    for (std::size_t a = 0; a < supp.size(); ++a) {
      w.push_back(1 + static_cast<std::int64_t>(rng.below(6)));
      total += w.back();
    }
    for (std::size_t a = 0; a < supp.size(); ++a)
      atoms.push_back({{supp[a], static_cast<std::uint8_t>(target[supp[a]])}, Rational(w[a], total)});
    FiniteDistribution p(cls.domain_size(), atoms);
    PacPlan plan = pac_plan(vc_dimension(cls), eps, delta);
    std::int64_t failures = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : failures)
    for (long t = 0; t < static_cast<long>(trials); ++t) {
      Rng tr = Rng::derive(cfg.seed, "pac-realizable-trial", k * trials + static_cast<std::size_t>(t));
      LabeledSample s = p.sample(tr, plan.required);
      auto res = pac_learn_realizable(cls, s, eps, delta);
      failures += population_error(res.hypothesis, p) > Rational(eps);
    }
    double rate = static_cast<double>(failures) / static_cast<double>(trials);
    double se = std::sqrt(delta * (1 - delta) / static_cast<double>(trials));
    r.checks.push_back(make_check("distribution " + std::to_string(k), "failure rate <= delta + 3 sigma", rate,
                                  delta + 3 * se, rate <= delta + 3 * se,
                                  "m=" + std::to_string(plan.required) + " failures=" + std::to_string(failures)));
  }
  return r;
}

Report erm_failure(const ExperimentConfig& cfg) {
  const std::size_t n = size_param(cfg, "n", 20), m = size_param(cfg, "m", 5);
  const std::size_t trials = cfg.trials ? cfg.trials : 1000;
  const double target = cfg.param("target", 0.2);
  auto res = geometry::erm_failure_simulate(n, m, trials, cfg.seed);
  Report r;
  r.checks.push_back(make_check("proper learner", "mean error of a proper learner >= target",
                                to_double(res.proper_mean), target, res.proper_mean >= Rational(target),
                                "mean=" + to_string(res.proper_mean), ">="));
  r.checks.push_back(make_check("improper learner", "all-zeros learner error == 0", to_double(res.improper_mean), 0,
                                res.improper_mean == 0, {}, "=="));
  return r;
}

Report geometry_suite(const ExperimentConfig& cfg) {
  using namespace geometry;
  Report r;
  for (auto [rad, gam] : std::vector<std::pair<double, double>>{{1, 1}, {2, 1}, {3, 1}}) {
    auto cert = certify_orthonormal_shattering(rad, gam);
    std::ostringstream name;
    name << "orthonormal R=" << rad << " gamma=" << gam;
    r.checks.push_back(make_check(name.str(), "labelings certified by witness and checker",
                                  static_cast<double>(std::min(cert.witness_ok, cert.checker_ok)),
                                  static_cast<double>(cert.labelings), cert.all_certified(),
                                  "marginal=" + std::to_string(cert.marginal), "=="));
  }

  const double gamma = cfg.param("gamma", 0.6);
  auto grid = grid_points(size_param(cfg, "grid", 5));
  auto packing = greedy_packing(grid, gamma);
  double diam = max_cell_diameter(grid, packing);
  r.checks.push_back(make_check("voronoi cell diameter", "cell diameter < gamma", diam, gamma, diam < gamma, {}, "<"));
  // Every labeling of every gamma-separated subset, then random labelings of
  // larger supports with cross-label distance >= gamma.
  std::uint64_t tested = 0, matched = 0;
  const std::size_t np = grid.size();
  std::vector<std::size_t> cur;
  auto test_labeling = [&](const std::vector<Label>& lab) {
    auto ext = voronoi_disambiguate(packing, lab);
    bool ok = true;
    for (std::size_t x = 0; x < np; ++x)
      if (lab[x] != Label::Star && ext[x] != static_cast<std::uint8_t>(lab[x])) ok = false;
    ++tested;
    matched += ok;
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    std::vector<Label> lab(np, Label::Star);
    for (Mask y = 0; y < (Mask{1} << cur.size()); ++y) {
      for (std::size_t k = 0; k < cur.size(); ++k) lab[cur[k]] = static_cast<Label>(y >> k & 1);
      test_labeling(lab);
    }
    for (std::size_t x = start; x < np; ++x) {
      bool far = std::all_of(cur.begin(), cur.end(), [&](std::size_t c) { return (grid[x] - grid[c]).norm() >= gamma - 1e-12; });
      if (!far) continue;
      cur.push_back(x);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  Rng rng = Rng::derive(cfg.seed, "geometry-labelings", 0);
  for (std::size_t t = 0; t < 2000; ++t) {
    std::vector<Label> lab(np, Label::Star);
    for (std::size_t x = 0; x < np; ++x) {
      auto want = static_cast<Label>(rng.below(3));
      if (want == Label::Star) continue;
      lab[x] = want;
      if (!is_gamma_separated_labeling(grid, lab, gamma)) lab[x] = Label::Star;
    }
    test_labeling(lab);
  }
  r.checks.push_back(make_check("voronoi disambiguation", "gamma-separated labelings matched on support",
                                static_cast<double>(matched), static_cast<double>(tested), matched == tested,
                                std::to_string(tested) + " labelings", "=="));

  const std::size_t streams = size_param(cfg, "streams", 100);
  std::size_t within = 0;
  double worst_ratio = 0;
  for (std::size_t s = 0; s < streams; ++s) {
    Rng sr = Rng::derive(cfg.seed, "geometry-perceptron", s);
    EuclideanDataset d;
    if (s % 2 == 0) {
      d = orthonormal_shattering_instance(3, 1);
      for (auto& y : d.labels) y = sr.coin();
    } else {
      Vector w(2);
      double ang = 2 * M_PI * sr.uniform();
      w << std::cos(ang), std::sin(ang);
      double b = 0.4 * (sr.uniform() - 0.5);
      while (d.points.size() < 20) {
        Vector p(2);
        p << 2 * sr.uniform() - 1, 2 * sr.uniform() - 1;
        double v = w.dot(p) + b;
        if (p.norm() > 1 || std::abs(v) < 0.15) continue;
        d.points.push_back(p);
        d.labels.push_back(v > 0);
      }
    }
    EuclideanDataset stream = d;
    stream.points.clear();
    stream.labels.clear();
    std::vector<std::size_t> order(d.points.size());
    std::iota(order.begin(), order.end(), 0);
    for (int rep = 0; rep < 5; ++rep) {
      std::shuffle(order.begin(), order.end(), sr.engine());
      for (auto k : order) {
        stream.points.push_back(d.points[k]);
        stream.labels.push_back(d.labels[k]);
      }
    }
    auto rep = perceptron_run(stream);
    within += rep.converged && static_cast<double>(rep.mistakes) <= rep.bound;
    worst_ratio = std::max(worst_ratio, static_cast<double>(rep.mistakes) / rep.bound);
  }
  r.checks.push_back(make_check("perceptron streams", "mistakes <= (R'/rho)^2 on every stream",
                                static_cast<double>(within), static_cast<double>(streams), within == streams,
                                "worst mistakes/bound=" + fmt(worst_ratio), "=="));
  return r;
}

Report approximation_monotone(const ExperimentConfig& cfg) {
  struct Pair {
    PartialConceptClass cls;
    std::vector<Atom> atoms;
  };
  auto q = [](std::int64_t a, std::int64_t b) { return Rational(a, b); };
  std::vector<Pair> pairs;
  pairs.push_back({PartialConceptClass::from_strings({"00", "11"}),
                   {{{0, 0}, q(1, 2)}, {{1, 1}, q(1, 2)}}});
  pairs.push_back({PartialConceptClass::from_strings({"0*", "*1", "10"}),
                   {{{0, 1}, q(1, 3)}, {{1, 0}, q(1, 3)}, {{0, 0}, q(1, 3)}}});
  pairs.push_back({PartialConceptClass::from_strings({"01*", "1*0", "*10"}),
                   {{{0, 0}, q(1, 4)}, {{1, 1}, q(1, 4)}, {{2, 1}, q(1, 4)}, {{0, 1}, q(1, 4)}}});
  pairs.push_back({PartialConceptClass::from_strings({"000", "111", "0*1"}),
                   {{{0, 0}, q(1, 2)}, {{1, 1}, q(1, 3)}, {{2, 0}, q(1, 6)}}});
  pairs.push_back({PartialConceptClass::from_strings({"**", "0*"}),
                   {{{0, 0}, q(2, 3)}, {{0, 1}, q(1, 3)}}});
  Report r;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    FiniteDistribution p(pairs[k].cls.domain_size(), pairs[k].atoms);
    ApproximationOptions opt;
    opt.exact = true;
    opt.seed = cfg.seed;
    Rational e1 = approximation_error(pairs[k].cls, p, 1, opt);
    Rational e2 = approximation_error(pairs[k].cls, p, 2, opt);
    Rational e3 = approximation_error(pairs[k].cls, p, 3, opt);
    std::string tag = "pair " + std::to_string(k);
    std::string vals = to_string(e1) + ", " + to_string(e2) + ", " + to_string(e3);
    r.checks.push_back(make_check(tag + " n=1..2", "eps*(1) <= eps*(2)", to_double(e1), to_double(e2), e1 <= e2, vals));
    r.checks.push_back(make_check(tag + " n=2..3", "eps*(2) <= eps*(3)", to_double(e2), to_double(e3), e2 <= e3, vals));
  }
  return r;
}

Report multiclass(const ExperimentConfig& cfg) {
  const std::size_t instances = count_or(cfg, "instances", 100);
  Report r;
  r.checks = per_instance(instances, [&](std::size_t i) {
    Rng rng = Rng::derive(cfg.seed, "multiclass", i);
    auto cls = random_class(rng, 1, 8, 24, 0.6, any_class);
    auto md = multiclass_dimensions(cls);
    int vc = vc_dimension(cls, Parallelism::Serial);
    auto sd = support_indicator_disambiguation(cls);
    int svc = vc_dimension(sd.totals, Parallelism::Serial);
    std::string tag = "class " + std::to_string(i);
    return std::vector<Check>{
        make_check(tag + " natarajan", "d_N <= VC + VC(supports)", md.natarajan, vc + md.support_vc,
                   md.natarajan <= vc + md.support_vc),
        make_check(tag + " support", "VC(support-indicator disambiguation) <= d_G", svc, md.graph, svc <= md.graph)};
  });
  for (std::size_t n : {2, 3, 4}) {
    std::vector<PartialConcept> zeros, ones;
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
      zeros.emplace_back(n, s, 0);
      ones.emplace_back(n, s, s);
    }
    auto composed = majority_compose({PartialConceptClass(n, zeros), PartialConceptClass(n, ones)},
                                     TernaryFunction::pairwise_majority());
    int vc = vc_dimension(composed);
    r.checks.push_back(make_check("closure failure n=" + std::to_string(n), "VC of the composed class == n", vc,
                                  static_cast<double>(n), vc == static_cast<int>(n), {}, "=="));
  }
  return r;
}

const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> s = {
      {"soa-mistake-bound", soa_mistake_bound},
      {"one-inclusion-loo", one_inclusion_loo},
      {"experts-regret", experts_regret},
      {"agnostic-online-regret", agnostic_online_regret},
      {"disambiguation-size", disambiguation_size},
      {"biclique-lower-bound", biclique_lower_bound},
      {"compression", compression},
      {"pac-realizable", pac_realizable},
      {"erm-failure", erm_failure},
      {"geometry", geometry_suite},
      {"approximation-monotone", approximation_monotone},
      {"multiclass", multiclass},
  };
  return s;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : suites()) names.push_back(k);
  return names;
}

Report run_experiment(const ExperimentConfig& config) {
  auto it = suites().find(config.name);
  if (it == suites().end()) throw ContractViolation("unknown experiment '" + config.name + "'");
  Report r = it->second(config);
  r.experiment = config.name;
  r.seed = config.seed;
  return r;
}

std::string emit_scaling_table(const std::string& experiment, const std::vector<std::size_t>& grid,
                               std::uint64_t seed) {
  std::ostringstream os;
  if (experiment == "compression-size") {
    os << "experiment,m,measured,envelope,pass\n";
    Rng crng = Rng::derive(seed, "scaling-class", 0);
    auto cls = random_class(crng, 6, 10, 24, 0.4, [](const PartialConceptClass& c) {
      int v = vc_dimension(c, Parallelism::Serial);
      return v >= 1 && v <= 3;
    });
    const int vc = vc_dimension(cls);
    std::vector<std::size_t> nonempty;
    for (std::size_t k = 0; k < cls.size(); ++k)
      if (cls[k].defined()) nonempty.push_back(k);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Rng rng = Rng::derive(seed, "scaling-compression", g);
      const PartialConcept& target = cls[nonempty[rng.below(nonempty.size())]];
      auto supp = target.support();
      LabeledSample sample;
      for (std::size_t t = 0; t < grid[g]; ++t) {
        std::size_t x = supp[rng.below(supp.size())];
        sample.push_back({x, static_cast<std::uint8_t>(target[x])});
      }
      BoostOptions opt;
      opt.seed = rng.next();
      auto res = alpha_boost_compress(cls, sample, opt);
      double env = static_cast<double>(3 * std::max(vc, 1) * boost_round_cap(grid[g]) + res.compression.bits.size());
      double meas = static_cast<double>(res.compression.size());
      os << experiment << ',' << grid[g] << ',' << meas << ',' << env << ',' << (meas <= env ? "pass" : "fail") << '\n';
    }
  } else if (experiment == "disambiguation-size") {
    os << "experiment,n,measured,envelope,pass\n";
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::size_t n = grid[g];
      Rng rng = Rng::derive(seed, "scaling-disambiguation", g);
      auto cls = random_class(rng, n, n, 2 * n, 0.6, [](const PartialConceptClass& c) {
        return vc_dimension(c, Parallelism::Serial) == 1;
      });
      auto d = vc_majority_disambiguate(cls);
      auto env = placement_bound(n, 1);
      os << experiment << ',' << n << ',' << d.totals.size() << ',' << env << ','
         << (d.totals.size() <= env ? "pass" : "fail") << '\n';
    }
  } else {
    throw ContractViolation("unknown scaling experiment '" + experiment + "'");
  }
  return os.str();
}

}  // namespace pcl::experiments
