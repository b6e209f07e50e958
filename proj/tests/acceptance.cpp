// Runs every acceptance criterion at full scale and prints one line per
// criterion. Exit status is nonzero if any criterion fails or overruns its
// time limit.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "pcl/experiments.hpp"

namespace {

struct Criterion {
  int id;
  const char* suite;
  const char* title;
  double limit_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "soa-mistake-bound", "SOA mistakes <= LD", 30},
    {2, "one-inclusion-loo", "one-inclusion leave-one-out <= VC/n", 120},
    {3, "experts-regret", "exponential weights regret", 5},
    {4, "agnostic-online-regret", "agnostic online regret, upper and lower", 120},
    {5, "disambiguation-size", "majority and weighted disambiguation", 60},
    {6, "biclique-lower-bound", "biclique classes and coloring bound", 10},
    {7, "compression", "boosting and LD compression", 120},
    {8, "pac-realizable", "realizable PAC wrapper failure rate", 180},
    {9, "erm-failure", "proper ERM failure vs improper learner", 5},
    {10, "geometry", "margin shattering, Voronoi, Perceptron", 60},
    {11, "approximation-monotone", "approximation error is monotone", 10},
    {12, "multiclass", "multiclass inequalities and closure failure", 60},
};

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 0) : 2024;
  int failures = 0;
  for (const auto& c : kCriteria) {
    pcl::experiments::ExperimentConfig cfg;
    cfg.name = c.suite;
    cfg.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      auto r = pcl::experiments::run_experiment(cfg);
      ok = r.ok();
      note = std::to_string(r.passed()) + "/" + std::to_string(r.checks.size()) + " checks";
      if (!ok)
        for (const auto& ch : r.checks)
          if (!ch.pass) {
            note += "; first failure: " + ch.name + " (" + ch.detail + ")";
            break;
          }
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.limit_s;
    if (!in_time) note += "; over time limit";
    bool pass = ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %2d %-24s %-45s %7.2fs < %5.0fs  %s\n", pass ? "PASS" : "FAIL", c.id, c.suite,
                c.title, secs, c.limit_s, note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(kCriteria.size()) - failures, kCriteria.size());
  return failures == 0 ? 0 : 1;
}
