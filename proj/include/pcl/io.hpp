#pragma once

// JSON formats:
//   class         {"domain_size": n, "concepts": ["01*", ...], "names": [...]?}
//   sample        [[x, y], ...]
//   distribution  {"atoms": [[x, y, "p/q"], ...]}
//   graph         {"vertices": n, "edges": [[u, v], ...], "partition": [[[L...], [R...]], ...]}
//   compression   {"subsample": [[x, y], ...], "bits": "hex", "bit_length": k}
//   euclidean     {"points": [[...], ...], "labels": [...], "R": r, "gamma": g}
// Parse failures throw ParseError naming the offending field.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcl/core.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/geometry.hpp"
#include "pcl/learners.hpp"
#include "pcl/online.hpp"

namespace pcl::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct ClassFile {
  PartialConceptClass cls;
  std::vector<std::string> names;  // optional sidecar names for domain points
};

ClassFile class_from_json(const Json& j);
Json to_json(const PartialConceptClass& cls, const std::vector<std::string>& names = {});

LabeledSample sample_from_json(const Json& j, std::size_t domain_size);
Json to_json(const LabeledSample& sample);

FiniteDistribution distribution_from_json(const Json& j, std::size_t domain_size);
Json to_json(const FiniteDistribution& p);

BicliqueInstance graph_from_json(const Json& j);
Json to_json(const BicliqueInstance& g);

CompressionOutput compression_from_json(const Json& j, std::size_t domain_size);
Json to_json(const CompressionOutput& c);

geometry::EuclideanDataset euclidean_from_json(const Json& j);
Json to_json(const geometry::EuclideanDataset& d);

Json to_json(const DimensionReport& r);
Json to_json(const LittlestoneTree& t);
Json to_json(const Disambiguation& d);
Json to_json(const OnlineTranscript& t);
Json to_json(const MonteCarloStats& s);
Json hypothesis_json(const Hypothesis& h);

}  // namespace pcl::io
