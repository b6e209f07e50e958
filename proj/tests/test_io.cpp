#include "doctest.h"

#include "pcl/errors.hpp"
#include "pcl/io.hpp"

using namespace pcl;
using pcl::io::Json;

namespace {

std::string parse_message(const Json& j) {
  try {
    io::class_from_json(j);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("class JSON round trip") {
  auto c = PartialConceptClass::from_strings({"01*", "1*0"});
  auto j = io::to_json(c, {"a", "b", "c"});
  auto back = io::class_from_json(Json::parse(j.dump()));
  CHECK(back.cls == c);
  CHECK(back.names == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("class parse errors name the field") {
  CHECK(parse_message(Json::parse(R"({"concepts": ["01"]})")).find("domain_size") != std::string::npos);
  CHECK(parse_message(Json::parse(R"({"domain_size": 2, "concepts": ["011"]})")).find("concepts[0]") !=
        std::string::npos);
  CHECK(parse_message(Json::parse(R"({"domain_size": 2, "concepts": ["0x"]})")).find("concepts[0]") !=
        std::string::npos);
  CHECK(parse_message(Json::parse(R"({"domain_size": 2, "concepts": []})")).find("concepts") !=
        std::string::npos);
  CHECK(parse_message(Json::parse(R"({"domain_size": 2, "concepts": ["01"], "names": ["a"]})"))
            .find("names") != std::string::npos);
}

TEST_CASE("samples and distributions") {
  auto s = io::sample_from_json(Json::parse("[[0,1],[2,0]]"), 3);
  CHECK(s == LabeledSample{{0, 1}, {2, 0}});
  CHECK(io::to_json(s).dump() == "[[0,1],[2,0]]");
  CHECK_THROWS_AS(io::sample_from_json(Json::parse("[[3,1]]"), 3), ParseError);
  CHECK_THROWS_AS(io::sample_from_json(Json::parse("[[0,2]]"), 3), ParseError);

  auto p = io::distribution_from_json(Json::parse(R"({"atoms": [[0,0,"1/3"],[1,1,"2/3"]]})"), 2);
  CHECK(p.atoms().size() == 2);
  CHECK(io::to_json(p)["atoms"][1][2] == "2/3");
  CHECK_THROWS_AS(io::distribution_from_json(Json::parse(R"({"atoms": [[0,0,"1/3"]]})"), 2), ParseError);
}

TEST_CASE("graph and compression formats") {
  auto g = io::graph_from_json(Json::parse(R"({"vertices": 2, "edges": [[0,1]], "partition": [[[0],[1]]]})"));
  CHECK(g.vertices == 2);
  CHECK(g.partition.size() == 1);
  CHECK(io::graph_from_json(Json::parse(io::to_json(g).dump())).edges == g.edges);

  CompressionOutput c{{{1, 1}}, {1, 0, 1}};
  auto back = io::compression_from_json(Json::parse(io::to_json(c).dump()), 3);
  CHECK(back.subsample == c.subsample);
  CHECK(back.bits == c.bits);
  CHECK_THROWS_AS(io::compression_from_json(Json::parse(R"({"subsample": [], "bits": "zz", "bit_length": 8})"), 3),
                  ParseError);
}

TEST_CASE("euclidean data") {
  auto d = io::euclidean_from_json(Json::parse(R"({"points": [[1,0],[-1,0]], "labels": [1,0], "R": 1, "gamma": 1})"));
  CHECK(d.dim() == 2);
  CHECK(d.labels == std::vector<std::uint8_t>{1, 0});
  CHECK_THROWS_AS(io::euclidean_from_json(Json::parse(R"({"points": [[1,0],[1]]})")), ParseError);
  CHECK_THROWS_AS(io::euclidean_from_json(Json::parse(R"({"points": [[1,0]], "labels": [0, 1]})")), ParseError);
}
