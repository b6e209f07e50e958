#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(PCL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "pcl_cli_capture.txt";
  std::string cmd = std::string(PCL_CLI_PATH) + " " + args + " >" + out.string() + " 2>&1";
  [[maybe_unused]] int rc = std::system(cmd.c_str());
  std::ifstream in(out);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("exit codes") {
  auto cls = write("pcl_cli_class.json", R"({"domain_size": 3, "concepts": ["000", "111"]})");
  auto bad = write("pcl_cli_bad.json", R"({"domain_size": 3, "concepts": ["00"]})");
  auto broken = write("pcl_cli_broken.json", "{not json");
  CHECK(run("dim --input " + cls.string()) == 0);
  CHECK(run("dim --input " + bad.string()) == 2);
  CHECK(run("dim --input " + broken.string()) == 2);
  CHECK(run("dim") == 2);
  CHECK(run("experiment no-such-suite") == 2);
  CHECK(run("experiment erm-failure --trials 100") == 0);
  CHECK(run("experiment erm-failure --trials 100 --param target=0.9") == 1);
  CHECK(capture("dim --input " + bad.string()).find("concepts[0]") != std::string::npos);
}

TEST_CASE("dimension output") {
  auto cls = write("pcl_cli_class.json", R"({"domain_size": 3, "concepts": ["000", "111"]})");
  auto out = capture("dim --input " + cls.string() + " --measure ld --witness");
  CHECK(out.find("\"value\": 1") != std::string::npos);
  CHECK(out.find("\"tree\"") != std::string::npos);
}

TEST_CASE("disambiguate and construct") {
  auto cls = write("pcl_cli_class.json", R"({"domain_size": 3, "concepts": ["0**", "10*", "110", "111"]})");
  for (const char* algo : {"majority", "weighted", "support"})
    CHECK(run("disambiguate --input " + cls.string() + " --algo " + algo) == 0);
  auto graph = write("pcl_cli_graph.json",
                     R"({"vertices": 3, "edges": [[0,1],[0,2],[1,2]], "partition": [[[0],[1,2]], [[1],[2]]]})");
  CHECK(run("construct biclique --graph " + graph.string()) == 0);
  auto overlap = write("pcl_cli_overlap.json",
                       R"({"vertices": 2, "edges": [[0,1]], "partition": [[[0],[1]], [[0],[1]]]})");
  CHECK(run("construct biclique --graph " + overlap.string()) == 2);
  CHECK(run("construct erm-failure --n 20 --m 5 --trials 200") == 0);
}
