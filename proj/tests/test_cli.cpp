#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "spin_anneal_cli_test";

int run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const std::string cmd = "cd '" + kWork.string() + "' && " + env + " '" SPIN_ANNEAL_BIN "' " + args +
                          " > out.txt 2> err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream in(kWork / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen") {
  REQUIRE(run("gen --family mobius --n 8 --J 0.4 --out g.txt") == 0);
  const std::string g = slurp("g.txt");
  int edges = 0;
  std::istringstream in(g);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != 'N' && line[0] != '#') ++edges;
  CHECK(edges == 12);
  CHECK(nlohmann::json::parse(slurp("g.txt.manifest.json"))["version"] == "0.1.0");

  CHECK(run("gen --family jg --n 8 --k 5") == 2);
  CHECK(slurp("err.txt").find("k") != std::string::npos);

  REQUIRE(run("gen --family sk --n 100 --seed 7 --out a.txt") == 0);
  REQUIRE(run("gen --family sk --n 100 --seed 7 --out b.txt") == 0);
  CHECK(slurp("a.txt") == slurp("b.txt"));
}

TEST_CASE("solve") {
  REQUIRE(run("solve --family mobius --n 8 --J 0.4 --solver svl --seed 3 --out r.json --traj t.csv --traj-stride 50") == 0);
  CHECK(slurp("out.txt").rfind("energy ", 0) == 0);
  const auto j = nlohmann::json::parse(slurp("r.json"));
  CHECK(j["result"]["spins"].size() == 8);
  CHECK(j["manifest"]["inputs"]["config"]["sigma"] == "0.1");
  CHECK(slurp("t.csv").rfind("t,component,value\n", 0) == 0);
  CHECK(fs::exists(kWork / "t.csv.json"));
  // 1000 steps at stride 50 plus the initial sample, 8 components each
  std::istringstream in(slurp("t.csv"));
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 1 + 21 * 8);

  CHECK(run("solve --family mobius --n 8") == 2);
  CHECK(run("solve --solver visa --dt -1") == 2);
  CHECK(run("solve --solver visa --p-rate 0.5") == 3);
  CHECK(run("solve --solver visa --graph missing.txt") == 4);
  CHECK(run("solve --solver cim --out /nonexistent/dir/r.json") == 4);
  REQUIRE(run("gen --n 8 --J 0.6 --out g6.txt") == 0);
  REQUIRE(run("solve --graph g6.txt --solver bfgs --seed 1") == 0);
}

TEST_CASE("config file and flag precedence") {
  {
    std::ofstream f(kWork / "exp.ini");
    f << "runs = 7\nvalues = 0.3\n[solver.svl]\nsigma = 0.2\n";
  }
  REQUIRE(run("--config exp.ini sweep --solvers svl --out s.csv") == 0);
  CHECK(slurp("s.csv").find("0.3,svl,") != std::string::npos);
  CHECK(slurp("s.csv").find(",7,") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp("s.csv.manifest.json"));
  CHECK(m["inputs"]["solvers"][0]["sigma"] == "0.2");
  REQUIRE(run("--config exp.ini sweep --solvers svl --runs 9 --out s.csv") == 0);
  CHECK(slurp("s.csv").find(",9,") != std::string::npos);
  {
    std::ofstream f(kWork / "bad.ini");
    f << "colour = blue\n";
  }
  CHECK(run("--config bad.ini sweep") == 2);
  CHECK(run("--config nothere.ini sweep") == 4);
  CHECK(run("sweep --values 0.3 --runs 5 --solvers svl --set svl.sigma=oops") == 2);
}

TEST_CASE("thread count does not change outputs") {
  const std::string args = "sweep --values 0.35,0.45 --solvers svl,meht,bfgs --runs 30 --seed 4 --out s";
  REQUIRE(run(args + "1.csv", "SPIN_ANNEAL_THREADS=1") == 0);
  REQUIRE(run(args + "2.csv", "SPIN_ANNEAL_THREADS=3") == 0);
  CHECK(slurp("s1.csv") == slurp("s2.csv"));
  REQUIRE(run("--threads 2 " + args + "3.csv") == 0);
  CHECK(slurp("s3.csv") == slurp("s1.csv"));
  auto m1 = nlohmann::json::parse(slurp("s1.csv.manifest.json"));
  auto m3 = nlohmann::json::parse(slurp("s3.csv.manifest.json"));
  CHECK(m1["inputs"] == m3["inputs"]);
}

TEST_CASE("landscape subcommands") {
  REQUIRE(run("critical --n 8 --J 0.4 --gamma -0.087 --P 0.32 --starts 200 --out c.csv") == 0);
  CHECK(slurp("c.csv").rfind("energy,distance,label,hessian_index,zero_modes,grad_norm\n", 0) == 0);
  CHECK(slurp("err.txt").find("saddle path distance") != std::string::npos);
  REQUIRE(run("critical --model cim --gamma 0.25 --starts 100 --format json --out c.json") == 0);
  CHECK(nlohmann::json::parse(slurp("c.json"))["schema"] == 1);
  CHECK(run("critical --model spin") == 2);

  REQUIRE(run("basins --gamma 0.25 --P 0.5 --starts 50 --out b.csv") == 0);
  CHECK(slurp("b.csv").rfind("index,label,energy,m_abs,xcorr_abs\n", 0) == 0);

  REQUIRE(run("phasemap --gamma-from -0.2 --gamma-to 0 --gamma-step 0.1 --P-from 0.3 --P-to 0.3 --starts 10 --out p.json") == 0);
  const auto p = nlohmann::json::parse(slurp("p.json"));
  CHECK(p["labels"].size() == 1);
  CHECK(p["labels"][0].size() == 3);
  CHECK(p["boundary"].size() == 1);
}

TEST_CASE("bench") {
  REQUIRE(run("bench --family sk --n 10 --instances 2 --solvers visa,cim --reference oracle --no-timing --out r.json") == 0);
  const auto j = nlohmann::json::parse(slurp("r.json"));
  CHECK(j["schema"] == 1);
  CHECK(j["records"].size() == 4);
  CHECK(run("bench --n 40 --reference oracle") == 2);
  CHECK(run("bench --n 10 --reference file --reference-file none.txt") == 4);
}

TEST_CASE("usage") {
  CHECK(run("") == 2);
  CHECK(run("--version") == 0);
  CHECK(slurp("out.txt").find("0.1.0") != std::string::npos);
  CHECK(run("solve --help") == 0);
}

}
