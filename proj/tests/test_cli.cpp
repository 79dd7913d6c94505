#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "pmfht/crypto.hpp"
#include "pmfht/io.hpp"
#include "pmfht/radar.hpp"
#include "support/clouds.hpp"

using namespace pmfht;
using namespace pmfht::testing;

namespace {

const std::string kBin = PMFHT_CLI_BIN;
const std::string kDir = "/tmp/pmfht_cli";

// Runs the tool with stdout/stderr captured to files under kDir.
int run(const std::string& args, const std::string& tag = "run") {
  const std::string cmd = kBin + " " + args + " >" + kDir + "/" + tag + ".out 2>" + kDir + "/" +
                          tag + ".err";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Fixture {
  Fixture() {
    std::system(("rm -rf " + kDir + " && mkdir -p " + kDir).c_str());
    write_xyz(kDir + "/cloud.xyz", random_planar_disk(60, 7));
    SeaClutterParams params;
    params.range_cells = 4;
    params.pulses = 10;
    params.seed = 3;
    write_cube(kDir + "/cube.csv", kDir + "/cube.json", synth_sea_clutter(params));
  }
  std::string cloud = kDir + "/cloud.xyz";
  std::string cube = " --cube " + kDir + "/cube.csv --cube-meta " + kDir + "/cube.json ";
};

double cloud_rel_error(const PointCloud& got, const PointCloud& want) {
  return (got.pts - want.pts).norm() / want.pts.norm();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("basis and transform emit curve and spectrum files") {
  Fixture fx;
  CHECK(run("basis --cloud " + fx.cloud + " --out " + kDir + "/eig.csv") == 0);
  const std::string eig = slurp(kDir + "/eig.csv");
  CHECK(eig.rfind("index,eigenvalue\n", 0) == 0);

  CHECK(run("transform --cloud " + fx.cloud + " --alpha 0.5 --out " + kDir + "/spec.csv",
            "xf") == 0);
  CHECK(slurp(kDir + "/spec.csv")
            .rfind("index,re_x,im_x,mag_x,re_y,im_y,mag_y,re_z,im_z,mag_z,mag\n", 0) == 0);
  // parameters are echoed to stderr as the canonical config dump
  const std::string err = slurp(kDir + "/xf.err");
  CHECK(err.find("pmfht transform") != std::string::npos);
  CHECK(err.find("\"alpha\": 0.5") != std::string::npos);
}

TEST_CASE("encrypted clouds decrypt with the right key and not with a wrong one") {
  Fixture fx;
  const std::string keys = " --cipher " + kDir + "/c.txt --token " + kDir + "/t.bin";
  CHECK(run("encrypt --cloud " + fx.cloud + keys) == 0);
  CHECK(run("decrypt" + keys + " --out " + kDir + "/back.xyz") == 0);

  const PointCloud original = read_cloud(fx.cloud);
  CHECK(cloud_rel_error(read_cloud(kDir + "/back.xyz"), original) <= 1e-10);

  CHECK(run("decrypt" + keys + " --out " + kDir + "/bad.xyz --key-alpha-inv 0.10,0.20,0.90") == 0);
  CHECK(cloud_rel_error(read_cloud(kDir + "/bad.xyz"), original) > 0.1);
}

TEST_CASE("identical configs rerun to byte-identical outputs") {
  Fixture fx;
  std::ofstream(kDir + "/run.json") << R"({
    "cloud": ")" << fx.cloud << R"(",
    "cipher": ")" << kDir << R"(/c1.txt",
    "token": ")" << kDir << R"(/t1.bin",
    "seed": 11
  })";
  CHECK(run("encrypt --config " + kDir + "/run.json") == 0);
  const std::string cipher = slurp(kDir + "/c1.txt");
  const std::string token = slurp(kDir + "/t1.bin");
  CHECK(run("encrypt --config " + kDir + "/run.json") == 0);
  CHECK(slurp(kDir + "/c1.txt") == cipher);
  CHECK(slurp(kDir + "/t1.bin") == token);

  const std::string detect = "detect" + fx.cube +
                             "--scr-grid=-60,20 --trials 20 --calibration-trials 30 --pfa 0.1 "
                             "--target-cell 2 --realizations 3 --out ";
  CHECK(run(detect + kDir + "/d1.csv") == 0);
  CHECK(run(detect + kDir + "/d2.csv") == 0);
  const std::string curve = slurp(kDir + "/d1.csv");
  CHECK(curve == slurp(kDir + "/d2.csv"));
  CHECK(curve.rfind("scr_db,pd\n", 0) == 0);
}

TEST_CASE("flag overrides beat config file values") {
  Fixture fx;
  std::ofstream(kDir + "/base.json") << R"({"alpha": 0.3})";
  const std::string common = "transform --cloud " + fx.cloud + " --out " + kDir;
  CHECK(run(common + "/a.csv --alpha 0.5") == 0);
  CHECK(run(common + "/b.csv --config " + kDir + "/base.json --alpha 0.5") == 0);
  CHECK(run(common + "/c.csv --config " + kDir + "/base.json") == 0);
  CHECK(slurp(kDir + "/a.csv") == slurp(kDir + "/b.csv"));
  CHECK(slurp(kDir + "/a.csv") != slurp(kDir + "/c.csv"));
}

TEST_CASE("filter and sweep agree at a shared order") {
  Fixture fx;
  const std::string proto = "--target-cell 2 --realizations 3 ";
  CHECK(run("sweep" + fx.cube + proto + "--alpha-grid 0.5,1.0 --out " + kDir + "/s.csv") == 0);
  CHECK(run("filter" + fx.cube + proto + "--alpha 0.5 --out " + kDir + "/f.csv") == 0);
  const std::string sweep = slurp(kDir + "/s.csv");
  const std::string filt = slurp(kDir + "/f.csv");
  // the filter line for alpha 0.5 appears verbatim in the sweep curve
  CHECK(sweep.find(filt.substr(filt.find('\n') + 1)) != std::string::npos);
}

TEST_CASE("failures map to exit code 1 with a message") {
  Fixture fx;
  CHECK(run("nonsense", "e1") == 1);
  CHECK(slurp(kDir + "/e1.err").find("help") != std::string::npos);
  CHECK(run("transform --out " + kDir + "/x.csv", "e2") == 1);  // no cloud
  CHECK(slurp(kDir + "/e2.err").find("cloud") != std::string::npos);
  CHECK(run("transform --cloud " + kDir + "/absent.xyz --out " + kDir + "/x.csv", "e3") == 1);
  CHECK(run("transform --cloud " + fx.cloud + " --alpha 99 --out " + kDir + "/x.csv", "e4") == 1);
  std::ofstream(kDir + "/bad.json") << R"({"no_such_key": 1})";
  CHECK(run("basis --config " + kDir + "/bad.json --cloud " + fx.cloud + " --out " + kDir +
            "/x.csv", "e5") == 1);
  CHECK(slurp(kDir + "/e5.err").find("no_such_key") != std::string::npos);
}

}  // TEST_SUITE
