#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun eecsim(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "eecsim_cli_test.out";
  const std::string cmd = std::string(EECSIM_BINARY) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::ostringstream s;
  s << in.rdbuf();
  r.out = s.str();
  return r;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, EmptyGridIsHeaderOnly) {
  const CliRun r = eecsim("coverage --xi ''");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("xi_db,selection,los_radius_m,metric,analytic,simulated,std_error,note\n"),
            std::string::npos);
  EXPECT_EQ(r.out.find("success_probability"), std::string::npos);
}

TEST(Cli, CoverageAnchorRow) {
  const CliRun r = eecsim("coverage --xi 10 --selection ranked:1 --rl 300");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("10,ranked:1,300,success_probability,0.86"), std::string::npos) << r.out;
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(eecsim("--config " + write_temp("eec_bad.json", "{").string() + " validate").code, 2);
  EXPECT_EQ(eecsim("--config " + write_temp("eec_bad2.json", R"({"radio":{"oops":1}})").string() +
                   " delay").code,
            2);
  EXPECT_EQ(eecsim("--preset nope delay").code, 2);
  EXPECT_EQ(eecsim("delay --variant fastest").code, 2);
  EXPECT_EQ(eecsim("--reps 0 validate").code, 2);
  EXPECT_EQ(eecsim("").code, 2);
}

TEST(Cli, ValidateWithFewReplicationsPasses) {
  const CliRun r = eecsim("--reps 2000 validate");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# replications: 2000"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, OutputFileIsDeterministic) {
  const fs::path a = fs::temp_directory_path() / "eec_cli_a.csv";
  const fs::path b = fs::temp_directory_path() / "eec_cli_b.csv";
  ASSERT_EQ(eecsim("--seed 5 --reps 200 --simulate --out " + a.string() + " delay --n 1:3:1").code, 0);
  ASSERT_EQ(eecsim("--seed 5 --reps 200 --simulate --threads 2 --out " + b.string() +
                   " delay --n 1:3:1").code,
            0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_FALSE(sa.str().empty());
  EXPECT_EQ(sa.str(), sb.str());
}
