//
// Copyright 2026 The LevyDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("levydp_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the binary with stdout captured to `name`; returns the exit code.
  int Run(const std::string& args, const std::string& name = "stdout.txt") {
    const std::string command = std::string(LEVYDP_CLI_PATH) + " " + args +
                                " > " + (dir_ / name).string() + " 2> " +
                                (dir_ / "stderr.txt").string();
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Read(const fs::path& path) const {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }

  int CountLines(const fs::path& path) const {
    const std::string text = Read(path);
    int lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
  }

  std::string Out(const std::string& sub) const {
    return " --dir " + (dir_ / sub).string();
  }

  fs::path dir_;
};

constexpr char kAccount[] =
    "account --mode multifractal --setting continuous --beta 2 --n 10 --sg 1 "
    "--sigma2 1 --gamma 1 --t 100 --delta 0.01";

TEST_F(CliTest, AccountExample) {
  ASSERT_EQ(Run(std::string(kAccount) + Out("a")), 0) << Read(dir_ / "stderr.txt");
  const std::string csv = Read(dir_ / "a" / "account.csv");
  EXPECT_NE(csv.find("0.0202027"), std::string::npos) << csv;
  EXPECT_NE(csv.find("TimeUniform"), std::string::npos) << csv;
  EXPECT_EQ(csv, Read(dir_ / "stdout.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "manifest.txt"));
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  {
    std::ofstream ini(dir_ / "run.ini");
    ini << "[accounting]\nmode = multifractal\nsetting = discrete\n"
           "k = 1000\neta = 0.1\n[problem]\nn = 10\nsg = 1\n[noise]\n"
           "sigma2 = 1\n";
  }
  ASSERT_EQ(Run("account --config " + (dir_ / "run.ini").string() +
                    " --set accounting.delta=0.01" + Out("c")),
            0)
      << Read(dir_ / "stderr.txt");
  EXPECT_NE(Read(dir_ / "c" / "account.csv").find("0.0202027"),
            std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(Run("account --mode multifractal --setting continuous --t 1"), 2);
  EXPECT_NE(Read(dir_ / "stderr.txt").find("--n"), std::string::npos);
  EXPECT_EQ(Run("verify --suite nonsense"), 2);
  EXPECT_EQ(Run("verify --set bogus.key=1"), 2);
  EXPECT_EQ(Run("frobnicate"), 2);
}

TEST_F(CliTest, DomainErrorsExitThree) {
  EXPECT_EQ(Run("account --mode pure-jump --setting continuous --alpha 0.9 "
                "--sigma_alpha 1 --n 10 --sg 1 --t 1" + Out("p")),
            3);
}

TEST_F(CliTest, VerifyExitCodes) {
  EXPECT_EQ(Run("verify --suite bregman --scale 0.01" + Out("v")), 0);
  EXPECT_EQ(Run("verify --suite bregman --scale 0.01 --min_margin 1e9" +
                Out("w")),
            1);
}

TEST_F(CliTest, VerifyAllIsUnionOfSuites) {
  // Tolerances are sized for full sample counts, so some rows may fail at
  // this scale (exit 1); only the row counts are compared.
  const int all = Run("verify --suite all --scale 0.01" + Out("all"));
  ASSERT_TRUE(all == 0 || all == 1) << Read(dir_ / "stderr.txt");
  int sum = 0;
  for (const char* suite :
       {"bregman", "bbm", "sampler", "poincare", "renyi", "flow"}) {
    const int code =
        Run(std::string("verify --scale 0.01 --suite ") + suite + Out(suite));
    ASSERT_TRUE(code == 0 || code == 1)
        << suite << ": " << Read(dir_ / "stderr.txt");
    sum += CountLines(dir_ / suite / "verify.csv") - 1;
  }
  EXPECT_EQ(CountLines(dir_ / "all" / "verify.csv") - 1, sum);
}

TEST_F(CliTest, SimulateIsReproducible) {
  const std::string args =
      "simulate --n 8 --d 2 --seed 5 --steps 20 --sigma_alpha 0.5 "
      "--sigma2 0.5 --batch 4";
  ASSERT_EQ(Run(args + Out("s1")), 0) << Read(dir_ / "stderr.txt");
  ASSERT_EQ(Run(args + Out("s2")), 0);
  const std::string first = Read(dir_ / "s1" / "trajectory.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, Read(dir_ / "s2" / "trajectory.csv"));
  ASSERT_EQ(Run(args + " --trajectories 3 --checkpoints 0,10,20" + Out("e")),
            0)
      << Read(dir_ / "stderr.txt");
  EXPECT_EQ(CountLines(dir_ / "e" / "ensemble.csv"), 1 + 3 * 3 * 2);
}

TEST_F(CliTest, SimulateTruncationExitsThree) {
  EXPECT_EQ(Run("simulate --n 4 --seed 1 --steps 500 --alpha 1.1 "
                "--sigma_alpha 1.7e308" + Out("t")),
            3);
  EXPECT_NE(Read(dir_ / "t" / "manifest.txt").find("status=truncated"),
            std::string::npos);
}

TEST_F(CliTest, SingleValueSweepMatchesAccount) {
  ASSERT_EQ(Run(std::string(kAccount) + Out("a"), "account.txt"), 0);
  ASSERT_EQ(Run("sweep --axis n --values 10 --mode multifractal "
                "--setting continuous --beta 2 --sg 1 --sigma2 1 --t 100 "
                "--delta 0.01" + Out("w"), "sweep.txt"),
            0)
      << Read(dir_ / "stderr.txt");
  const std::string sweep = Read(dir_ / "w" / "sweep.csv");
  EXPECT_NE(sweep.find("0.020202707317519"), std::string::npos) << sweep;
  EXPECT_NE(Read(dir_ / "a" / "account.csv").find("0.020202707317519"),
            std::string::npos);
}

}  // namespace
