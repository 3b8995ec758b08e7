// Copyright 2026 The SKA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "acceptance/scenario.h"
#include "support/process.h"

namespace ska {
namespace {

namespace fs = std::filesystem;
using testing::CommandResult;
using testing::shell_quote;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("ska_cli_" + std::to_string(::getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  CommandResult ska(const std::string &args) {
    return testing::run_command(shell_quote(SKA_BINARY) + " --store " +
                                shell_quote((dir / "s.db").string()) + " " +
                                args);
  }

  std::string file(const std::string &name, const std::string &content) {
    std::ofstream(dir / name, std::ios::binary) << content;
    return shell_quote((dir / name).string());
  }

  std::string sample() {
    return shell_quote(std::string(SKA_TESTDATA_DIR) + "/sample_book.txt");
  }

  fs::path dir;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(ska("").exit_code, 2);
  EXPECT_EQ(ska("frobnicate").exit_code, 2);
  EXPECT_EQ(ska("round create --chapter ch1").exit_code, 2);
  EXPECT_EQ(ska("stats --format yaml").exit_code, 2);
  EXPECT_EQ(ska("resolve --round r1").exit_code, 2);
  EXPECT_EQ(ska("--help").exit_code, 0);
}

TEST_F(CliTest, DomainErrorsExitOne) {
  const CommandResult missing = ska("round status r1");
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.err.find("error (not_found)"), std::string::npos)
      << missing.err;
  EXPECT_EQ(ska("ingest " + shell_quote((dir / "nope.txt").string())).exit_code, 1);
  const CommandResult bad = ska("ingest " + file("bad.txt", "## no chapter\nx\n"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;
  EXPECT_EQ(ska("import " + file("bad.json", "{\"format_version\": 99}")).exit_code,
            1);
}

TEST_F(CliTest, SetupCommands) {
  const CommandResult init = ska("init");
  ASSERT_EQ(init.exit_code, 0);
  EXPECT_EQ(init.out.rfind("admin_token\t", 0), 0u);
  const CommandResult ingest = ska("ingest " + sample() + " --id intro");
  ASSERT_EQ(ingest.exit_code, 0) << ingest.err;
  EXPECT_EQ(ingest.out, "textbook\tintro\nchapters\t2\nsections\t3\n");
  EXPECT_EQ(ska("ingest " + sample()).exit_code, 1);

  const CommandResult add = ska("annotator add a1 --name 'Ada'");
  ASSERT_EQ(add.exit_code, 0);
  EXPECT_EQ(add.out.rfind("token\t", 0), 0u);
  EXPECT_NE(ska("annotator list").out.find("\"Ada\""), std::string::npos);
  EXPECT_NE(ska("tokens").out.find("annotator\ta1"), std::string::npos);

  ASSERT_EQ(ska("qualify set-test --section ch1.s1 --concepts " +
                file("gold.txt", "# gold\ncomputer program\nmain memory\n"))
                .exit_code,
            0);
  const CommandResult failed =
      ska("qualify run a1 --concepts " + file("a.txt", "computer program\n"));
  EXPECT_EQ(failed.exit_code, 1);
  EXPECT_NE(failed.out.find("passed\tfalse"), std::string::npos);
  EXPECT_EQ(ska("qualify run a1 --concepts " +
                file("b.txt", "Computer  Program\nmain memory\n"))
                .exit_code,
            0);
  // Participants must match the configured round size.
  EXPECT_EQ(ska("round create --chapter ch1 --participants a1").exit_code, 1);

  const CommandResult stats = ska("stats");
  EXPECT_EQ(stats.exit_code, 1);
  EXPECT_EQ(ska("validate").out, "ok\n");
}

TEST_F(CliTest, ConfigFixesRoundSize) {
  ASSERT_EQ(testing::run_command(
                shell_quote(SKA_BINARY) + " --store " +
                shell_quote((dir / "s.db").string()) + " --config " +
                file("ska.conf", "participants = 2\nmin_section_chars = 10\n") +
                " init")
                .exit_code,
            0);
  ASSERT_EQ(ska("ingest " + sample()).exit_code, 0);
  EXPECT_EQ(ska("round list").out, "");
  for (const char *id : {"a1", "a2"}) {
    ASSERT_EQ(ska(std::string("annotator add ") + id).exit_code, 0);
  }
  ASSERT_EQ(ska("qualify set-test --section ch1.s1 --concepts " +
                file("gold.txt", "computer program\n"))
                .exit_code,
            0);
  for (const char *id : {"a1", "a2"}) {
    ASSERT_EQ(ska(std::string("qualify run ") + id + " --concepts " +
                  file("g.txt", "computer program\n"))
                  .exit_code,
              0);
  }
  const CommandResult round = ska("round create --chapter ch2 --participants a1,a2");
  ASSERT_EQ(round.exit_code, 0) << round.err;
  EXPECT_EQ(ska("round list").out, "r1\tch2\tannotating\n");
}

TEST_F(CliTest, FullStudyThroughTheBinary) {
  const testing::ScenarioReport report =
      testing::run_cli_scenario(SKA_BINARY, SKA_TESTDATA_DIR, dir / "scenario");
  for (const std::string &failure : report.failures) ADD_FAILURE() << failure;
  EXPECT_GT(report.commands, 40);
}

}  // namespace
}  // namespace ska
