// Copyright 2026 The nccirc Authors
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

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "nccirc/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nccirc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& rel) { return std::string(NCCIRC_SAMPLES_DIR) + "/" + rel; }

}  // namespace

TEST(Cli, Factor) {
  const auto r = run({"factor", "12"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "12 = 3^1 * 2^2\n");
  const auto rep = run({"--output", "report", "factor", "12", "--layout", "compact"});
  const auto j = nlohmann::json::parse(rep.out);
  EXPECT_EQ(j["factors"], (nlohmann::json{{3, 1}, {2, 2}}));
  EXPECT_EQ(j["verdict"], "consistent");
}

TEST(Cli, FactorStrictPrimeIsInconsistent) {
  const auto r = run({"factor", "7", "--mode", "paper-strict"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("no_fixed_point"), std::string::npos) << r.out;
  EXPECT_EQ(r.err.rfind("nccirc: error[2] inconsistent: ", 0), 0u) << r.err;
}

TEST(Cli, FixpointsNotIsInconsistent) {
  const auto r = run({"fixpoints", sample("not.nl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("orbit of 0: 0 1"), std::string::npos) << r.out;
}

TEST(Cli, FixpointsLimit) {
  const auto r = run({"--output", "report", "fixpoints", sample("identity3.nl"), "--limit", "3"});
  EXPECT_EQ(r.code, 2);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["fixed_points"], (nlohmann::json{"000", "001", "010"}));
  EXPECT_EQ(j["truncated"], true);
  EXPECT_EQ(j["verdict"], "multiple");
}

TEST(Cli, Decide) {
  const auto acc = run({"decide", sample("const1011.nl")});
  EXPECT_EQ(acc.code, 0);
  EXPECT_EQ(acc.out, "accept 011\n");
  const auto rej = run({"decide", sample("const0011.nl")});
  EXPECT_EQ(rej.code, 1);
  EXPECT_EQ(rej.out, "reject 011\n");
  for (const char* engine : {"exhaustive", "functional-graph", "cnf-count"}) {
    EXPECT_EQ(run({"decide", sample("const1011.nl"), "--engine", engine}).out, "accept 011\n");
  }
}

TEST(Cli, ReportsAreByteIdentical) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"--output", "report", "factor", "30"},
        std::vector<std::string>{"--output", "report", "fixpoints", sample("not.nl")},
        std::vector<std::string>{"--output", "report", "ctc", "check", sample("ctc/swap.json")}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
  const auto timed = nlohmann::json::parse(run({"--output", "report", "--timing", "factor", "6"}).out);
  EXPECT_TRUE(timed["timing"].contains("wall_ms"));
  const auto plain = nlohmann::json::parse(run({"--output", "report", "factor", "6"}).out);
  EXPECT_FALSE(plain["timing"].contains("wall_ms"));
}

TEST(Cli, ValidateAndClose) {
  const auto v = run({"validate", sample("half_adder.nl")});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "valid: 2 inputs, 2 outputs, 1 gates\n");
  const auto c = run({"close", sample("not.nl")});
  EXPECT_EQ(c.out, "inputs 1 outputs 1 version 1 closed\nname grandfather\ng0 = NOT in0\noutputs g0\n");
}

TEST(Cli, CtcCommands) {
  const auto check = run({"ctc", "check", sample("ctc/swap.json")});
  EXPECT_EQ(check.code, 2);
  EXPECT_NE(check.out.find("first violation: f = [\"id\",\"id\"]"), std::string::npos) << check.out;
  const auto chain = run({"--output", "report", "ctc", "check", sample("ctc/chain.json")});
  EXPECT_EQ(chain.code, 0);
  EXPECT_EQ(nlohmann::json::parse(chain.out)["causal_order"], (nlohmann::json{1, 2}));
  const auto decide = run({"ctc", "decide", sample("ctc/chain.json")});
  EXPECT_EQ(decide.code, 0);
  EXPECT_EQ(decide.out, "accept \n");
  EXPECT_EQ(run({"ctc", "decide", sample("ctc/swap.json")}).code, 2);
  EXPECT_EQ(run({"ctc", "decide", sample("ctc/swap_const.json")}).code, 2);
  EXPECT_EQ(run({"ctc", "decide", sample("ctc/swap_const.json"), "--waive-full-check"}).code, 0);
  const auto none = run({"ctc", "search-noncausal", "--parties", "2", "--bits", "1"});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.out, "none found (256 candidates)\n");
  EXPECT_EQ(run({"ctc", "search-noncausal", "--parties", "2", "--bits", "2"}).code, 4);
}

TEST(Cli, Constructions) {
  const auto odd = run({"construct", "decision", sample("constructions/parity.json"), "--instance", "101"});
  EXPECT_EQ(odd.code, 0);
  EXPECT_EQ(odd.out, "member witness 101\n");
  const auto even = run({"construct", "decision", sample("constructions/parity.json"), "--instance", "100"});
  EXPECT_EQ(even.code, 1);
  EXPECT_EQ(even.out, "non-member witness 100\n");
  const auto s = run({"construct", "search", sample("constructions/xor101.json"), "--instance", "100"});
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out, "solution 001\n");
  EXPECT_EQ(run({"construct", "search", sample("constructions/parity.json"), "--instance", "100"}).code, 3);
  EXPECT_EQ(run({"construct", "decision", sample("constructions/parity.json"), "--instance", "10"}).code, 3);
}

TEST(Cli, Errors) {
  const auto missing = run({"fixpoints", "/nonexistent.nl"});
  EXPECT_EQ(missing.code, 3);
  EXPECT_EQ(missing.err.rfind("nccirc: error[3] manifest: cannot open", 0), 0u) << missing.err;
  const auto open = run({"fixpoints", sample("ctc/swap_w.nl")});
  EXPECT_EQ(open.code, 2);  // 2 in, 2 out: closable; 00 and 11 fixed
  EXPECT_EQ(run({"bogus"}).code, 3);
  EXPECT_EQ(run({"factor", "1"}).code, 3);
  EXPECT_EQ(run({"decide", sample("const1011.nl"), "--engine", "magic"}).code, 3);
  EXPECT_EQ(run({"--output", "xml", "factor", "6"}).code, 3);
  const auto cap = run({"fixpoints", sample("identity3.nl"), "--engine", "exhaustive"});
  EXPECT_EQ(cap.code, 2);
}

// The installed binary behaves like the in-process entry point.
TEST(Cli, Binary) {
  const std::string cmd = std::string(NCCIRC_CLI_PATH) + " decide " + sample("const1011.nl") + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string out;
  std::array<char, 256> buf;
  while (fgets(buf.data(), buf.size(), p)) out += buf.data();
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(out, "accept 011\n");

  FILE* q = popen((std::string(NCCIRC_CLI_PATH) + " fixpoints " + sample("not.nl") + " >/dev/null 2>&1").c_str(), "r");
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(WEXITSTATUS(pclose(q)), 2);
}
